i = 0
while i < 3:
    i += 1
else:
    print("else ran", i)

j = 0
while j < 10:
    j += 1
    if j == 2:
        break
else:
    print("not printed")
print("after", j)
