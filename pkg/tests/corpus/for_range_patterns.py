for i in range(3):
    print("a", i)
for i in range(2, 5):
    print("b", i)
for i in range(6, 0, -2):
    print("c", i)
total = 0
for i in range(101):
    total += i
print(total)
