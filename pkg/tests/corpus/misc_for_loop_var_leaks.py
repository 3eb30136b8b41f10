for i in range(3):
    pass
print(i)
for c in "xyz":
    pass
print(c)
