pairs = [(1, "one"), (2, "two"), (3, "three")]
total = 0
names = []
for num, name in pairs:
    total += num
    names.append(name)
print(total)
print(names)
print(", ".join(names))
