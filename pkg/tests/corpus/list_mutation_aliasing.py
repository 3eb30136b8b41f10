a = [1, 2]
b = a
a.append(3)
print(b)
a += [4]
print(b)
c = a + [5]
print(a)
print(c)
b[0] = 99
print(a[0])
