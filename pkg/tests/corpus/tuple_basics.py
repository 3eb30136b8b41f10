t = (1, 2, 3)
print(t)
print(t[1])
print(t[:2])
print(len(t))
print(t + (4,))
print(t * 2)
print((1,))
print(())
single = 5,
print(single)
a, b, c = t
print(a, b, c)
