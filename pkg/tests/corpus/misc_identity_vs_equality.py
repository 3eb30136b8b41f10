a = [1, 2]
b = [1, 2]
c = a
print(a == b, a is b)
print(a == c, a is c)
s = None
print(s is None, s is not None)
