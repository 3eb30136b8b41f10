def add(a, b):
    return a + b

def no_return():
    pass

print(add(2, 3))
print(no_return())
print(add("a", "b"))
