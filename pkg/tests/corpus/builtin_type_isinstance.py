print(type(1))
print(type(1.5))
print(type("s"))
print(type(True))
print(type(None))
print(type([1]))
print(type((1,)))
print(type(range(3)))
print(isinstance(1, int))
print(isinstance(True, int))
print(isinstance(True, bool))
print(isinstance(1.5, (int, float)))
print(isinstance("s", int))
