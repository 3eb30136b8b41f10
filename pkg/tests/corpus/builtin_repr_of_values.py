print(repr(1))
print(repr(1.0))
print(repr(0.5))
print(repr("a'"))
print(repr([1, "two", 3.0]))
print(repr((1,)))
print(repr((1, 2)))
print(repr(None))
print(repr(True))
print(repr([[]]))
print(repr(range(1, 5)))
