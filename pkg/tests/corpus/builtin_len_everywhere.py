print(len("hello"))
print(len([1, 2, 3]))
print(len((1,)))
print(len(range(10)))
print(len(""))
print(len([]))
