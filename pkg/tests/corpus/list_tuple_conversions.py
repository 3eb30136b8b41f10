print(list("abc"))
print(tuple([1, 2]))
print(list((3, 4)))
print(tuple("xy"))
print(list(range(3)))
print(tuple(range(3)))
print(list([]))
print(tuple([]))
