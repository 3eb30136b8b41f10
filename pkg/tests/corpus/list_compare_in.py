print([1, 2] == [1, 2])
print([1, 2] < [1, 3])
print([1, 2] < [1, 2, 0])
print(2 in [1, 2, 3])
print(5 not in [1, 2, 3])
print([] == [])
print([1, [2, 3]] == [1, [2, 3]])
