print(abs(-5))
print(abs(5))
print(abs(-2.5))
print(min(3, 1, 2))
print(max(3, 1, 2))
print(min([4, 2, 9]))
print(max([4, 2, 9]))
print(sum([1, 2, 3]))
print(sum([1, 2, 3], 10))
print(sum([0.5, 0.25]))
print(min("banana"))
print(max("banana"))
