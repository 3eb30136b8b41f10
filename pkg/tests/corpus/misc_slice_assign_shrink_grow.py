xs = [1, 2, 3, 4, 5]
xs[1:4] = [9]
print(xs)
xs[1:2] = [7, 8, 9]
print(xs)
xs[:0] = [0]
print(xs)
xs[len(xs):] = [99]
print(xs)
