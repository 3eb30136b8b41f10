total = (1 +
         2 +
         3)
print(total)
xs = [
    1,
    2,
    3,
]
print(xs)
y = 10 + \
    20
print(y)
