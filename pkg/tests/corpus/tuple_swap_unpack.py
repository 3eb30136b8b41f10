a, b = 1, 2
a, b = b, a
print(a, b)
(x, y), z = (1, 2), 3
print(x, y, z)
p, q = "hi"
print(p, q)
nums = [10, 20]
m, n = nums
print(m, n)
