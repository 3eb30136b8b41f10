print(1 / 2)
print(15 / 3)
print(0.1 + 0.2)
print(3.5 // 2)
print(3.5 % 2)
print(2.0 ** 0.5)
print(1.0)
print(-0.5)
print(1e3)
print(2.5e-2)
