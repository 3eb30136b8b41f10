print(1 + 2)
print(7 - 10)
print(6 * 7)
print(7 // 2)
print(-7 // 2)
print(7 % 3)
print(-7 % 3)
print(2 ** 10)
