print(int(3.9))
print(int(-3.9))
print(int("42"))
print(int("  -7  "))
print(int(True))
print(float(3))
print(float("2.5"))
print(float("1e2"))
print(int())
print(float())
