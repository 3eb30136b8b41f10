x = 5
print(-x)
print(+x)
print(--x)
print(-(-(-x)))
print(not True)
print(not 0)
print(not [])
print(not "a")
