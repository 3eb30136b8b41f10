import math
try:
    math.sqrt(-1)
except ValueError as e:
    print("domain:", e)
print(math.floor(-2.5))
print(math.ceil(-2.5))
