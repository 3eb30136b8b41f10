try:
    print(1 / 0)
except ZeroDivisionError as e:
    print("div:", e)
try:
    print(1 // 0)
except ZeroDivisionError as e:
    print("floordiv:", e)
try:
    print(1 % 0)
except ZeroDivisionError as e:
    print("mod:", e)
