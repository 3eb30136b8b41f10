try:
    [1, 2][5]
except IndexError as e:
    print("IndexError:", e)
try:
    len(5)
except TypeError as e:
    print("TypeError")
try:
    int("nope")
except ValueError as e:
    print("ValueError:", e)
try:
    undefined_name
except NameError as e:
    print("NameError:", e)
try:
    "a" + 1
except TypeError:
    print("TypeError 2")
try:
    (1, 2)[0] = 5
except TypeError:
    print("TypeError 3")
