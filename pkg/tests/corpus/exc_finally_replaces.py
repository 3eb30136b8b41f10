def f():
    try:
        raise ValueError("original")
    finally:
        raise TypeError("replacement")

try:
    f()
except TypeError as e:
    print("replaced:", e)
except ValueError:
    print("not printed")

def g():
    try:
        return "from try"
    finally:
        return "from finally"

print(g())
