def risky():
    raise ValueError("inner")

try:
    try:
        risky()
    except ValueError as e:
        print("inner caught:", e)
        raise
except ValueError as e:
    print("outer caught:", e)

try:
    try:
        raise TypeError("t")
    except ValueError:
        print("not printed")
except TypeError as e:
    print("propagated:", e)
