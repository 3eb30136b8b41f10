try:
    print("body")
except ValueError:
    print("handler")
else:
    print("else")
finally:
    print("finally")

try:
    raise ValueError("boom")
except ValueError as e:
    print("handler:", e)
else:
    print("not printed")
finally:
    print("finally2")
