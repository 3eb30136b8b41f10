def checked_div(a, b):
    assert b != 0, "divide by zero"
    return a / b

print(checked_div(6, 3))
try:
    checked_div(1, 0)
except AssertionError as e:
    print("assert failed:", e)

try:
    assert False
except AssertionError as e:
    print("bare assert:", repr(e))
assert True, "never shown"
print("end")
