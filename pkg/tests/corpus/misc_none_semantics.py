x = None
print(x)
print(x is None)
print(x == None)
y = print("side effect")
print(y)
def f():
    pass
print(f() is None)
