def f(x):
    if x > 0:
        return "pos"

print(f(1))
print(f(-1))

def g():
    return

print(g())
