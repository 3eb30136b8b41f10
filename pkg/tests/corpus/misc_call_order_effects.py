def log(tag, v):
    print("eval", tag)
    return v

def f(a, b, c=0):
    return a + b + c

print(f(log("a", 1), log("b", 2), c=log("c", 3)))
xs = [log("x0", 0), log("x1", 1)]
print(xs)
