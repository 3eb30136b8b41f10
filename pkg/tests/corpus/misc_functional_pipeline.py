from functools import reduce

def mapped(f, xs):
    out = []
    for x in xs:
        out.append(f(x))
    return out

def filtered(pred, xs):
    out = []
    for x in xs:
        if pred(x):
            out.append(x)
    return out

nums = list(range(1, 11))
evens = filtered(lambda n: n % 2 == 0, nums)
squares = mapped(lambda n: n * n, evens)
print(evens)
print(squares)
print(reduce(lambda a, b: a + b, squares, 0))
