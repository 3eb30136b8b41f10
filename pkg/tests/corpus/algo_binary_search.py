def bsearch(xs, target):
    lo = 0
    hi = len(xs)
    while lo < hi:
        mid = (lo + hi) // 2
        if xs[mid] == target:
            return mid
        if xs[mid] < target:
            lo = mid + 1
        else:
            hi = mid
    return -1

data = [1, 3, 5, 7, 9, 11]
for t in [1, 7, 11, 4]:
    print(t, bsearch(data, t))
