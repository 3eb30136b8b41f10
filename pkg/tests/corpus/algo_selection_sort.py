def selection_sort(xs):
    out = []
    work = list(xs)
    while work:
        best = 0
        for i in range(len(work)):
            if work[i] < work[best]:
                best = i
        out.append(work[best])
        rest = []
        for i in range(len(work)):
            if i != best:
                rest.append(work[i])
        work = rest
    return out

print(selection_sort([3, 1, 4, 1, 5, 9, 2, 6]))
