xs = [3, 1, 2]
seen = []
for x in xs:
    seen.append(x * 10)
print(seen)
i = 0
while i < len(xs):
    xs[i] = xs[i] + 1
    i += 1
print(xs)
