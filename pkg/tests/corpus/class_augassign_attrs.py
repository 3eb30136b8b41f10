class Counter:
    total = 0

Counter.total += 5
print(Counter.total)

class Registry:
    items = []

Registry.items += ["a"]
Registry.items.append("b")
print(Registry.items)

c = Counter()
print(c.total)
c.total += 100
print(c.total)
print(Counter.total)
