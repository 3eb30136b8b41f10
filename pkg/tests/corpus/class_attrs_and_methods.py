class Counter:
    start = 100

    def __init__(self):
        self.n = Counter.start

    def bump(self):
        self.n += 1
        return self.n

c = Counter()
print(c.bump())
print(c.bump())
Counter.start = 5
c2 = Counter()
print(c2.bump())
print(c.n)
print(Counter.start)
