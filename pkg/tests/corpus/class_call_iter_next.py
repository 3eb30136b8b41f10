class Doubler:
    def __call__(self, x):
        return x * 2

class CountDown:
    def __init__(self, n):
        self.n = n
    def __iter__(self):
        return self
    def __next__(self):
        if self.n <= 0:
            raise StopIteration()
        self.n -= 1
        return self.n + 1

d = Doubler()
print(d(21))
for v in CountDown(4):
    print(v)
print(list(CountDown(2)))
