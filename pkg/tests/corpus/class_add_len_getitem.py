class Bag:
    def __init__(self, items):
        self.items = items
    def __add__(self, other):
        return Bag(self.items + other.items)
    def __len__(self):
        return len(self.items)
    def __getitem__(self, i):
        return self.items[i]
    def __setitem__(self, i, v):
        self.items[i] = v
    def __repr__(self):
        return "Bag(" + repr(self.items) + ")"

b = Bag([1, 2]) + Bag([3])
print(b)
print(len(b))
print(b[0], b[2])
b[0] = 99
print(b)
if b:
    print("truthy")
print(len(Bag([])) == 0)
