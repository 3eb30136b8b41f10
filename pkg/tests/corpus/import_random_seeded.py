import random
random.seed(42)
print(random.random())
print(random.randint(1, 100))
print(random.randint(1, 100))
xs = [1, 2, 3, 4, 5]
random.shuffle(xs)
print(xs)
print(random.choice(["a", "b", "c"]))
random.seed(42)
print(random.random())
