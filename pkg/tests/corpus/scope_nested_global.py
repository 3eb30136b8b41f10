counter = 0

def outer():
    def inner():
        global counter
        counter += 10
    inner()
    inner()

outer()
print(counter)

x = "module"

def deep():
    def deeper():
        def deepest():
            return x
        return deepest()
    return deeper()

print(deep())
