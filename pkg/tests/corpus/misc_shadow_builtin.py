len_backup = len
def measure(x):
    return len_backup(x)

len = 5
print(len)
print(measure("abcd"))
