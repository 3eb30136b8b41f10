s = "12345"
total = 0
for ch in s:
    total += int(ch)
print(total)
print(int("007"))
print("num: " + str(99))
