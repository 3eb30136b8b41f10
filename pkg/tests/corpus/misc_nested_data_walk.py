data = [("a", [1, 2]), ("b", [3]), ("c", [])]
for name, nums in data:
    if not nums:
        print(name, "empty")
        continue
    total = 0
    for n in nums:
        total += n
    print(name, total)
