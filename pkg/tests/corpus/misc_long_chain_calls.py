print("a-b-c".split("-"))
print("-".join("a,b,c".split(",")))
print("  trim  ".strip().upper())
print("one two three".split(" ")[1].upper())
