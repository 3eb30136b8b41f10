print("a" < "b")
print("abc" < "abd")
print("abc" == "abc")
print("a" in "cat")
print("x" not in "cat")
print("" in "cat")
print("cat" in "cat")
