s = "tab\there"
print(s)
print(repr(s))
print(repr("quote'd"))
print(repr('double"d'))
print(repr("both'\"x"))
print("\x41\u0042")
print(repr("nl\n"))
