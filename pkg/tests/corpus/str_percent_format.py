print("x=%d" % 5)
print("%s and %s" % ("a", "b"))
print("%.2f" % 3.14159)
print("%5d|" % 42)
