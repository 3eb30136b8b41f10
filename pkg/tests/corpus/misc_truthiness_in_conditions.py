vals = [0, 1, "", "a", [], [0], (), (1,), None, 0.0, 0.5]
for v in vals:
    if v:
        print("T", repr(v))
    else:
        print("F", repr(v))
