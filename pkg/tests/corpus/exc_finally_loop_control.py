for i in range(4):
    try:
        if i == 1:
            continue
        if i == 3:
            break
        print("body", i)
    finally:
        print("fin", i)
print("after")

i = 0
while i < 3:
    try:
        i += 1
        if i == 2:
            continue
    finally:
        print("wfin", i)
print("done", i)
