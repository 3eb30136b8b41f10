def t(x):
    print("eval", x)
    return x

print(t(True) and t(False))
print(t(False) and t(True))
print(t(True) or t(False))
print(t(False) or t(True))
print(t(0) or t("") or t("val"))
print(t(1) and t(2) and t(3))
