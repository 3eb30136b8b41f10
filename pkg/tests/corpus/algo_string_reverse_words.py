def reverse_words(s):
    words = s.split(" ")
    out = []
    i = len(words) - 1
    while i >= 0:
        out.append(words[i])
        i -= 1
    return " ".join(out)

print(reverse_words("the quick brown fox"))
print(reverse_words("single"))
