# leading comment
x = 1  # trailing comment

# blank line above
print(x)


print("end")  # done
