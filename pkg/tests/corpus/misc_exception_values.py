e = ValueError("stored")
print(type(e))
print(isinstance(e, ValueError))
print(isinstance(e, Exception))
try:
    raise e
except ValueError as caught:
    print(caught is e)
    print(str(caught))
