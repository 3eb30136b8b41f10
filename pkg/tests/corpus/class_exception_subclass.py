class AppError(Exception):
    pass

class NotFound(AppError):
    pass

try:
    raise NotFound("missing thing")
except AppError as e:
    print("caught:", e)
print(isinstance(NotFound("x"), Exception))

try:
    raise AppError("generic")
except NotFound:
    print("not this one")
except AppError as e:
    print("app error:", e)
