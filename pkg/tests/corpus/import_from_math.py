from math import sqrt, pi
print(sqrt(25))
print(pi > 3.14)
from math import floor as fl
print(fl(9.9))
