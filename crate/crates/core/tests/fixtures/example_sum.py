n = int(input())
x = []
while len(x) != n:
    v = int(input())
    x += [v]
print(sum(x))
