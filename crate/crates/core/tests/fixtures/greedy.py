n = int(input())
for _ in range(n + 1):
    v = int(input())
print(0)
