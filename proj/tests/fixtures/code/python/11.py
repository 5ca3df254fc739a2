def gcd(a, b):
    # Euclid's algorithm
    while b:
        a, b = b, a % b
    return a


def lcm(a, b):
    return a * b // gcd(a, b)
