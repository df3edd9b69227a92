"""Exact integer helpers: roots, primality, and arithmetic in Z[sqrt(N)].

Elements of Z[sqrt(N)] are plain ``(x, y)`` tuples meaning ``x + y*sqrt(N)``.
"""
import math

isqrt = math.isqrt


def is_square(n):
    if n < 0:
        return False
    s = math.isqrt(n)
    return s * s == n


def iroot(n, k):
    """Largest r with r**k <= n."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def perfect_power(n):
    """Return ``(root, k)`` with root**k == n and k maximal, or ``(n, 1)``."""
    if n < 4:
        return n, 1
    for k in range(n.bit_length(), 1, -1):
        r = iroot(n, k)
        if r > 1 and r ** k == n:
            return r, k
    return n, 1


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n):
    """Miller-Rabin with the first 13 prime bases.

    Deterministic below 3.3e24 (covers every 64-bit input); a strong
    probable-prime test beyond that.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit):
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def is_squarefree(n):
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


# -- Z[sqrt(N)] ---------------------------------------------------------------

def qmul(u, v, n):
    return (u[0] * v[0] + n * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def qpow(u, k, n):
    if k < 0:
        raise ValueError("negative exponent")
    result = (1, 0)
    while k:
        if k & 1:
            result = qmul(result, u, n)
        u = qmul(u, u, n)
        k >>= 1
    return result


def qconj(u):
    return (u[0], -u[1])


def qnorm(u, n):
    return u[0] * u[0] - n * u[1] * u[1]


def neg1_pow(k):
    """(-1)**k as an int for any integer k (including negative k)."""
    return -1 if k % 2 else 1
