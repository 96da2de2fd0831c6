"""Independent brute-force oracles the tests check the package against.

These deliberately share no code with primekit: plain trial division and
direct evaluation only, so they stay valid even if the package is wrong.
"""

from __future__ import annotations

from math import isqrt


def slow_is_prime(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    d = 3
    while d * d <= x:
        if x % d == 0:
            return False
        d += 2
    return True


def slow_primes_below(limit: int) -> list[int]:
    return [x for x in range(2, limit) if slow_is_prime(x)]


def slow_smallest_factor(x: int) -> int:
    for d in range(2, isqrt(x) + 1):
        if x % d == 0:
            return d
    return x
