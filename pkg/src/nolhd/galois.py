"""Small finite fields GF(p**k) via addition/multiplication tables.

Elements are the integers ``0..q-1``; integer ``e`` encodes the polynomial
whose base-``p`` digits are the coefficients (least significant first).  For
prime ``q`` the tables reduce to arithmetic mod ``q``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .exceptions import UnsupportedParameterError


def factor_prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` for prime ``p``, else ``None``."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    return (p, k) if rest == 1 else None


def _poly_mulmod(a, b, modulus, p):
    # a, b: coefficient lists of length k; modulus: monic, length k+1
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            for i in range(k + 1):
                prod[deg - k + i] = (prod[deg - k + i] - c * modulus[i]) % p
    return prod[:k]


def _is_irreducible(modulus, p):
    # modulus monic of degree k; no roots / factors checked by brute force over
    # all monic polynomials of degree 1..k//2
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = list(low) + [1]
            rem = list(modulus)
            for deg in range(k, d - 1, -1):
                c = rem[deg]
                if c:
                    for i in range(d + 1):
                        rem[deg - d + i] = (rem[deg - d + i] - c * divisor[i]) % p
            if not any(rem[:d]):
                return False
    return True


def _digits(e, p, k):
    out = []
    for _ in range(k):
        out.append(e % p)
        e //= p
    return out


def _encode(coeffs, p):
    return sum(c * p**i for i, c in enumerate(coeffs))


@lru_cache(maxsize=None)
def field_tables(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables of GF(q), each ``q x q`` ints.

    Raises
    ------
    UnsupportedParameterError
        If ``q`` is not a prime power.
    """
    pk = factor_prime_power(q)
    if pk is None:
        raise UnsupportedParameterError(f"GF({q}) does not exist: {q} is not a prime power")
    p, k = pk
    elems = range(q)
    if k == 1:
        add = (np.add.outer(elems, elems) % p).astype(np.int64)
        mul = (np.multiply.outer(elems, elems) % p).astype(np.int64)
    else:
        modulus = next(
            list(low) + [1]
            for low in product(range(p), repeat=k)
            if low[0] != 0 and _is_irreducible(list(low) + [1], p)
        )
        digits = [_digits(e, p, k) for e in elems]
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        for a in elems:
            for b in elems:
                add[a, b] = _encode([(x + y) % p for x, y in zip(digits[a], digits[b])], p)
                mul[a, b] = _encode(_poly_mulmod(digits[a], digits[b], modulus, p), p)
    add.setflags(write=False)
    mul.setflags(write=False)
    return add, mul
