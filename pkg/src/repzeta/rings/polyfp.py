"""Dense polynomials over Z/m as coefficient lists, lowest degree first.

The zero polynomial is ``[]``; all other polynomials have a nonzero
leading coefficient.  Division requires a unit leading coefficient.
"""

from __future__ import annotations


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def add(a, b, m):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)]
    return trim(out)


def sub(a, b, m):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)]
    return trim(out)


def mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % m for c in out])


def divmod_(a, b, m):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = pow(b[-1], -1, m)
    r = [c % m for c in a]
    trim(r)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * lead_inv % m
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % m
    return trim(q), trim(r[:db])


def mod(a, b, m):
    return divmod_(a, b, m)[1]


def gcd(a, b, m):
    """Monic gcd over a field Z/m."""
    a, b = trim([c % m for c in a]), trim([c % m for c in b])
    while b:
        a, b = b, mod(a, b, m)
    if not a:
        return a
    inv = pow(a[-1], -1, m)
    return [c * inv % m for c in a]


def powmod(a, e, modulus, m):
    result = [1]
    base = mod(a, modulus, m)
    while e:
        if e & 1:
            result = mod(mul(result, base, m), modulus, m)
        e >>= 1
        if e:
            base = mod(mul(base, base, m), modulus, m)
    return result


def is_irreducible(a, p):
    """Irreducibility over F_p: no common factor with x^(p^i) - x for i <= deg/2."""
    a = trim([c % p for c in a])
    d = len(a) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(d // 2):
        h = powmod(h, p, a, p)
        if len(gcd(a, sub(h, x, p), p)) > 1:
            return False
    return True


def smallest_irreducible(p, f):
    """Monic irreducible of degree f over F_p with the smallest coefficient code.

    Candidates are ordered by the integer ``sum(c_i * p**i)`` over the
    non-leading coefficients, which compares high-degree coefficients first.
    """
    if f == 1:
        return [0, 1]
    for code in range(p ** f):
        coeffs = [(code // p ** i) % p for i in range(f)] + [1]
        if coeffs[0] and is_irreducible(coeffs, p):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {f} over F_{p}")
