"""Dense univariate polynomials over the integers.

A polynomial is a list of ints in ascending order of degree with no
trailing zeros; ``[]`` is the zero polynomial. Operations that would need
rational coefficients instead return a result scaled by a *positive*
constant, so signs of values are always preserved. That is all the Sturm
and sign machinery needs.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import kernels


def trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(p) - 1


def content(p):
    g = 0
    for c in p:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    return g


def primitive(p):
    """Divide out the positive content; the sign of ``p`` is kept."""
    g = content(p)
    if g <= 1:
        return list(p)
    return [c // g for c in p]


def from_rationals(coeffs):
    """Clear denominators of rational coefficients with a positive factor."""
    den = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    out = [int(c * den) for c in coeffs]
    return primitive(trim(out))


def derivative(p):
    return [i * p[i] for i in range(1, len(p))]


def neg(p):
    return [-c for c in p]


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def pdivmod(a, b):
    """Pseudo-division: ``|lc(b)|**k * a = quot * b + rem`` with ``deg rem < deg b``.

    The multiplier is positive so ``rem`` carries the sign of the true
    remainder over the rationals.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    r = list(a)
    if len(r) - 1 < db:
        return [], r
    lb = b[-1]
    mult = abs(lb)
    sgn = 1 if lb > 0 else -1
    quot = [0] * (len(r) - db)
    if db == 0:
        return [c * sgn for c in r], []
    while len(r) - 1 >= db:
        shift = len(r) - 1 - db
        lr = r[-1]
        # r <- |lb| * r - sgn * lr * x^shift * b, cancelling the top term
        f = sgn * lr
        if mult != 1:
            r = [mult * c if c else 0 for c in r]
            quot = [mult * c if c else 0 for c in quot]
        quot[shift] += f
        for j in range(db + 1):
            bj = b[j]
            if bj:
                r[shift + j] -= f * bj
        r.pop()
        trim(r)
    return trim(quot), r


def prem(a, b):
    return pdivmod(a, b)[1]


def div_exact(a, b):
    """Quotient of ``a`` by a divisor ``b``, up to a positive constant."""
    quot, rem = pdivmod(a, b)
    if rem:
        raise ArithmeticError("division is not exact")
    return primitive(quot)


def gcd_poly(a, b):
    """Greatest common divisor via the primitive remainder sequence.

    The result is primitive with a positive leading coefficient.
    """
    a = primitive(trim(list(a)))
    b = primitive(trim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = prem(a, b)
        a, b = b, primitive(r)
    if not a:
        return []
    if a[-1] < 0:
        a = neg(a)
    return a


def is_constant(p):
    return len(p) <= 1


@lru_cache(maxsize=4096)
def _sturm_chain_cached(p):
    p = list(p)
    chain = [primitive(p), primitive(derivative(p))]
    while chain[-1]:
        r = prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(primitive(neg(r)))
    if not chain[-1]:
        chain.pop()
    return tuple(tuple(c) for c in chain)


def sturm_chain(p):
    """Signed remainder sequence ``p, p', -rem(p, p'), ...``.

    Each member is scaled by a positive constant, which leaves every sign
    variation count unchanged.
    """
    return [list(c) for c in _sturm_chain_cached(tuple(p))]


def sign_at(p, x):
    """Exact sign of ``p(x)`` at a rational ``x``."""
    x = Fraction(x)
    v = kernels.homog_eval(p, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def variations_at(chain, x):
    x = Fraction(x)
    return kernels.chain_variations(chain, x.numerator, x.denominator)


def variations_at_infinity(chain, positive=True):
    signs = []
    for c in chain:
        lc = c[-1]
        if not positive and (len(c) - 1) % 2:
            lc = -lc
        signs.append(lc)
    return kernels.sign_variations(signs)


def enclose_sign(p, lo, hi):
    """Sign of ``p`` on ``[lo, hi]`` if an enclosure of its range excludes 0.

    Returns +1 or -1 when the sign is certified constant, ``None`` otherwise.
    For ``lo >= 0`` the monomials are monotone, which gives a cheap and
    tight bound; otherwise an interval Horner scheme is used.
    """
    lo = Fraction(lo)
    hi = Fraction(hi)
    if lo >= 0:
        pos = [c if c > 0 else 0 for c in p]
        negc = [c if c < 0 else 0 for c in p]
        # lower bound: pos(lo) + neg(hi); upper bound: pos(hi) + neg(lo)
        n = len(p) - 1
        a, d = lo.numerator, lo.denominator
        b, e = hi.numerator, hi.denominator
        dn = d**n
        en = e**n
        lower = kernels.homog_eval(pos, a, d) * en + kernels.homog_eval(negc, b, e) * dn
        if lower > 0:
            return 1
        upper = kernels.homog_eval(pos, b, e) * dn + kernels.homog_eval(negc, a, d) * en
        if upper < 0:
            return -1
        return None
    lo_v = Fraction(0)
    hi_v = Fraction(0)
    for c in reversed(p):
        cands = (lo_v * lo, lo_v * hi, hi_v * lo, hi_v * hi)
        lo_v = min(cands) + c
        hi_v = max(cands) + c
    if lo_v > 0:
        return 1
    if hi_v < 0:
        return -1
    return None



def _q_divexact(a, b):
    """Exact quotient over the rationals of ``a`` (Fractions) by integer ``b``."""
    db = len(b) - 1
    if len(a) - 1 < db:
        return []
    lb = b[-1]
    r = [Fraction(c) for c in a]
    quot = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db] / lb
        quot[k] = c
        if c:
            for j in range(db + 1):
                if b[j]:
                    r[k + j] -= c * b[j]
    if any(r[:db]):
        raise ArithmeticError("division is not exact")
    return trim(quot)


def _q_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return trim(out)


def yun(f):
    """Square-free decomposition of a nonconstant integer polynomial.

    Returns ``[(factor, multiplicity), ...]`` with primitive, pairwise coprime,
    squarefree factors such that ``f`` equals the product of
    ``factor**multiplicity`` up to a rational constant. Factors that are
    constant are omitted.
    """
    f = primitive(trim(list(f)))
    if len(f) <= 1:
        return []
    fp = derivative(f)
    a0 = gcd_poly(f, fp)
    b = _q_divexact(f, a0)
    c = _q_divexact(fp, a0)
    d = _q_sub(c, derivative(b))
    out = []
    i = 1
    while len(b) > 1:
        a = gcd_poly(from_rationals(b), from_rationals(d))
        if len(a) > 1:
            out.append((a, i))
        b = _q_divexact(b, a)
        c = _q_divexact(d, a)
        d = _q_sub(c, derivative(b))
        i += 1
    return out


def squarefree_part(f):
    f = primitive(trim(list(f)))
    if len(f) <= 1:
        return f
    g = gcd_poly(f, derivative(f))
    if len(g) <= 1:
        return f
    return div_exact(f, g)
