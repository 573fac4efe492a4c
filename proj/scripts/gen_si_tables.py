#!/usr/bin/env python3
"""Generate Chebyshev coefficient tables for the sine-integral auxiliary functions.

Si(x) = pi/2 - f(x) cos(x) - g(x) sin(x) for x > 0, where

    f(x) = int_0^inf exp(-x t) / (1 + t^2) dt
    g(x) = int_0^inf t exp(-x t) / (1 + t^2) dt

F(w) = x f(x) and G(w) = x^2 g(x) are smooth functions of w = 1/x^2 away from
w = 0, so they admit geometrically convergent Chebyshev expansions on w-intervals
bounded away from zero.  Beyond x = 40 the plain asymptotic series truncated at
18 terms is below 1e-17 absolute.  Fits are computed and validated against
mpmath at 50 digits.

Run from the repository root:  python3 scripts/gen_si_tables.py
"""

import math

import mpmath as mp

mp.mp.dps = 50

# x-interval edges for the Chebyshev branches (w = 1/x^2 on [1/hi^2, 1/lo^2])
EDGES = [(4.0, 8.0), (8.0, 16.0), (16.0, 40.0)]
NTERMS = 48
ASYM_TERMS = 18


def f_true(x):
    x = mp.mpf(x)
    si, ci = mp.si(x), mp.ci(x)
    return (mp.pi / 2 - si) * mp.cos(x) + ci * mp.sin(x)


def g_true(x):
    x = mp.mpf(x)
    si, ci = mp.si(x), mp.ci(x)
    return (mp.pi / 2 - si) * mp.sin(x) - ci * mp.cos(x)


def chebfit(func, a, b, n):
    """Chebyshev coefficients of func on [a, b] from n Chebyshev nodes (mpmath)."""
    nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    vals = [func((a + b) / 2 + (b - a) / 2 * t) for t in nodes]
    coeffs = []
    for j in range(n):
        s = sum(vals[k] * mp.cos(mp.pi * j * (k + mp.mpf(1) / 2) / n) for k in range(n))
        coeffs.append(s * 2 / n)
    coeffs[0] /= 2
    return coeffs


def trim(coeffs, tol=1e-19):
    c = [float(v) for v in coeffs]
    while len(c) > 4 and abs(c[-1]) < tol:
        c.pop()
    return c


def clenshaw(coeffs, t):
    b1 = b2 = 0.0
    for c in reversed(coeffs[1:]):
        b1, b2 = 2.0 * t * b1 - b2 + c, b1
    return t * b1 - b2 + coeffs[0]


class Branch:
    def __init__(self, xlo, xhi):
        self.xlo, self.xhi = xlo, xhi
        self.wlo, self.whi = 1.0 / (xhi * xhi), 1.0 / (xlo * xlo)
        wl, wh = mp.mpf(1) / (mp.mpf(xhi) ** 2), mp.mpf(1) / (mp.mpf(xlo) ** 2)
        self.fc = trim(chebfit(lambda w: mp.sqrt(1 / w) * f_true(mp.sqrt(1 / w)), wl, wh, NTERMS))
        self.gc = trim(chebfit(lambda w: (1 / w) * g_true(mp.sqrt(1 / w)), wl, wh, NTERMS))

    def eval_fg(self, x):
        w = 1.0 / (x * x)
        t = (2.0 * w - (self.wlo + self.whi)) / (self.whi - self.wlo)
        return clenshaw(self.fc, t) / x, clenshaw(self.gc, t) * w


BRANCHES = []


def si_impl(x):
    """Double-precision mirror of the C++ implementation."""
    ax = abs(x)
    if ax <= 4.0:
        u = ax
        s = ax
        m = 0
        while True:
            u *= -ax * ax / ((2 * m + 2) * (2 * m + 3))
            m += 1
            term = u / (2 * m + 1)
            s += term
            if abs(term) < 1e-18 * abs(s) + 1e-300:
                break
        r = s
    else:
        fv = gv = None
        for br in BRANCHES:
            if ax <= br.xhi:
                fv, gv = br.eval_fg(ax)
                break
        if fv is None:
            w = 1.0 / (ax * ax)
            fs = gs = 0.0
            fac = 1.0
            for k in range(ASYM_TERMS - 1, -1, -1):
                pass
            # Horner over precomputed signed factorial coefficients
            fs = 0.0
            gs = 0.0
            for k in range(ASYM_TERMS - 1, -1, -1):
                fs = fs * w + FSER[k]
                gs = gs * w + GSER[k]
            fv = fs / ax
            gv = gs * w
        r = math.pi / 2 - fv * math.cos(ax) - gv * math.sin(ax)
    return -r if x < 0 else r


FSER = [(-1) ** k * math.factorial(2 * k) for k in range(ASYM_TERMS)]
GSER = [(-1) ** k * math.factorial(2 * k + 1) for k in range(ASYM_TERMS)]


def emit(name, arr):
    body = ", ".join(repr(v) for v in arr)
    print(f"static constexpr double {name}[] = {{{body}}};")


def main():
    for xlo, xhi in EDGES:
        BRANCHES.append(Branch(xlo, xhi))

    worst = 0.0
    worst_x = None
    for i in range(6000):
        x = 1e-8 * 10 ** (14.0 * i / 5999)  # 1e-8 .. 1e6
        err = abs(si_impl(x) - float(mp.si(x)))
        if err > worst:
            worst, worst_x = err, x
    # extra-dense near the branch edges
    for edge in (4.0, 8.0, 16.0, 40.0):
        for d in (-1e-9, -1e-3, 0.0, 1e-3, 1e-9, 0.1, -0.1):
            x = edge + d
            err = abs(si_impl(x) - float(mp.si(x)))
            if err > worst:
                worst, worst_x = err, x
    print(f"// max abs error over scan: {worst:.3e} at x = {worst_x!r}")
    for br in BRANCHES:
        print(f"// branch [{br.xlo},{br.xhi}]: {len(br.fc)} f-terms, {len(br.gc)} g-terms")

    for i, br in enumerate(BRANCHES):
        emit(f"kChebF{i}", br.fc)
        emit(f"kChebG{i}", br.gc)
    emit("kAsymF", [float(v) for v in FSER])
    emit("kAsymG", [float(v) for v in GSER])

    print("\n# reference values (25 digits)")
    for label, v in [
        ("Si(pi)", mp.si(mp.pi)),
        ("Si(20)", mp.si(20)),
        ("Si(10*pi)", mp.si(10 * mp.pi)),
        ("(2/pi)*Si(10*pi)", 2 / mp.pi * mp.si(10 * mp.pi)),
        ("Si(1)", mp.si(1)),
        ("Si(4)", mp.si(4)),
        ("Si(40)", mp.si(40)),
        ("Si(1e6)", mp.si(1e6)),
    ]:
        print(f"{label} = {mp.nstr(v, 25)}")


if __name__ == "__main__":
    main()
