"""Bisection with a geometric-grid sign scan.

Every quantity solved for in this package is a root of a function that is
monotone on a known interval, so a sign scan followed by plain bisection is
robust and more than fast enough.
"""

import numpy as np

from .errors import NoRootError


def scan_bracket(f, lo, hi, n=400):
    """Locate a sign change of f on a geometric grid over [lo, hi].

    Returns (a, b) with f(a) and f(b) of opposite sign (or a == b when the
    grid lands on an exact zero). Raises NoRootError when every grid value
    has the same strict sign.
    """
    xs = np.geomspace(lo, hi, n)
    prev_x = xs[0]
    prev_f = f(prev_x)
    if prev_f == 0.0:
        return prev_x, prev_x
    for x in xs[1:]:
        fx = f(x)
        if fx == 0.0:
            return x, x
        if (fx > 0.0) != (prev_f > 0.0):
            return prev_x, x
        prev_x, prev_f = x, fx
    raise NoRootError(
        f"no sign change on [{lo:g}, {hi:g}] scanned at {n} geometric points"
    )


def bisect(f, a, b, xtol=1e-12, maxiter=200):
    """Root of f on [a, b] by bisection. f(a) and f(b) must differ in sign."""
    fa = f(a)
    if fa == 0.0:
        return a
    fb = f(b)
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise NoRootError(f"no sign change between {a:g} and {b:g}")
    for _ in range(maxiter):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b = m
        if b - a < xtol:
            break
    return 0.5 * (a + b)


def find_root(f, lo, hi, n=400, xtol=1e-12):
    """Convenience wrapper: scan_bracket then bisect."""
    a, b = scan_bracket(f, lo, hi, n)
    if a == b:
        return a
    return bisect(f, a, b, xtol=xtol)
