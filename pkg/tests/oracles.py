"""High-precision reference computations, independent of the package code."""

import mpmath as mp

mp.mp.dps = 40


def h(p):
    p = mp.mpf(p)
    if p in (0, 1):
        return mp.mpf(0)
    return -p * mp.log(p, 2) - (1 - p) * mp.log(1 - p, 2)


def f_qm(beta):
    beta = mp.mpf(beta)
    return mp.mpf(1) / 2 + mp.sqrt(8 - (8 * beta - 4) ** 2) / 8


def f_ns(beta):
    return mp.mpf(3) / 2 - mp.mpf(beta)


def root(f, lo, hi):
    """Root of the security margin 3 - 4 f(beta) - h(beta) bracketed by [lo, hi]."""
    return mp.findroot(lambda b: 3 - 4 * f(b) - h(b), (mp.mpf(lo), mp.mpf(hi)), solver="illinois")


TSIRELSON = (2 + mp.sqrt(2)) / 4
