"""Arbitrary-precision Bloch-Wigner dilogarithm and its formal-sum extension.

D(z) = Im(Li2(z)) + arg(1-z) * log|z| is computed from a power series for
Li2 after reflection/inversion moves the argument into |z| <= 1/2, which
keeps the series decay geometric at any precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp


@dataclass(frozen=True)
class PrecisionCfg:
    bits: int = 256
    guard: int = 32

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("bits must be >= 64")
        if self.guard < 16:
            raise ValueError("guard must be >= 16")


DEFAULT_CFG = PrecisionCfg()


def _li2_series(z):
    # |z| <= 1/2: sum z^n / n^2
    tol = mp.mpf(2) ** (-(mp.mp.prec + 8))
    total = mp.mpc(0)
    term = mp.mpc(1)
    n = 0
    while True:
        n += 1
        term *= z
        piece = term / (n * n)
        total += piece
        if abs(piece) < tol:
            return total


def _li2_logseries(z):
    # sum B_k u^(k+1) / (k+1)!, u = -log(1-z); here |u| <= 1.8 < 2*pi so the
    # envelope |B_k| u^(k+1)/(k+1)! <= 4|u| (|u|/2pi)^k decays geometrically
    u = -mp.log(1 - z)
    tol = mp.mpf(2) ** (-(mp.mp.prec + 8))
    ratio = abs(u) / (2 * mp.pi)
    bound = 4 * abs(u)
    total = mp.mpc(0)
    power = mp.mpc(1)
    fact = 1
    k = 0
    while True:
        power *= u
        fact *= k + 1
        total += mp.bernoulli(k) * power / fact
        bound *= ratio
        if k > 4 and bound < tol:
            return total
        k += 1


def _li2(z):
    z = mp.mpc(z)
    if z == 0:
        return mp.mpc(0)
    if z == 1:
        return mp.mpc(mp.pi ** 2 / 6)
    if abs(z) > 1:
        # Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2 / 2
        return -_li2(1 / z) - mp.pi ** 2 / 6 - mp.log(-z) ** 2 / 2
    if mp.re(z) > 0.5:
        # Li2(z) = -Li2(1-z) + pi^2/6 - log(z) log(1-z)
        return -_li2(1 - z) + mp.pi ** 2 / 6 - mp.log(z) * mp.log(1 - z)
    if abs(z) <= 0.5:
        return _li2_series(z)
    return _li2_logseries(z)


def bloch_wigner(z, cfg: PrecisionCfg = DEFAULT_CFG):
    """D(z) at cfg.bits working precision; 0 on the real line (incl. z=0,1)."""
    with mp.workprec(cfg.bits + cfg.guard):
        z = mp.mpc(z)
        if z.imag == 0:
            return mp.mpf(0)
        val = mp.im(_li2(z)) + mp.arg(1 - z) * mp.log(abs(z))
        return +val


def dsig(formal_sum, cfg: PrecisionCfg = DEFAULT_CFG):
    """Sum of n_i * D(sigma(x_i)) over a formal sum; the coefficient of i in R(1)."""
    with mp.workprec(cfg.bits + cfg.guard):
        total = mp.mpf(0)
        for x, n in formal_sum.items():
            total += n * bloch_wigner(x.embed(cfg.bits + cfg.guard), cfg)
        return +total
