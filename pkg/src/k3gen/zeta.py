"""Special values: L(chi_D, 2), zeta_k(2), zeta_k'(-1), and the K2-order logic.

The L-value is assembled from Hurwitz zetas over residues mod |D|,

    L(chi_D, 2) = |D|^-2 * sum_{a=1}^{|D|} chi_D(a) zeta(2, a/|D|),

which converges at any precision with O(|D|) special-function calls.  The
derived quantities follow the exact identities

    zeta_k(2) = zeta(2) L(chi_D, 2),
    vol(PGL2(O)\\H) = |D|^{3/2} zeta_k(2) / (8 pi^2) = -pi * zeta_k'(-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .dilog import PrecisionCfg, DEFAULT_CFG, dsig
from .field import FieldCtx
from .ideals import kronecker


@dataclass(frozen=True)
class ZetaReport:
    L2: mp.mpf
    zeta2: mp.mpf
    zprime: mp.mpf
    vol: mp.mpf
    bits: int


def zeta_report(ctx: FieldCtx, cfg: PrecisionCfg = DEFAULT_CFG) -> ZetaReport:
    return _zeta_report_cached(ctx, cfg.bits, cfg.guard)


@lru_cache(maxsize=64)
def _zeta_report_cached(ctx: FieldCtx, bits: int, guard: int) -> ZetaReport:
    cfg = PrecisionCfg(bits=bits, guard=guard)
    N = ctx.conductor
    with mp.workprec(cfg.bits + cfg.guard):
        total = mp.mpf(0)
        for a in range(1, N + 1):
            chi = kronecker(ctx.D, a)
            if chi:
                total += chi * mp.zeta(2, mp.mpf(a) / N)
        L2 = total / N ** 2
        zeta2 = mp.pi ** 2 / 6 * L2
        vol = mp.mpf(N) ** mp.mpf("1.5") * zeta2 / (8 * mp.pi ** 2)
        zprime = -vol / mp.pi
        return ZetaReport(L2=+L2, zeta2=+zeta2, zprime=+zprime, vol=+vol, bits=cfg.bits)


def lichtenbaum_k2(ctx: FieldCtx, reg_over_2pii, cfg: PrecisionCfg = DEFAULT_CFG):
    """-(reg/2pii) / (12 zeta_k'(-1)); equals N_beta/|K2(O)| for a Bloch element."""
    rep = zeta_report(ctx, cfg)
    with mp.workprec(cfg.bits + cfg.guard):
        return -mp.mpf(reg_over_2pii) / (12 * rep.zprime)


def dgamma(ctx: FieldCtx, gamma, M: int, cfg: PrecisionCfg = DEFAULT_CFG):
    """The test quantity of the direct generator search.

    Returns (value, nearest, residual) with
    value = -M * (Dsig(gamma)/2pi) / (12 zeta_k'(-1)) = N_gamma * M / |K2(O)|.
    """
    if M < 1:
        raise ValueError("M must be a positive integer")
    rep = zeta_report(ctx, cfg)
    with mp.workprec(cfg.bits + cfg.guard):
        reg = dsig(gamma, cfg) / (2 * mp.pi)
        value = -M * reg / (12 * rep.zprime)
        nearest = int(mp.nint(value))
        residual = abs(value - nearest)
        return +value, nearest, +residual
