import random
import time

import mpmath as mp
import pytest

from k3gen.dilog import PrecisionCfg, bloch_wigner, dsig
from k3gen.field import make_field
from k3gen.relations import FormalSum, five_term


CFG = PrecisionCfg(bits=256)


def _rand_points(n, seed, span=3.0):
    rng = random.Random(seed)
    pts = []
    while len(pts) < n:
        z = complex(rng.uniform(-span, span), rng.uniform(-span, span))
        if abs(z) > 1e-3 and abs(z - 1) > 1e-3 and abs(z.imag) > 1e-3:
            pts.append(z)
    return pts


def test_real_line_vanishes():
    for x in (0.0, 1.0, 0.25, -7.5, 2.0):
        assert bloch_wigner(x, CFG) == 0


def test_maximum_value_clausen_oracle():
    # D((1+i sqrt 3)/2) = sum sin(n pi/3)/n^2, summed directly with a tail bound
    with mp.workprec(80):
        z = mp.mpc(1, mp.sqrt(3)) / 2
        val = bloch_wigner(z, PrecisionCfg(bits=64))
    s = 0.0
    import math
    N = 200000
    for n in range(1, N):
        s += math.sin(n * math.pi / 3) / (n * n)
    # partial sums of sin(n pi/3) are bounded by 2: Abel tail bound 4/N^2
    assert abs(float(val) - s) < 4.0 / N + 1e-9
    assert mp.nstr(val, 9) == "1.01494161"


def test_functional_equations_bulk():
    t0 = time.time()
    tol = mp.mpf(10) ** -30
    with mp.workprec(300):
        for z in _rand_points(200, seed=2):
            z = mp.mpc(z)
            a = bloch_wigner(z, CFG)
            assert abs(a + bloch_wigner(1 / z, CFG)) < tol
            assert abs(a + bloch_wigner(1 - z, CFG)) < tol
            assert abs(a + bloch_wigner(mp.conj(z), CFG)) < tol
    assert time.time() - t0 < 5.0


def test_five_term_identity_numeric():
    with mp.workprec(300):
        tol = mp.mpf(10) ** -30
        for zx, zy in zip(_rand_points(40, 3), _rand_points(40, 4)):
            x, y = mp.mpc(zx), mp.mpc(zy)
            total = (bloch_wigner(x, CFG) - bloch_wigner(y, CFG)
                     + bloch_wigner(y / x, CFG)
                     - bloch_wigner((1 - y) / (1 - x), CFG)
                     + bloch_wigner((1 - 1 / y) / (1 - 1 / x), CFG))
            assert abs(total) < tol


def test_precision_scaling():
    z = mp.mpc("0.7", "0.4")
    with mp.workprec(700):
        lo = bloch_wigner(z, PrecisionCfg(bits=128))
        hi = bloch_wigner(z, PrecisionCfg(bits=640))
        assert abs(lo - hi) < mp.mpf(2) ** -120


def test_dsig_linear_and_conjugation(k5):
    w = k5.omega()
    x = (w + 2) / 3
    fs = FormalSum({x: 3, (1 - x): 2})
    with mp.workprec(300):
        direct = 3 * bloch_wigner(x.embed(288), CFG) + 2 * bloch_wigner((1 - x).embed(288), CFG)
        assert abs(dsig(fs, CFG) - direct) < mp.mpf(10) ** -60
        # D(z) + D(conj z) = 0 termwise
        sym = fs + fs.conj()
        assert abs(dsig(sym, CFG)) < mp.mpf(10) ** -60


def test_dsig_five_term_vanishes(k5):
    ft = five_term(k5.from_rational(3), (k5.omega() + 2) / 3)
    with mp.workprec(300):
        assert abs(dsig(ft, CFG)) < mp.mpf(10) ** -60


def test_cfg_validation():
    with pytest.raises(ValueError):
        PrecisionCfg(bits=32)
    with pytest.raises(ValueError):
        PrecisionCfg(bits=128, guard=4)
