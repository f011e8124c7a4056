import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from varsmooth import kernel
from varsmooth._kernel_py import (mul_terms, prepare_divisor, reduce_terms)
from varsmooth.fields import QQ
from varsmooth.ring import Ring

compiled = kernel.compiled
needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled kernel not built")

RING = Ring(QQ, ("x", "y", "z"))


def pack_poly(term_list):
    """[(exps, coeff)] -> descending (keys, coeffs), duplicates summed."""
    acc = {}
    for exps, c in term_list:
        k = RING.pack(exps)
        acc[k] = acc.get(k, 0) + c
    items = sorted(((k, c) for k, c in acc.items() if c), reverse=True)
    return [k for k, _ in items], [c for _, c in items]


exps_st = st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
coeff_st = st.integers(-50, 50).filter(bool)
poly_st = st.lists(st.tuples(exps_st, coeff_st), min_size=0,
                   max_size=6).map(pack_poly)
nonzero_poly_st = poly_st.filter(lambda kc: bool(kc[0]))
prime_st = st.sampled_from([0, 0, 5, 101, 32003])


@needs_compiled
def test_backend_is_compiled_by_default():
    assert kernel.backend_name() == "compiled"
    assert kernel.active is compiled


@needs_compiled
@given(poly_st, poly_st, prime_st)
def test_mul_terms_twins_agree(a, b, p):
    ak, ac = a
    bk, bc = b
    if p:
        ac = [c % p for c in ac]
        bc = [c % p for c in bc]
    got_py = mul_terms(list(ak), list(ac), list(bk), list(bc),
                       RING.mul_off, p)
    got_c = compiled.mul_terms(list(ak), list(ac), list(bk), list(bc),
                               RING.mul_off, p)
    assert list(got_py[0]) == list(got_c[0])
    assert list(got_py[1]) == list(got_c[1])


@needs_compiled
@given(nonzero_poly_st, st.lists(nonzero_poly_st, min_size=1, max_size=3),
       prime_st)
def test_reduce_terms_twins_agree(f, divisors, p):
    fk, fc = f
    if p:
        fc = [c % p for c in fc]
        if not all(fc):
            return
    divs_py = []
    divs_c = []
    for dk, dc in divisors:
        if p:
            dc = [c % p for c in dc]
            if not all(dc):
                return
        divs_py.append(prepare_divisor(list(dk), list(dc), p))
        divs_c.append(compiled.prepare_divisor(list(dk), list(dc), p))
    guards = RING.guards
    rk_py, rc_py, m_py = reduce_terms(list(fk), list(fc), divs_py, guards, p)
    rk_c, rc_c, m_c = compiled.reduce_terms(list(fk), list(fc), divs_c,
                                            guards, p)
    assert list(rk_py) == list(rk_c)
    assert [int(c) for c in rc_py] == [int(c) for c in rc_c]
    assert int(m_py) == int(m_c)


def _positive_leading(dc):
    # integer divisors reach the kernel zform-normalized: leading coeff > 0
    return dc if dc[0] > 0 else [-c for c in dc]


@given(nonzero_poly_st, st.lists(nonzero_poly_st, min_size=1, max_size=3))
def test_reduce_terms_integer_contract(f, divisors):
    # remainder keys strictly descending, none divisible by a divisor lead,
    # positive mult
    fk, fc = f
    divs = [prepare_divisor(list(dk), _positive_leading(list(dc)), 0)
            for dk, dc in divisors]
    rk, rc, mult = reduce_terms(list(fk), list(fc), divs, RING.guards, 0)
    assert mult >= 1
    assert all(rk[i] > rk[i + 1] for i in range(len(rk) - 1))
    assert all(c != 0 for c in rc)
    for k in rk:
        for d in divs:
            assert ((k | RING.guards) - d[0]) & RING.guards != RING.guards


@given(nonzero_poly_st, st.lists(nonzero_poly_st, min_size=1, max_size=2))
def test_reduce_terms_mod_p_exact(f, divisors):
    p = 101
    fk, fc = f
    fc = [c % p for c in fc]
    if not all(fc):
        return
    divs = []
    for dk, dc in divisors:
        dc = [c % p for c in dc]
        if not all(dc):
            return
        divs.append(prepare_divisor(list(dk), list(dc), p))
    rk, rc, mult = reduce_terms(list(fk), list(fc), divs, RING.guards, p)
    assert mult == 1
    assert all(0 < c < p for c in rc)


def test_python_backend_subprocess_smoke():
    # the fallback kernel must carry a full verdict computation on its own
    code = (
        "from varsmooth import kernel\n"
        "assert kernel.backend_name() == 'python', kernel.backend_name()\n"
        "from varsmooth.fields import QQ\n"
        "from varsmooth.ring import Ring\n"
        "from varsmooth.poly import Polynomial\n"
        "from varsmooth.groebner import Ideal\n"
        "from varsmooth.driver import Config, smoothness_test\n"
        "R = Ring(QQ, ('x', 'y'))\n"
        "x = Polynomial.variable(R, 0); y = Polynomial.variable(R, 1)\n"
        "cusp = Ideal(R, [y*y - x*x*x])\n"
        "circle = Ideal(R, [x*x + y*y - 1])\n"
        "assert smoothness_test(cusp, Config()).status == 'singular'\n"
        "assert smoothness_test(circle, Config()).status == 'smooth'\n"
        "print('ok')\n"
    )
    import os
    env = dict(os.environ, VARSMOOTH_KERNEL="python")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, timeout=120)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"
