import random

import pytest

from weylpair.poly import Poly, Rat


@pytest.fixture
def rng():
    return random.Random(0x5EED)


def random_rat(rng, lo=-6, hi=6, max_den=4) -> Rat:
    return Rat(rng.randint(lo, hi), rng.randint(1, max_den))


def random_poly(rng, vars=("x", "z"), max_exp=3, n_terms=4,
                lo=-6, hi=6) -> Poly:
    p = Poly.zero()
    for _ in range(n_terms):
        c = random_rat(rng, lo, hi)
        exps = {v: rng.randint(0, max_exp) for v in vars}
        p = p + Poly.monomial(c, exps)
    return p


def random_nonzero_poly(rng, **kw) -> Poly:
    while True:
        p = random_poly(rng, **kw)
        if not p.is_zero():
            return p


def random_param_tuple(rng) -> dict:
    a3 = Rat(0)
    while a3 == 0:
        a3 = random_rat(rng, -9, 9)
    return {"a0": random_rat(rng, -9, 9), "a1": random_rat(rng, -9, 9),
            "a2": random_rat(rng, -9, 9), "a3": a3}
