"""Seeded random generators for tests and the CLI self-check suite.

Everything here is deterministic given (seed, shape parameters), and all
outputs are exact: rational coefficients with small numerators/denominators,
frequencies restricted to a small band (default {-1, 0, 1} per coordinate).
"""

import random
from itertools import product as iproduct

from gmpy2 import mpq

from .exact import CRat
from .scalar_ring import ParamCoeff, ScalarFn

__all__ = [
    "random_rational",
    "random_real_scalar",
    "random_hamiltonian",
    "random_symmetric_u",
    "random_weyl",
]


def random_rational(rng, num_bound=3, den_choices=(1, 2, 3)):
    """A small nonzero-biased exact rational."""
    num = rng.randint(-num_bound, num_bound)
    return mpq(num, rng.choice(den_choices))


def _random_freqs(rng, n, count, band):
    dim = 2 * n
    freqs = []
    tries = 0
    while len(freqs) < count and tries < 50 * count:
        k = tuple(rng.choice(band) for _ in range(dim))
        tries += 1
        if any(k) and k not in freqs and tuple(-x for x in k) not in freqs:
            freqs.append(k)
    return freqs


def random_real_scalar(rng, n, terms=2, band=(-1, 0, 1), zero_mean=True,
                       allow_sin=True):
    """A random real trigonometric polynomial with small exact coefficients."""
    f = ScalarFn.zero(n)
    for k in _random_freqs(rng, n, terms, band):
        c = random_rational(rng)
        if c == 0:
            c = mpq(1, 2)
        if allow_sin and rng.random() < 0.5:
            f = f + ScalarFn.sine(n, k, CRat(c))
        else:
            f = f + ScalarFn.cosine(n, k, CRat(c))
    if not zero_mean:
        f = f + ScalarFn.const(n, CRat(random_rational(rng)))
    return f


def random_hamiltonian(rng, n, terms=2, band=(-1, 0, 1)):
    """A random real Hamiltonian (mean value irrelevant, kept zero-mean)."""
    return random_real_scalar(rng, n, terms=terms, band=band, zero_mean=True)


def random_symmetric_u(rng, n, terms=1, band=(-1, 0, 1)):
    """Totally symmetric lowered connection coefficients u_{kij}.

    Returns a dict keyed by sorted index triples (i <= j <= k) with real
    zero-mean ScalarFn values; this is exactly the raw data a symplectic
    connection on the torus is built from.
    """
    dim = 2 * n
    out = {}
    for triple in iproduct(range(dim), repeat=3):
        if not (triple[0] <= triple[1] <= triple[2]):
            continue
        if rng.random() < 0.5:
            continue
        f = random_real_scalar(rng, n, terms=terms, band=band, zero_mean=True)
        if not f.is_zero():
            out[triple] = f
    return out


def random_weyl(rng, n, N, terms=4, max_y=2, forms=True):
    """A random Weyl-algebra element for property tests (small, exact)."""
    from .weyl import WeylElement

    dim = 2 * n
    out = WeylElement.zero(n, N)
    for _ in range(terms):
        k = rng.randint(0, max(0, N // 2 - 1))
        ys = [0] * dim
        for _ in range(rng.randint(0, max_y)):
            ys[rng.randrange(dim)] += 1
        if 2 * k + sum(ys) > N:
            continue
        mask = 0
        if forms and rng.random() < 0.5:
            mask = 1 << rng.randrange(dim)
            if rng.random() < 0.3:
                mask |= 1 << rng.randrange(dim)
        f = random_real_scalar(rng, n, terms=1, zero_mean=False)
        if f.is_zero():
            f = ScalarFn.const(n, 1)
        out = out + WeylElement.from_scalar(f, N, nu_power=k, ys=tuple(ys),
                                            mask=mask)
    return out
