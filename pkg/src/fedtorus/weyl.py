"""Fiberwise Weyl algebra with form factors over the torus.

Elements live in W (tensor) Lambda: sums of  nu^k F(x) y^alpha dx^A  where
F is a trigonometric polynomial, alpha a y-exponent vector of length 2n,
and A a subset of {0,..,2n-1} encoded as a bitmask.  The fiberwise product
is the Moyal product along the y-variables; the total degree 2k + |alpha|
is additive under it, which is what makes truncation at a fixed cap sound.
"""

from itertools import product as iproduct

from gmpy2 import mpq

from .exact import CRat, crat, C_ONE
from .scalar_ring import ParamCoeff, ScalarFn
from .formal import FormalFunction

__all__ = ["SymplecticData", "WeylElement", "wedge_sign", "insert_sign"]


# ---------------------------------------------------------------------------
# standard symplectic structure on R^{2n}:
#   omega_{i, n+i} = +1,  omega_{n+i, i} = -1   (0 <= i < n)
#   Lambda^{i, n+i} = -1, Lambda^{n+i, i} = +1  (Lambda = omega^{-1})


def _sigma_idx(k, n):
    """The unique partner index with a nonzero Lambda^{k, .} entry."""
    return k + n if k < n else k - n


def _lam_sign(k, n):
    """Lambda^{k, sigma(k)}: -1 below n, +1 at or above n."""
    return -1 if k < n else 1


class SymplecticData:
    """Standard constant symplectic form and Poisson bivector in dimension 2n."""

    __slots__ = ("n", "dim", "omega", "lam")

    def __init__(self, n):
        self.n = n
        self.dim = 2 * n
        omega = {}
        lam = {}
        for i in range(n):
            omega[(i, n + i)] = 1
            omega[(n + i, i)] = -1
            lam[(i, n + i)] = -1
            lam[(n + i, i)] = 1
        self.omega = omega
        self.lam = lam
        self._validate()

    def _validate(self):
        d = self.dim
        for (i, j), v in self.omega.items():
            assert self.omega.get((j, i), 0) == -v, "omega not antisymmetric"
        for (i, j), v in self.lam.items():
            assert self.lam.get((j, i), 0) == -v, "Lambda not antisymmetric"
        for i in range(d):
            for j in range(d):
                acc = 0
                for k in range(d):
                    acc += self.omega.get((i, k), 0) * self.lam.get((k, j), 0)
                assert acc == (1 if i == j else 0), "Lambda is not omega^{-1}"

    def omega_entry(self, i, j):
        return self.omega.get((i, j), 0)

    def lam_entry(self, i, j):
        return self.lam.get((i, j), 0)


# ---------------------------------------------------------------------------
# wedge bookkeeping on bitmask-encoded multi-indices


def wedge_sign(mask_a, mask_b):
    """Sign of dx^A wedge dx^B relative to the sorted merge; 0 on overlap."""
    if mask_a & mask_b:
        return 0
    inv = 0
    b = mask_b
    while b:
        low = b & -b
        k = low.bit_length() - 1
        inv += bin(mask_a >> (k + 1)).count("1")
        b ^= low
    return -1 if inv & 1 else 1


def insert_sign(k, mask):
    """Sign of dx^k wedge dx^A (A sorted, k not in A)."""
    return -1 if bin(mask & ((1 << k) - 1)).count("1") & 1 else 1


def _fall(a, g):
    """Falling factorial a (a-1) ... (a-g+1)."""
    out = 1
    for j in range(g):
        out *= a - j
    return out


def _mask_bits(mask):
    bits = []
    k = 0
    while mask:
        if mask & 1:
            bits.append(k)
        mask >>= 1
        k += 1
    return bits


class WeylElement:
    """Element of the formal Weyl algebra tensored with forms.

    terms: dict  (nu_power, y_exponents, form_mask) -> ScalarFn.
    N is the total-degree cap (2*nu_power + |y|); higher terms are dropped.
    With extended=True negative nu powers are allowed as long as the total
    degree stays nonnegative (needed for parallel-transport elements).
    """

    __slots__ = ("n", "N", "terms", "extended")

    def __init__(self, n, N, terms=None, extended=False):
        self.n = n
        self.N = N
        self.extended = extended
        clean = {}
        if terms:
            for (k, ys, mask), f in terms.items():
                deg = 2 * k + sum(ys)
                if deg > N or f.is_zero():
                    continue
                if k < 0 and not extended:
                    raise ValueError("negative nu power outside extended algebra")
                if deg < 0:
                    raise ValueError("negative total degree")
                assert len(ys) == 2 * n and 0 <= mask < (1 << (2 * n))
                clean[(k, ys, mask)] = f
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, n, N, extended=False):
        return cls(n, N, {}, extended)

    @classmethod
    def from_scalar(cls, f, N, nu_power=0, ys=None, mask=0, extended=False):
        ys = ys if ys is not None else (0,) * (2 * f.n)
        return cls(f.n, N, {(nu_power, tuple(ys), mask): f}, extended)

    @classmethod
    def one(cls, n, N, extended=False):
        return cls.from_scalar(ScalarFn.const(n, 1), N, extended=extended)

    @classmethod
    def from_formal_function(cls, F, N, extended=False):
        ys = (0,) * (2 * F.n)
        return cls(F.n, N, {(k, ys, 0): f for k, f in F.terms.items()},
                   extended)

    def _new(self, terms, N=None, extended=None):
        return WeylElement(self.n, self.N if N is None else N, terms,
                           self.extended if extended is None else extended)

    # -- linear structure --------------------------------------------------

    def __add__(self, other):
        N = min(self.N, other.N)
        ext = self.extended or other.extended
        terms = {k: f for k, f in self.terms.items() if 2 * k[0] + sum(k[1]) <= N}
        for key, f in other.terms.items():
            if 2 * key[0] + sum(key[1]) > N:
                continue
            cur = terms.get(key)
            new = f if cur is None else cur + f
            if not new.is_zero():
                terms[key] = new
            elif cur is not None:
                del terms[key]
        return WeylElement(self.n, N, terms, ext)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._new({k: -f for k, f in self.terms.items()})

    def scale(self, c):
        return self._new({k: f.scale(c) for k, f in self.terms.items()})

    def mul_scalar_fn(self, g):
        """Pointwise multiplication by a torus function."""
        return self._new({k: f * g for k, f in self.terms.items()})

    def mul_nu(self, j):
        """Multiply by nu^j; j < 0 requires the extended algebra or exact divisibility."""
        terms = {}
        ext = self.extended
        for (k, ys, mask), f in self.terms.items():
            kk = k + j
            if kk < 0 and not ext:
                raise ValueError("nu division left a negative power")
            terms[(kk, ys, mask)] = f
        return WeylElement(self.n, self.N, terms, ext)

    def truncate(self, N):
        return WeylElement(self.n, min(N, self.N), self.terms, self.extended)

    def extend(self):
        return WeylElement(self.n, self.N, self.terms, True)

    # -- gradings ----------------------------------------------------------

    def form_parts(self):
        """Split into form-degree-homogeneous pieces: dict q -> WeylElement."""
        out = {}
        for key, f in self.terms.items():
            q = bin(key[2]).count("1")
            out.setdefault(q, {})[key] = f
        return {q: self._new(t) for q, t in out.items()}

    def form_part(self, q):
        return self._new({k: f for k, f in self.terms.items()
                          if bin(k[2]).count("1") == q})

    def degree_part(self, d):
        return self._new({k: f for k, f in self.terms.items()
                          if 2 * k[0] + sum(k[1]) == d})

    def min_degree(self):
        return min((2 * k + sum(ys) for (k, ys, m) in self.terms), default=None)

    def max_form_degree(self):
        return max((bin(m).count("1") for (k, ys, m) in self.terms), default=0)

    # -- Moyal product -------------------------------------------------------

    def circ(self, other):
        """Fiberwise Moyal product, truncated at the common degree cap."""
        return self._circ_impl(other)

    def _circ_impl(self, other, odd_only=False, double=False):
        N = min(self.N, other.N)
        n = self.n
        dim = 2 * n
        ext = self.extended or other.extended
        out = {}
        for (k1, a, m1), F in self.terms.items():
            d1 = 2 * k1 + sum(a)
            for (k2, b, m2), G in other.terms.items():
                if d1 + 2 * k2 + sum(b) > N:
                    continue
                sgn = wedge_sign(m1, m2)
                if sgn == 0:
                    continue
                mask = m1 | m2
                FG = F * G
                if sgn < 0:
                    FG = -FG
                if FG.is_zero():
                    continue
                # enumerate derivative multisets gamma with gamma <= a and
                # sigma(gamma) <= b
                sup = [k for k in range(dim)
                       if a[k] and b[_sigma_idx(k, n)]]
                ranges = [range(min(a[k], b[_sigma_idx(k, n)]) + 1) for k in sup]
                for gamma in iproduct(*ranges):
                    m = sum(gamma)
                    if odd_only and m % 2 == 0:
                        continue
                    coeff = mpq(2) if double else mpq(1)
                    aa = list(a)
                    bb = list(b)
                    for k, g in zip(sup, gamma):
                        if g == 0:
                            continue
                        sk = _sigma_idx(k, n)
                        coeff *= mpq(_fall(a[k], g) * _fall(b[sk], g),
                                     2 ** g * _factorial(g))
                        if _lam_sign(k, n) < 0 and g & 1:
                            coeff = -coeff
                        aa[k] -= g
                        bb[sk] -= g
                    key = (k1 + k2 + m,
                           tuple(x + y for x, y in zip(aa, bb)),
                           mask)
                    term = FG.scale(crat(coeff)) if coeff != 1 else FG
                    cur = out.get(key)
                    new = term if cur is None else cur + term
                    if not new.is_zero():
                        out[key] = new
                    elif cur is not None:
                        del out[key]
        return WeylElement(n, N, out, ext)

    def circ_symbol(self, other):
        """The y=0, form=0 part of self o other, as a FormalFunction.

        Only fully contracted pairs (beta = sigma(alpha), both masks zero)
        contribute, which makes this much cheaper than circ + symbol.
        """
        N = min(self.N, other.N)
        n = self.n
        out = FormalFunction.zero(n, N)
        terms = {}
        right = {}
        for (k2, b, m2), G in other.terms.items():
            if m2 == 0:
                right.setdefault(b, []).append((k2, G))
        for (k1, a, m1), F in self.terms.items():
            if m1 != 0:
                continue
            beta = tuple(a[_sigma_idx(k, n)] for k in range(2 * n))
            if beta not in right:
                continue
            coeff = mpq(1)
            for k in range(2 * n):
                g = a[k]
                if not g:
                    continue
                coeff *= mpq(_factorial(g), 2 ** g)
                if _lam_sign(k, n) < 0 and g & 1:
                    coeff = -coeff
            m = sum(a)
            for (k2, G) in right[beta]:
                k = k1 + k2 + m
                if 2 * k > N:
                    continue
                term = (F * G).scale(crat(coeff)) if coeff != 1 else F * G
                cur = terms.get(k)
                new = term if cur is None else cur + term
                if not new.is_zero():
                    terms[k] = new
                elif cur is not None:
                    del terms[k]
        return FormalFunction(n, terms, N)

    def graded_commutator(self, other):
        """[a, b] = a o b - (-1)^{q_a q_b} b o a.

        Swapping the factors flips each Moyal level m by (-1)^m (Lambda is
        antisymmetric) and the wedge by (-1)^{q_a q_b}, so the graded
        commutator is exactly twice the odd-level part of a o b — computed
        here in a single product traversal.
        """
        return self._circ_impl(other, odd_only=True, double=True)

    def commutator_over_nu(self, other):
        """(1/nu)[a, b]: the Moyal m=0 level cancels, so this stays in W."""
        c = self.graded_commutator(other)
        terms = {}
        for (k, ys, mask), f in c.terms.items():
            if k - 1 < 0 and not c.extended:
                raise ValueError("commutator not divisible by nu")
            terms[(k - 1, ys, mask)] = f
        return WeylElement(self.n, c.N, terms, c.extended)

    # -- differential operators ---------------------------------------------

    def delta(self):
        """delta a = dx^k wedge d/dy^k a (lowers y-degree, raises form degree)."""
        out = {}
        for (k, ys, mask), f in self.terms.items():
            for j in range(2 * self.n):
                if not ys[j] or (mask >> j) & 1:
                    continue
                sgn = insert_sign(j, mask)
                nys = list(ys)
                nys[j] -= 1
                c = crat(ys[j] * sgn)
                _acc(out, (k, tuple(nys), mask | (1 << j)), f.scale(c))
        return self._new(out)

    def delta_inv(self):
        """Degreewise partial inverse of delta; kills the (0,0) bidegree."""
        out = {}
        for (k, ys, mask), f in self.terms.items():
            p = sum(ys)
            q = bin(mask).count("1")
            if p + q == 0:
                continue
            w = mpq(1, p + q)
            r = 0
            m = mask
            j = 0
            while m:
                if m & 1:
                    nys = list(ys)
                    nys[j] += 1
                    c = crat(-w if r & 1 else w)
                    _acc(out, (k, tuple(nys), mask ^ (1 << j)), f.scale(c))
                    r += 1
                m >>= 1
                j += 1
        # delta_inv raises total degree by one; the result is exact, so it
        # carries cap N+1 (combining with cap-N elements truncates back).
        return self._new(out, N=self.N + 1)

    def exterior_d(self):
        """d a = dx^k wedge d/dx^k a (base-coordinate exterior derivative)."""
        out = {}
        for (k, ys, mask), f in self.terms.items():
            for j in range(2 * self.n):
                if (mask >> j) & 1:
                    continue
                df = f.partial(j)
                if df.is_zero():
                    continue
                if insert_sign(j, mask) < 0:
                    df = -df
                _acc(out, (k, ys, mask | (1 << j)), df)
        return self._new(out)

    def contract_vector(self, X):
        """Interior product with a vector field X given as components [X^0..X^{2n-1}]."""
        out = {}
        for (k, ys, mask), f in self.terms.items():
            r = 0
            m = mask
            j = 0
            while m:
                if m & 1:
                    g = f * X[j]
                    if not g.is_zero():
                        if r & 1:
                            g = -g
                        _acc(out, (k, ys, mask ^ (1 << j)), g)
                    r += 1
                m >>= 1
                j += 1
        return self._new(out)

    def pi00(self):
        """Projection onto the y-degree 0, form-degree 0 part (as a WeylElement)."""
        zys = (0,) * (2 * self.n)
        return self._new({k: f for k, f in self.terms.items()
                          if k[1] == zys and k[2] == 0})

    def symbol(self):
        """sigma(a): the y=0, form=0 part as a nu-series of torus functions."""
        zys = (0,) * (2 * self.n)
        return FormalFunction(self.n,
                              {k: f for (k, ys, m), f in self.terms.items()
                               if ys == zys and m == 0},
                              self.N)

    # -- parameter calculus ----------------------------------------------

    def param_diff(self, which):
        return self._new({k: f.param_diff(which) for k, f in self.terms.items()})

    def param_integrate(self, which, lower=0, upper="formal"):
        return self._new({k: f.param_integrate(which, lower, upper)
                          for k, f in self.terms.items()})

    def subs(self, t=None, s=None):
        return self._new({k: f.subs(t=t, s=s) for k, f in self.terms.items()})

    # -- predicates -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_zero_up_to(self, deg):
        """True if every term of total degree <= deg vanishes."""
        return all(2 * k + sum(ys) > deg for (k, ys, m) in self.terms)

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return f"0 (W, N={self.N})"
        bits = []
        for key in sorted(self.terms, key=lambda k: (2 * k[0] + sum(k[1]), k)):
            k, ys, mask = key
            pre = []
            if k:
                pre.append(f"nu^{k}")
            for j, e in enumerate(ys):
                if e:
                    pre.append(f"y{j}^{e}" if e > 1 else f"y{j}")
            for j in _mask_bits(mask):
                pre.append(f"dx{j}")
            head = "*".join(pre) or "1"
            bits.append(f"{head}*({self.terms[key]!r})")
        return " + ".join(bits) + f"  (N={self.N})"


def _factorial(g):
    out = 1
    for j in range(2, g + 1):
        out *= j
    return out


def _acc(d, key, val):
    cur = d.get(key)
    new = val if cur is None else cur + val
    if not new.is_zero():
        d[key] = new
    elif cur is not None:
        del d[key]
