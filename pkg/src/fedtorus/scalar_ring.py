"""Exact function ring on the torus T^{2n}.

Functions are finite Fourier sums  sum_k c_k(t,s) e^{i k.x}  with frequency
vectors k in Z^{2n} and coefficients c_k polynomials in two formal path
parameters t, s over the Gaussian rationals.
"""

from collections import namedtuple

from gmpy2 import mpq

from .exact import CRat, C_ONE, crat

__all__ = [
    "ParamCoeff",
    "ScalarFn",
    "PiValue",
    "DEFAULT_T_CAP",
    "DEFAULT_S_CAP",
    "CapError",
]

# Generous defaults: parameter degrees only grow via explicit path/disk
# constructions and repeated t-integration, which stay well below this at
# desk scale.  Derivative-at-zero computations pass cap 1 explicitly.
DEFAULT_T_CAP = 64
DEFAULT_S_CAP = 64


class CapError(Exception):
    """A parameter-degree cap was exceeded where truncation is not allowed."""


class ParamCoeff:
    """Polynomial in the formal parameters t, s with CRat coefficients.

    terms maps (deg_t, deg_s) -> CRat; zero coefficients are never stored.
    Operations whose result would exceed the degree caps truncate the
    offending terms and set ``truncated`` on the result (never silently).
    """

    __slots__ = ("terms", "t_cap", "s_cap", "truncated")

    def __init__(self, terms=None, t_cap=DEFAULT_T_CAP, s_cap=DEFAULT_S_CAP,
                 truncated=False):
        self.t_cap = t_cap
        self.s_cap = s_cap
        self.truncated = truncated
        clean = {}
        if terms:
            for key, val in terms.items():
                val = crat(val)
                if not val:
                    continue
                if key[0] > t_cap or key[1] > s_cap:
                    self.truncated = True
                    continue
                clean[key] = val
        self.terms = clean

    # -- constructors ------------------------------------------------

    @classmethod
    def const(cls, value, **kw):
        return cls({(0, 0): crat(value)}, **kw)

    @classmethod
    def param(cls, which, degree=1, **kw):
        key = (degree, 0) if which == "t" else (0, degree)
        return cls({key: C_ONE}, **kw)

    # -- helpers -----------------------------------------------------

    def _caps_with(self, other):
        return (max(self.t_cap, other.t_cap), max(self.s_cap, other.s_cap),
                self.truncated or other.truncated)

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and (0, 0) in self.terms)

    def const_value(self):
        return self.terms.get((0, 0), CRat(0))

    def degree(self, which):
        idx = 0 if which == "t" else 1
        return max((k[idx] for k in self.terms), default=0)

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        tc, sc, trunc = self._caps_with(other)
        terms = dict(self.terms)
        for key, val in other.terms.items():
            cur = terms.get(key)
            new = val if cur is None else cur + val
            if new:
                terms[key] = new
            elif cur is not None:
                del terms[key]
        return ParamCoeff(terms, tc, sc, trunc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ParamCoeff({k: -v for k, v in self.terms.items()},
                          self.t_cap, self.s_cap, self.truncated)

    def __mul__(self, other):
        if isinstance(other, (int, CRat)) or type(other).__name__ == "mpq":
            c = crat(other)
            if not c:
                return ParamCoeff({}, self.t_cap, self.s_cap, self.truncated)
            return ParamCoeff({k: v * c for k, v in self.terms.items()},
                              self.t_cap, self.s_cap, self.truncated)
        tc, sc, trunc = self._caps_with(other)
        out = {}
        for (a1, b1), v1 in self.terms.items():
            for (a2, b2), v2 in other.terms.items():
                a, b = a1 + a2, b1 + b2
                if a > tc or b > sc:
                    trunc = True
                    continue
                key = (a, b)
                cur = out.get(key)
                new = v1 * v2 if cur is None else cur + v1 * v2
                if new:
                    out[key] = new
                elif cur is not None:
                    del out[key]
        return ParamCoeff(out, tc, sc, trunc)

    __rmul__ = __mul__

    def conjugate(self):
        """Complex conjugate; t, s are treated as real parameters."""
        return ParamCoeff({k: v.conjugate() for k, v in self.terms.items()},
                          self.t_cap, self.s_cap, self.truncated)

    # -- parameter calculus -------------------------------------------

    def diff(self, which):
        idx = 0 if which == "t" else 1
        out = {}
        for key, val in self.terms.items():
            d = key[idx]
            if d == 0:
                continue
            new = (d - 1, key[1]) if idx == 0 else (key[0], d - 1)
            out[new] = val * d
        return ParamCoeff(out, self.t_cap, self.s_cap, self.truncated)

    def integrate(self, which, lower=0, upper="formal"):
        """Exact integral d(which) from ``lower`` to ``upper``.

        ``upper`` is either the string "formal" (the result is a polynomial
        in the integration parameter) or an exact rational; ``lower`` is an
        exact rational.
        """
        idx = 0 if which == "t" else 1
        cap = self.t_cap if idx == 0 else self.s_cap
        out = ParamCoeff({}, self.t_cap, self.s_cap, self.truncated)
        lower = mpq(lower)
        for key, val in self.terms.items():
            d = key[idx]
            anti = val / (d + 1)
            if upper == "formal":
                if d + 1 > cap:
                    out.truncated = True
                    continue
                hi = (d + 1, key[1]) if idx == 0 else (key[0], d + 1)
                out = out + ParamCoeff({hi: anti}, self.t_cap, self.s_cap)
            else:
                hi_val = anti * (mpq(upper) ** (d + 1))
                lo_key = (0, key[1]) if idx == 0 else (key[0], 0)
                out = out + ParamCoeff({lo_key: hi_val}, self.t_cap, self.s_cap)
            if lower != 0:
                lo_val = anti * (lower ** (d + 1))
                lo_key = (0, key[1]) if idx == 0 else (key[0], 0)
                out = out - ParamCoeff({lo_key: lo_val}, self.t_cap, self.s_cap)
        return out

    def subs(self, t=None, s=None):
        """Substitute exact rational values for t and/or s."""
        out = {}
        trunc = self.truncated
        for (a, b), val in self.terms.items():
            if t is not None:
                val = val * (mpq(t) ** a)
                a = 0
            if s is not None:
                val = val * (mpq(s) ** b)
                b = 0
            key = (a, b)
            cur = out.get(key)
            new = val if cur is None else cur + val
            if new:
                out[key] = new
            elif cur is not None:
                del out[key]
        return ParamCoeff(out, self.t_cap, self.s_cap, trunc)

    # -- comparison / formatting --------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, CRat)):
            other = ParamCoeff.const(other)
        if not isinstance(other, ParamCoeff):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (a, b) in sorted(self.terms):
            v = self.terms[(a, b)]
            mono = "".join([f"*t^{a}" if a else "", f"*s^{b}" if b else ""])
            bits.append(f"({v!r}){mono}")
        return " + ".join(bits)


PC_ZERO = ParamCoeff({})
PC_ONE = ParamCoeff.const(1)

# An exact value carrying an explicit power of pi, e.g. the full-torus
# integral (2*pi)^{2n} * c_0 is PiValue(coeff=2^{2n} c_0, pi_pow=2n).
PiValue = namedtuple("PiValue", ["coeff", "pi_pow"])


class ScalarFn:
    """Exact trigonometric polynomial on T^{2n} with ParamCoeff coefficients.

    terms maps frequency tuples k (length 2n) to ParamCoeff; no zero
    coefficients are stored.  When ``real`` is set, the conjugation symmetry
    c_{-k} = conj(c_k) is validated at construction.
    """

    __slots__ = ("n", "terms", "real")

    def __init__(self, n, terms=None, real=False):
        self.n = n
        self.real = real
        clean = {}
        if terms:
            for k, c in terms.items():
                if isinstance(c, (int, CRat)) or type(c).__name__ == "mpq":
                    c = ParamCoeff.const(c)
                if c.is_zero():
                    continue
                if len(k) != 2 * n:
                    raise ValueError(f"frequency {k} has wrong dimension")
                clean[tuple(k)] = c
        self.terms = clean
        if real:
            self._validate_real()

    def _validate_real(self):
        for k, c in self.terms.items():
            mk = tuple(-x for x in k)
            other = self.terms.get(mk)
            if other is None or other != c.conjugate():
                raise ValueError("real flag set but c_{-k} != conj(c_k)")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @classmethod
    def const(cls, n, value):
        if isinstance(value, (int, CRat)) or type(value).__name__ == "mpq":
            value = ParamCoeff.const(value)
        return cls(n, {(0,) * (2 * n): value})

    @classmethod
    def exp_ik(cls, n, k, coeff=1):
        """coeff * e^{i k.x}."""
        return cls(n, {tuple(k): coeff if isinstance(coeff, ParamCoeff)
                       else ParamCoeff.const(coeff)})

    @classmethod
    def cosine(cls, n, k, coeff=1):
        c = crat(coeff) * CRat(mpq(1, 2))
        k = tuple(k)
        mk = tuple(-x for x in k)
        f = cls.exp_ik(n, k, c) + cls.exp_ik(n, mk, c)
        return f

    @classmethod
    def sine(cls, n, k, coeff=1):
        c = crat(coeff) / CRat(0, 2)
        k = tuple(k)
        mk = tuple(-x for x in k)
        return cls.exp_ik(n, k, c) - cls.exp_ik(n, mk, c)

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            cur = terms.get(k)
            new = c if cur is None else cur + c
            if not new.is_zero():
                terms[k] = new
            elif cur is not None:
                del terms[k]
        return ScalarFn(self.n, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ScalarFn(self.n, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        """Exact Fourier-convolution product."""
        self._check(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                c = c1 * c2
                cur = out.get(k)
                new = c if cur is None else cur + c
                if not new.is_zero():
                    out[k] = new
                elif cur is not None:
                    del out[k]
        return ScalarFn(self.n, out)

    def scale(self, c):
        """Multiply by a constant (CRat/int/mpq) or a ParamCoeff."""
        if not isinstance(c, ParamCoeff):
            c = crat(c)
            if not c:
                return ScalarFn.zero(self.n)
            return ScalarFn(self.n, {k: v * c for k, v in self.terms.items()})
        return ScalarFn(self.n, {k: v * c for k, v in self.terms.items()})

    def conjugate(self):
        return ScalarFn(self.n, {tuple(-x for x in k): c.conjugate()
                                 for k, c in self.terms.items()})

    # -- calculus ----------------------------------------------------

    def partial(self, j):
        """d/dx^j (0-based j in [0, 2n))."""
        if not 0 <= j < 2 * self.n:
            raise IndexError(f"coordinate index {j} out of range")
        i_unit = CRat(0, 1)
        out = {}
        for k, c in self.terms.items():
            if k[j] == 0:
                continue
            out[k] = c * (i_unit * k[j])
        return ScalarFn(self.n, out)

    def param_diff(self, which):
        return ScalarFn(self.n, {k: c.diff(which) for k, c in self.terms.items()})

    def param_integrate(self, which, lower=0, upper="formal"):
        return ScalarFn(self.n, {k: c.integrate(which, lower, upper)
                                 for k, c in self.terms.items()})

    def subs(self, t=None, s=None):
        return ScalarFn(self.n, {k: c.subs(t=t, s=s) for k, c in self.terms.items()})

    def integrate_torus(self):
        """Exact integral over T^{2n} against the coordinate volume.

        Returns PiValue(c_0 * 2^{2n}, 2n): the mean coefficient times
        (2*pi)^{2n}, the pi power carried symbolically.
        """
        c0 = self.terms.get((0,) * (2 * self.n), PC_ZERO)
        return PiValue(c0 * CRat(2 ** (2 * self.n)), 2 * self.n)

    def mean_coeff(self):
        """The coefficient of the zero frequency (no volume factor)."""
        return self.terms.get((0,) * (2 * self.n), PC_ZERO)

    # -- predicates / misc -------------------------------------------

    def is_zero(self):
        return not self.terms

    def zero_mean(self):
        return (0,) * (2 * self.n) not in self.terms

    def max_freq(self):
        return max((max(abs(x) for x in k) for k in self.terms), default=0)

    def truncated(self):
        return any(c.truncated for c in self.terms.values())

    def _check(self, other):
        if not isinstance(other, ScalarFn) or other.n != self.n:
            raise ValueError("ScalarFn dimension mismatch")

    def __eq__(self, other):
        if not isinstance(other, ScalarFn):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"({self.terms[k]!r})e^(i{list(k)}.x)" for k in sorted(self.terms)]
        return " + ".join(bits)
