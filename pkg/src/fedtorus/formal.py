"""Formal power series containers: nu-series of torus functions and scalars."""

from gmpy2 import mpq

from .exact import CRat, crat
from .scalar_ring import ParamCoeff, ScalarFn, PiValue

__all__ = ["FormalFunction", "FormalScalar"]


class FormalFunction:
    """A nu-series of ScalarFn: F = sum_k nu^k F_k, truncated at ``order``.

    ``order`` is the maximal trusted nu exponent; terms beyond it are
    dropped on construction.
    """

    __slots__ = ("n", "terms", "order")

    def __init__(self, n, terms=None, order=None):
        if order is None:
            raise ValueError("FormalFunction needs an explicit order cap")
        self.n = n
        self.order = order
        clean = {}
        if terms:
            for k, f in terms.items():
                if k > order or f.is_zero():
                    continue
                clean[k] = f
        self.terms = clean

    @classmethod
    def zero(cls, n, order):
        return cls(n, {}, order)

    @classmethod
    def from_scalar_fn(cls, f, order, nu_power=0):
        return cls(f.n, {nu_power: f}, order)

    @classmethod
    def const(cls, n, value, order):
        return cls(n, {0: ScalarFn.const(n, value)}, order)

    def coeff(self, k):
        return self.terms.get(k, ScalarFn.zero(self.n))

    # -- arithmetic ----------------------------------------------------

    def _join_order(self, other):
        return min(self.order, other.order)

    def __add__(self, other):
        order = self._join_order(other)
        terms = {k: f for k, f in self.terms.items() if k <= order}
        for k, f in other.terms.items():
            if k > order:
                continue
            g = terms.get(k)
            h = f if g is None else g + f
            if not h.is_zero():
                terms[k] = h
            elif g is not None:
                del terms[k]
        return FormalFunction(self.n, terms, order)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FormalFunction(self.n, {k: -f for k, f in self.terms.items()},
                              self.order)

    def __mul__(self, other):
        """Pointwise product of nu-series (not a star product)."""
        order = self._join_order(other)
        out = {}
        for k1, f1 in self.terms.items():
            for k2, f2 in other.terms.items():
                k = k1 + k2
                if k > order:
                    continue
                p = f1 * f2
                cur = out.get(k)
                q = p if cur is None else cur + p
                if not q.is_zero():
                    out[k] = q
                elif cur is not None:
                    del out[k]
        return FormalFunction(self.n, out, order)

    def scale(self, c):
        return FormalFunction(self.n, {k: f.scale(c) for k, f in self.terms.items()},
                              self.order)

    def shift_nu(self, j):
        """Multiply by nu^j (j may be negative; negative exponents must cancel)."""
        terms = {}
        for k, f in self.terms.items():
            if k + j < 0:
                raise ValueError("nu-shift produced a negative exponent")
            terms[k + j] = f
        return FormalFunction(self.n, terms, self.order + j)

    def truncate(self, order):
        return FormalFunction(self.n, self.terms, min(order, self.order))

    # -- calculus ------------------------------------------------------

    def param_diff(self, which):
        return FormalFunction(self.n, {k: f.param_diff(which)
                                       for k, f in self.terms.items()}, self.order)

    def param_integrate(self, which, lower=0, upper="formal"):
        return FormalFunction(self.n, {k: f.param_integrate(which, lower, upper)
                                       for k, f in self.terms.items()}, self.order)

    def subs(self, t=None, s=None):
        return FormalFunction(self.n, {k: f.subs(t=t, s=s)
                                       for k, f in self.terms.items()}, self.order)

    # -- predicates ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def min_order(self):
        return min(self.terms, default=None)

    def eq_up_to(self, other, order):
        order = min(order, self.order, other.order)
        for k in range(0, order + 1):
            if self.coeff(k) != other.coeff(k):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, FormalFunction):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return f"0 (order<={self.order})"
        bits = [f"nu^{k}*[{self.terms[k]!r}]" for k in sorted(self.terms)]
        return " + ".join(bits) + f"  (order<={self.order})"


class FormalScalar:
    """Series sum nu^a pi^b c_{ab}(t,s) with exact ParamCoeff coefficients.

    Exponents a (nu) and b (pi) may be negative: negative-power prefactors
    like (2 pi nu)^{-m} are carried symbolically, never expanded.  ``order``
    is the maximal trusted nu exponent (None = exact at all orders).
    """

    __slots__ = ("terms", "order")

    def __init__(self, terms=None, order=None):
        self.order = order
        clean = {}
        if terms:
            for (a, b), c in terms.items():
                if isinstance(c, (int, CRat)) or type(c).__name__ == "mpq":
                    c = ParamCoeff.const(c)
                if c.is_zero():
                    continue
                if order is not None and a > order:
                    continue
                key = (a, b)
                cur = clean.get(key)
                new = c if cur is None else cur + c
                if not new.is_zero():
                    clean[key] = new
                elif cur is not None:
                    del clean[key]
        self.terms = clean

    @classmethod
    def zero(cls, order=None):
        return cls({}, order)

    @classmethod
    def from_pi_value(cls, pv: PiValue, nu_power=0, order=None):
        return cls({(nu_power, pv.pi_pow): pv.coeff}, order)

    # -- arithmetic ----------------------------------------------------

    def _join_order(self, other):
        if self.order is None:
            return other.order
        if other.order is None:
            return self.order
        return min(self.order, other.order)

    def __add__(self, other):
        order = self._join_order(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            cur = terms.get(key)
            new = c if cur is None else cur + c
            if not new.is_zero():
                terms[key] = new
            elif cur is not None:
                del terms[key]
        return FormalScalar(terms, order)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FormalScalar({k: -c for k, c in self.terms.items()}, self.order)

    def scale(self, c):
        if not isinstance(c, ParamCoeff):
            c = crat(c)
        return FormalScalar({k: v * c for k, v in self.terms.items()}, self.order)

    def shift(self, nu=0, pi=0):
        """Multiply by nu^{nu} pi^{pi}."""
        order = None if self.order is None else self.order + nu
        return FormalScalar({(a + nu, b + pi): c for (a, b), c in self.terms.items()},
                            order)

    # -- calculus --------------------------------------------------------

    def param_integrate(self, which, lower=0, upper="formal"):
        return FormalScalar({k: c.integrate(which, lower, upper)
                             for k, c in self.terms.items()}, self.order)

    def param_diff(self, which):
        return FormalScalar({k: c.diff(which) for k, c in self.terms.items()},
                            self.order)

    def subs(self, t=None, s=None):
        return FormalScalar({k: c.subs(t=t, s=s) for k, c in self.terms.items()},
                            self.order)

    # -- inspection --------------------------------------------------------

    def nu_coefficient(self, a):
        """The pi-graded coefficient of nu^a, as a dict pi_pow -> ParamCoeff."""
        return {b: c for (x, b), c in self.terms.items() if x == a}

    def is_zero(self):
        return not self.terms

    def eq_up_to(self, other, order=None):
        d = self - other
        if order is None:
            return d.is_zero()
        return all(a > order for (a, b) in d.terms)

    def __eq__(self, other):
        if not isinstance(other, FormalScalar):
            return NotImplemented
        return self.terms == other.terms

    def as_strings(self):
        """Canonical serialization: sorted list of [nu_pow, pi_pow, re, im, monomial]."""
        out = []
        for (a, b) in sorted(self.terms):
            c = self.terms[(a, b)]
            for (dt, ds) in sorted(c.terms):
                v = c.terms[(dt, ds)]
                out.append({"nu": a, "pi": b, "t": dt, "s": ds,
                            "re": str(v.re), "im": str(v.im)})
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (a, b) in sorted(self.terms):
            pre = []
            if a:
                pre.append(f"nu^{a}")
            if b:
                pre.append(f"pi^{b}")
            pre = "*".join(pre) or "1"
            bits.append(f"{pre}*({self.terms[(a, b)]!r})")
        return " + ".join(bits)
