"""Exact Gaussian-rational scalars (complex numbers with rational parts)."""

from gmpy2 import mpq

__all__ = ["CRat", "C_ZERO", "C_ONE", "C_I", "crat"]


class CRat:
    """A complex number a + b*i with a, b exact rationals.

    Immutable by convention; never mutate ``re``/``im`` after construction.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re).__name__ == "mpq" else mpq(re)
        self.im = im if type(im).__name__ == "mpq" else mpq(im)

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        other = crat(other)
        return CRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = crat(other)
        return CRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return crat(other).__sub__(self)

    def __neg__(self):
        return CRat(-self.re, -self.im)

    def __mul__(self, other):
        other = crat(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return CRat(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = crat(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("division by zero CRat")
        return CRat((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        return crat(other).__truediv__(self)

    def conjugate(self):
        return CRat(self.re, -self.im)

    # -- predicates --------------------------------------------------

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        try:
            other = crat(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self):
        return self.im == 0

    # -- formatting --------------------------------------------------

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def as_strings(self):
        """Canonical ("re", "im") pair of rational strings."""
        return (str(self.re), str(self.im))


def crat(x):
    """Coerce an int, Fraction, mpq or CRat to CRat."""
    if isinstance(x, CRat):
        return x
    return CRat(x)


C_ZERO = CRat(0)
C_ONE = CRat(1)
C_I = CRat(0, 1)
