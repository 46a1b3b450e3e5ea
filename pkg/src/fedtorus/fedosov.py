"""The Fedosov machine (trivial central 2-form): connection D, recursion for r,
quantization map Q, the induced star product, and the D-inverse operator."""

from itertools import product as iproduct

from gmpy2 import mpq

from .exact import crat
from .scalar_ring import ScalarFn
from .formal import FormalFunction
from .weyl import WeylElement
from .geometry import SymplecticConnection, gammabar, rbar

__all__ = ["FedosovContext", "moyal_oracle"]


class FedosovContext:
    """A symplectic connection with its solved Fedosov data at degree cap N.

    Immutable after construction; quantize/star are pure.  The central
    curvature 2-form is fixed to zero (recorded in ``central_form``) — the
    natural extension point for nontrivial Fedosov data.
    """

    def __init__(self, conn, N):
        if N < 3:
            raise ValueError("need degree cap N >= 3")
        self.conn = conn
        self.n = conn.n
        self.N = N
        self.central_form = 0  # Omega = 0 throughout
        self.gamma_bar = gammabar(conn, N)
        self.r_bar = rbar(conn, N)
        self.r = self._solve_r()
        self._q_cache = {}

    # -- derivations -------------------------------------------------------

    def partial_op(self, a):
        """The covariant derivation: da + (1/nu)[Gamma-bar, a]."""
        if self.gamma_bar.is_zero():
            return a.exterior_d()
        return a.exterior_d() + self.gamma_bar.commutator_over_nu(a)

    def D(self, a):
        """The Fedosov connection: Da = partial a - delta a + (1/nu)[r, a]."""
        out = self.partial_op(a) - a.delta()
        if not self.r.is_zero():
            out = out + self.r.commutator_over_nu(a)
        return out

    # -- the r recursion -----------------------------------------------------

    def _rhs(self, r):
        out = self.r_bar + self.partial_op(r)
        if not r.is_zero():
            out = out + r.circ(r).mul_nu(-1)
        return out

    def _solve_r(self):
        """Fixed point r = delta_inv(R-bar + partial r + (1/nu) r o r),
        gaining one total degree per pass."""
        r = WeylElement.zero(self.n, self.N)
        for _ in range(max(1, self.N - 2)):
            new = self._rhs(r).delta_inv().truncate(self.N)
            if new == r:
                break
            r = new
        self._validate_r(r)
        return r

    def _validate_r(self, r):
        md = r.min_degree()
        assert md is None or md >= 3, "r has terms below total degree 3"
        assert r.delta_inv().is_zero(), "normalization delta_inv(r) = 0 fails"
        assert r.max_form_degree() <= 1 and r.form_part(0).is_zero() \
            if not r.is_zero() else True, "r is not a 1-form"
        residual = self._rhs(r) - r.delta()
        assert residual.is_zero_up_to(self.N - 1), \
            "Fedosov equation residual nonzero below the cap"

    def r_residual(self):
        """The defining-equation residual (exact zero up to degree N-1)."""
        return self._rhs(self.r) - self.r.delta()

    # -- quantization -------------------------------------------------------

    def q_op(self, a):
        """The geometric series sum_k (delta_inv(partial + (1/nu)[r, .]))^k a."""
        total = a
        cur = a
        for _ in range(self.N + 1):
            nxt = self.partial_op(cur)
            if not self.r.is_zero():
                nxt = nxt + self.r.commutator_over_nu(cur)
            cur = nxt.delta_inv().truncate(self.N)
            if cur.is_zero():
                break
            total = total + cur
        return total

    def _q_basis(self, freq):
        w = self._q_cache.get(freq)
        if w is None:
            f = ScalarFn.exp_ik(self.n, freq)
            w = self.q_op(WeylElement.from_scalar(f, self.N))
            self._q_cache[freq] = w
        return w

    def quantize_fn(self, f):
        """Q applied to a plain function, assembled from cached basis lifts."""
        out = WeylElement.zero(self.n, self.N)
        for freq, c in f.terms.items():
            out = out + self._q_basis(freq).scale(c)
        return out

    def quantize(self, F):
        """Q applied to a nu-series of functions."""
        if isinstance(F, ScalarFn):
            return self.quantize_fn(F)
        out = WeylElement.zero(self.n, self.N)
        for k, f in F.terms.items():
            out = out + self.quantize_fn(f).mul_nu(k)
        return out

    def nu_order(self):
        """The nu-order through which star products are computed."""
        return self.N // 2

    def star(self, F, G):
        """The induced star product sigma(QF o QG), as a nu-series."""
        if isinstance(F, ScalarFn):
            F = FormalFunction.from_scalar_fn(F, self.N // 2)
        if isinstance(G, ScalarFn):
            G = FormalFunction.from_scalar_fn(G, self.N // 2)
        prod = self.quantize(F).circ_symbol(self.quantize(G))
        return prod.truncate(self.nu_order())

    def star_commutator_over_nu(self, F, G):
        """(1/nu)(F*G - G*F), exact in the function ring."""
        d = self.star(F, G) - self.star(G, F)
        return d.shift_nu(-1)

    # -- the D-inverse ------------------------------------------------------

    def d_inverse(self, b, check_flat=True, flat_margin=None):
        """The unique a with Da = b and a|_{y=0} = 0, as a = -Q(delta_inv b).

        b must be a D-flat 1-form (validated up to the truncation margin;
        D-flatness of derived data degrades by up to two degrees at the top).
        """
        if check_flat:
            margin = self.N - 2 if flat_margin is None else flat_margin
            Db = self.D(b)
            if not Db.is_zero_up_to(margin):
                raise ValueError("d_inverse input is not D-flat")
        a = -self.q_op(b.delta_inv().truncate(self.N))
        assert a.symbol().is_zero(), "d_inverse output has nonzero symbol"
        return a


def moyal_oracle(F, G, order, n=None):
    """Independent Moyal star product of plain functions on the flat torus:

        F * G = sum_m (nu/2)^m / m! Lambda^{i1 j1}..Lambda^{im jm}
                 d_{i1..im} F  d_{j1..jm} G

    computed directly from x-derivatives, with no Weyl-algebra machinery.
    """
    n = n if n is not None else F.n
    dim = 2 * n

    def sig(k):
        return k + n if k < n else k - n

    def lam_sign(k):
        return -1 if k < n else 1

    terms = {}
    for m in range(order + 1):
        coeff_scale = crat(mpq(1, 2 ** m * _fact(m)))
        total = ScalarFn.zero(n)
        for idx in iproduct(range(dim), repeat=m):
            dF = F
            dG = G
            w = 1
            for i in idx:
                dF = dF.partial(i)
                dG_i = sig(i)
                dG = dG.partial(dG_i)
                w *= lam_sign(i)
            if dF.is_zero() or dG.is_zero():
                continue
            total = total + (dF * dG if w == 1 else -(dF * dG))
        total = total.scale(coeff_scale)
        if not total.is_zero():
            terms[m] = total
    return FormalFunction(n, terms, order)


def _fact(m):
    out = 1
    for j in range(2, m + 1):
        out *= j
    return out
