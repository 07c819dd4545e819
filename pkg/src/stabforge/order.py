"""The maximal order W_n<S> with S^n = pu and Sw = w^sigma S.

Elements are p^shift * sum_{i<n} w_i S^i with w_i in the Witt ring W_n
(realized as the unramified tower of degree n) and a global power of p so
that inverses like (pu)^{-1} S^{n-1} stay representable.  The twisted product
folds S^n back to pu, which is central.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IndeterminateAtPrecision, NonUnit, PrecisionTooLow, UnknownName
from .localfield import FieldElem, FieldTower, RationalValuation
from .padic import PadicInt, hensel_sqrt


class OrderParams:
    """Shared context: p, n, the unit u with S^n = pu, and working precisions."""

    def __init__(self, p: int, n: int, u=1, p_prec: int = 6, s_prec: int = None):
        self.p = p
        self.n = n
        self.p_prec = p_prec
        self.s_prec = s_prec if s_prec is not None else 2 * n
        if self.s_prec < 1:
            raise ValueError("s_prec must be >= 1")
        self.u = u if isinstance(u, PadicInt) else PadicInt.from_integer(u, p, p_prec)
        if not self.u.is_unit:
            raise NonUnit("u must be a unit")
        self.witt = FieldTower(p, n, 0, p_prec)

    @property
    def confidence_prec(self) -> int:
        # a vanishing difference certifies equality once v >= s_prec / n
        return -(-self.s_prec // self.n)

    def zero(self) -> "OrderElem":
        return OrderElem(self, 0, tuple(self.witt.zero() for _ in range(self.n)))

    def from_int(self, z: int) -> "OrderElem":
        coeffs = [self.witt.from_int(z)] + [self.witt.zero()] * (self.n - 1)
        return OrderElem(self, 0, tuple(coeffs))

    def one(self) -> "OrderElem":
        return self.from_int(1)

    def from_witt(self, w: FieldElem, s_power: int = 0) -> "OrderElem":
        coeffs = [self.witt.zero()] * self.n
        q, r = divmod(s_power, self.n)
        coeffs[r] = w * self.witt.from_int((self.p * self.u.val) ** q) if q else w
        return OrderElem(self, 0, tuple(coeffs))

    def s(self) -> "OrderElem":
        return self.from_witt(self.witt.one(), 1)

    def omega(self) -> "OrderElem":
        """The Teichmueller generator of order p^n - 1."""
        return self.from_witt(self.witt.omega())

    def scalar(self, x: PadicInt) -> "OrderElem":
        return self.from_int(x.val)


class OrderElem:
    __slots__ = ("params", "shift", "coeffs")

    def __init__(self, params: OrderParams, shift: int, coeffs):
        self.params = params
        self.shift = shift
        self.coeffs = tuple(coeffs)

    # -- helpers -----------------------------------------------------------

    def _align(self, other: "OrderElem"):
        if other.params is not self.params:
            raise ValueError("elements from different orders")
        s = min(self.shift, other.shift)
        p = self.params.p

        def at(x):
            if x.shift == s:
                return x.coeffs
            fac = p ** (x.shift - s)
            return tuple(c.scale(fac) for c in x.coeffs)

        return s, at(self), at(other)

    def _coerce(self, other):
        if isinstance(other, OrderElem):
            return other
        if isinstance(other, int):
            return self.params.from_int(other)
        raise TypeError(f"cannot coerce {type(other)}")

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def __eq__(self, other):
        other = self._coerce(other)
        return (self - other).is_zero

    def __hash__(self):
        raise TypeError("unhashable; compare at precision instead")

    # -- ring structure ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        s, a, b = self._align(other)
        return OrderElem(self.params, s, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return OrderElem(self.params, self.shift, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            return OrderElem(self.params, self.shift, tuple(c.scale(other) for c in self.coeffs))
        other = self._coerce(other)
        pa = self.params
        n = pa.n
        t = pa.witt
        pu = pa.p * pa.u.val
        acc = [t.zero() for _ in range(n)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                term = a * b.galois_act(1, i)  # S^i b = b^(sigma^i) S^i
                k = i + j
                if k >= n:
                    term = term.scale(pu)
                    k -= n
                acc[k] = acc[k] + term
        return OrderElem(pa, self.shift + other.shift, tuple(acc))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        out, base = self.params.one(), self
        while k:
            if k & 1:
                out = out * base
            if k > 1:
                base = base * base
            k >>= 1
        return out

    # -- valuation / inversion -------------------------------------------------

    def _leading(self):
        """(n*v_p(w_i)+i, i, v_p(w_i)) minimizing the valuation; None when zero."""
        best = None
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            v = c.valuation().num  # integral for Witt coefficients
            cand = (v * self.params.n + i, i, v)
            if best is None or cand < best:
                best = cand
        return best

    def valuation(self) -> RationalValuation:
        lead = self._leading()
        if lead is None:
            raise IndeterminateAtPrecision("all tracked digits vanish")
        total, _i, _v = lead
        return RationalValuation(total + self.shift * self.params.n, self.params.n)

    def invert(self) -> "OrderElem":
        """Two-sided inverse: peel the minimal term, then a geometric series."""
        lead = self._leading()
        if lead is None:
            raise IndeterminateAtPrecision("cannot invert zero at precision")
        _total, i, vp = lead
        pa = self.params
        t = pa.witt
        w = self.coeffs[i]
        for _ in range(vp):
            w = w.div_pi()  # exact division by p in W_n
        w_inv = w.invert()
        if i == 0:
            t_inv = OrderElem(pa, -self.shift - vp, (w_inv,) + tuple(t.zero() for _ in range(pa.n - 1)))
        else:
            # (w S^i)^(-1) = (pu)^(-1) sigma^(n-i)(w^(-1)) S^(n-i)
            coeffs = [t.zero()] * pa.n
            coeffs[pa.n - i] = w_inv.galois_act(1, pa.n - i) * t.from_int(pa.u.val).invert()
            t_inv = OrderElem(pa, -self.shift - vp - 1, tuple(coeffs))
        y = t_inv * self - pa.one()
        acc, term = pa.one(), -y
        for _ in range(pa.n * (pa.p_prec + 1)):
            if term.is_zero:
                break
            acc = acc + term
            term = term * (-y)
        return acc * t_inv

    def conjugate_by(self, g: "OrderElem") -> "OrderElem":
        return g * self * g.invert()

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                parts.append(f"({c!r})*S^{i}")
        body = " + ".join(parts) if parts else "0"
        return f"p^{self.shift} * [{body}]" if self.shift else body


# -- equality-at-precision verdicts ---------------------------------------------


def check_verdict(lhs: OrderElem, rhs: OrderElem) -> str:
    """'holds', 'fails', or 'indeterminate' for lhs == rhs at working precision."""
    diff = lhs - rhs
    if not diff.is_zero:
        return "fails"
    pa = lhs.params
    # vanishing certifies v >= p_prec + shift; hold once past s_prec / n
    if pa.p_prec + min(diff.shift, 0) >= pa.confidence_prec:
        return "holds"
    return "indeterminate"


@dataclass(frozen=True)
class RelationWord:
    """A word prod names^exponents compared against a target expression."""

    factors: tuple  # of (name, exponent)
    target: object = 1  # name, integer, or OrderElem


def verify_relation(word: RelationWord, env: dict) -> str:
    pa = None
    for name, _ in word.factors:
        if name not in env:
            raise UnknownName(name)
        pa = env[name].params
    acc = pa.one()
    for name, k in word.factors:
        acc = acc * env[name] ** k
    target = word.target
    if isinstance(target, str):
        if target not in env:
            raise UnknownName(target)
        target = env[target]
    elif isinstance(target, int):
        target = pa.from_int(target)
    return check_verdict(acc, target)


def order_check(x: OrderElem, d: int) -> bool:
    """x has exact multiplicative order d at working precision."""
    v = x.valuation()
    if not v == RationalValuation(0, 1):
        return False
    verdict = check_verdict(x**d, x.params.one())
    if verdict == "fails":
        return False
    if verdict == "indeterminate":
        raise IndeterminateAtPrecision("x^d - 1 vanishes below the confidence threshold")
    q, dd = 2, d
    while q * q <= dd:
        if dd % q == 0:
            if (x ** (d // q) - x.params.one()).is_zero:
                return False
            while dd % q == 0:
                dd //= q
        q += 1
    if dd > 1 and (x ** (d // dd) - x.params.one()).is_zero:
        return False
    return True


def hasse_embeds(m: int, n: int) -> bool:
    """Does the invariant-1/m algebra embed in the invariant-1/n one?"""
    return n % m == 0 and (n // m) % m == 1 % m


# -- explicit embeddings ----------------------------------------------------------


def embed_q8(params: OrderParams):
    """The quaternion triple (i, j, k) inside the p=2, n=2 order, via the
    square root of -7 and the third root of unity."""
    if (params.p, params.n) != (2, 2) or params.u.val != 1:
        raise ValueError("Q_8 embedding needs p = 2, n = 2, u = 1")
    if params.p_prec < 4:
        raise PrecisionTooLow("need at least 4 digits for the square root of -7")
    t = params.witt
    rho = hensel_sqrt(PadicInt.from_integer(-7, 2, params.p_prec))
    w = t.omega()
    third = t.from_int(3).invert()
    rho_inv = t.from_int(rho.val).invert()
    a = (t.one() + w.scale(2)) * third
    b_i = (t.one() - w.scale(4)) * third * rho_inv
    b_j = -(w + t.from_int(5)) * third * rho_inv
    s = params.s()
    i = params.from_witt(a) + params.from_witt(b_i) * s
    j = params.from_witt(a) + params.from_witt(b_j) * s
    return i, j, i * j


def example049_elements(params: OrderParams):
    """The explicit maximal subgroup data at p = 3, n = 4: X, Z, zeta_3, tau."""
    if (params.p, params.n) != (3, 4) or params.u.val != 1:
        raise ValueError("this construction needs p = 3, n = 4, u = 1")
    if params.p_prec < 2:
        raise PrecisionTooLow("need at least 2 digits")
    omega = params.omega()
    x = omega * params.s()
    z = x * x
    half = params.witt.from_int(2).invert()
    zeta3 = -(params.one() + z) * params.from_witt(half)
    tau = omega**5
    return x, z, zeta3, tau


def _fq_pow(x, k, g, p):
    from .localfield import _fp_polymod, _fp_polymul

    out = _fp_polymod([1], g, p)
    base = list(x)
    while k:
        if k & 1:
            out = _fp_polymod(_fp_polymul(out, base, p), g, p)
        base = _fp_polymod(_fp_polymul(base, base, p), g, p)
        k >>= 1
    return out


def _residue_candidates(p, f, start=0):
    for code in range(start, p**f):
        vec, v = [], code
        for _ in range(f):
            v, d = divmod(v, p)
            vec.append(d)
        yield tuple(vec)


def _norm_residue_solve(tower: FieldTower, target: int):
    """Lexicographically first residue c with N(c) = target in F_p^x;
    the residue norm is c^((q-1)/(p-1))."""
    from .localfield import _fp_polymod

    p, f = tower.p, tower.f
    g = [c % p for c in tower.unram]
    want = _fp_polymod([target % p], g, p)
    exp = (p**f - 1) // (p - 1)
    for vec in _residue_candidates(p, f, start=1):
        if _fq_pow(vec, exp, g, p) == want:
            return vec
    raise AssertionError("norm is surjective; unreachable")


def _trace_residue_solve(tower: FieldTower, target: int):
    """Lexicographically first residue e with Tr(e) = target in F_p."""
    from .localfield import _fp_polymod

    p, f = tower.p, tower.f
    g = [c % p for c in tower.unram]
    want = _fp_polymod([target % p], g, p)
    for vec in _residue_candidates(p, f):
        acc = [0] * f
        cur = list(vec)
        for _ in range(f):
            acc = [(x + y) % p for x, y in zip(acc, cur)]
            cur = _fq_pow(cur, p, g, p)
        if acc == want:
            return vec
    raise AssertionError("trace is surjective; unreachable")


def witt_norm(w: FieldElem) -> FieldElem:
    """Norm over the full unramified Galois group (Frobenius powers)."""
    return w.norm([(1, 1)])


def solve_norm_equation(tower: FieldTower, target: PadicInt) -> FieldElem:
    """A unit c of W_n with N(c) = target, lifted level by level through the
    unit filtration using surjectivity of the residue norm and trace."""
    if not target.is_unit:
        raise NonUnit("norm targets must be units")
    p, prec = tower.p, tower.prec
    c = tower.teichmuller(_norm_residue_solve(tower, target.val))
    for k in range(1, prec):
        cur = witt_norm(c).grid[0][0]
        diff = (target.val - cur) % p**prec
        if diff % p**k != 0:
            raise AssertionError("lift invariant broken")
        d = diff // p**k % p
        if d == 0:
            continue
        # N(c(1 + e p^k)) = N(c)(1 + Tr(e) p^k) mod p^(k+1)
        scale = pow(cur, -1, p ** (k + 1))
        e = _trace_residue_solve(tower, d * scale % p)
        c = c * (tower.one() + tower.teichmuller(e).scale(p**k))
    return c


def xi_generator(params: OrderParams, target_u=None) -> OrderElem:
    """xi = cS with xi^n = p * target_u; conjugation by xi is the Frobenius."""
    if target_u is None:
        target_u = params.u
    if not isinstance(target_u, PadicInt):
        target_u = PadicInt.from_integer(int(target_u), params.p, params.p_prec)
    want = target_u * params.u.invert()
    if want == PadicInt.from_integer(1, params.p, want.prec):
        return params.s()
    c = solve_norm_equation(params.witt, want)
    return params.from_witt(c) * params.s()
