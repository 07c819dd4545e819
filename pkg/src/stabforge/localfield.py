"""Arithmetic in the towers Q_p c W_f c Q_p(zeta_{p^alpha}, zeta_{p^f-1}).

Elements are polynomial grids: sums c_{ij} beta^j pi^i with pi-degree < e and
beta-degree < f, where pi = zeta_{p^alpha} - 1 is a root of the cyclotomic
polynomial Q_alpha and beta generates the unramified part.  Coefficients are
integers mod p^prec shared across the grid; pi-adic digit sequences are a view
computed on demand.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import IndeterminateAtPrecision, NonUnit


def euler_phi_prime_power(p: int, alpha: int) -> int:
    return 1 if alpha == 0 else (p - 1) * p ** (alpha - 1)


def q_alpha_coeffs(p: int, alpha: int):
    """Coefficients a_0..a_e of Q_alpha(X) = ((X+1)^{p^alpha}-1)/((X+1)^{p^{alpha-1}}-1).

    a_i is the sum of binomial(p^{alpha-1} k, i) over 0 <= k < p; a_0 = p and
    the polynomial is monic of degree phi(p^alpha).
    """
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    e = euler_phi_prime_power(p, alpha)
    step = p ** (alpha - 1)
    coeffs = [0] * (e + 1)
    for k in range(p):
        m = step * k
        for i in range(min(m, e) + 1):
            coeffs[i] += math.comb(m, i)
    return tuple(coeffs)


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _fp_polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _fp_polymod(a, g, p):
    # g monic
    a = list(a)
    dg = len(g) - 1
    for i in range(len(a) - 1, dg - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(dg):
                a[i - dg + j] = (a[i - dg + j] - c * g[j]) % p
    while len(a) > dg:
        a.pop()
    while len(a) < dg:
        a.append(0)
    return a


def _fp_polypow_x(exp, g, p):
    # X^exp mod g over F_p
    result = [1] + [0] * (len(g) - 2)
    base = _fp_polymod([0, 1] + [0] * max(0, len(g) - 3), g, p)
    while exp:
        if exp & 1:
            result = _fp_polymod(_fp_polymul(result, base, p), g, p)
        base = _fp_polymod(_fp_polymul(base, base, p), g, p)
        exp >>= 1
    return result


def _is_irreducible(g, p):
    f = len(g) - 1
    xq = _fp_polypow_x(p**f, g, p)
    x = [0, 1] + [0] * (f - 2) if f >= 2 else [0]
    x = (x + [0] * f)[:f]
    if xq != x:
        return False
    for r in _prime_factors(f):
        xr = _fp_polypow_x(p ** (f // r), g, p)
        diff = [(a - b) % p for a, b in zip(xr, x)]
        if all(c == 0 for c in diff):
            return False
    return True


def _is_primitive(g, p):
    # the class of X generates the multiplicative group of F_p[X]/(g)
    f = len(g) - 1
    order = p**f - 1
    one = [1] + [0] * (f - 1)
    for q in _prime_factors(order):
        if _fp_polypow_x(order // q, g, p) == one:
            return False
    return True


@lru_cache(maxsize=None)
def unramified_poly(p: int, f: int):
    """Deterministic defining polynomial for W_f: the lexicographically smallest
    monic polynomial of degree f over F_p that is irreducible with primitive roots.
    """
    if f == 1:
        for c in range(1, p):
            g = [(-c) % p, 1]  # X - c, root c
            if _is_primitive(g, p):
                return tuple(g)
        raise AssertionError("no primitive root found")
    for code in range(p**f):
        coeffs, v = [], code
        for _ in range(f):
            v, d = divmod(v, p)
            coeffs.append(d)
        if coeffs[0] == 0:
            continue
        g = coeffs + [1]
        if _is_irreducible(g, p) and _is_primitive(g, p):
            return tuple(g)
    raise AssertionError("no primitive polynomial found")


class RationalValuation:
    """A value of the normalized valuation, v(p) = 1, as a reduced fraction."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        if den <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name, value):
        raise AttributeError("RationalValuation is immutable")

    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalValuation(other, 1)
        if isinstance(other, tuple):
            other = RationalValuation(*other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __lt__(self, other):
        if isinstance(other, int):
            other = RationalValuation(other, 1)
        return self.num * other.den < other.num * self.den

    def __le__(self, other):
        return self == other or self < other

    def __add__(self, other):
        if isinstance(other, int):
            other = RationalValuation(other, 1)
        return RationalValuation(self.num * other.den + other.num * self.den, self.den * other.den)

    def __repr__(self):
        return f"{self.num}/{self.den}" if self.den != 1 else f"{self.num}"


class FieldTower:
    """Shared context: the field Q_p(zeta_{p^alpha}, zeta_{p^f-1}) at a fixed
    coefficient precision (all element coefficients live mod p^prec)."""

    def __init__(self, p: int, f: int, alpha: int, prec: int):
        if prec < 1:
            raise ValueError("prec must be >= 1")
        self.p = p
        self.f = f
        self.alpha = alpha
        self.prec = prec
        self.e = euler_phi_prime_power(p, alpha)
        self.mod = p**prec
        self.unram = unramified_poly(p, f)  # length f+1, monic
        if alpha >= 1:
            self.q_coeffs = q_alpha_coeffs(p, alpha)
        else:
            self.q_coeffs = (-p, 1)  # pi = p when there is no ramification
        self._teich_cache = {}
        self._frob_cache = {}

    @classmethod
    def for_pi_prec(cls, p: int, f: int, alpha: int, n_pi: int) -> "FieldTower":
        """Tower whose coefficient precision supports pi-adic work mod pi^n_pi,
        with two guard digits for exact divisions."""
        e = euler_phi_prime_power(p, alpha)
        return cls(p, f, alpha, -(-n_pi // e) + 2)

    @property
    def degree(self) -> int:
        return self.e * self.f

    @property
    def pi_prec(self) -> int:
        return self.e * self.prec

    # -- element constructors ------------------------------------------------

    def zero(self) -> "FieldElem":
        return FieldElem(self, [[0] * self.f for _ in range(self.e)])

    def one(self) -> "FieldElem":
        return self.from_int(1)

    def from_int(self, z: int) -> "FieldElem":
        g = [[0] * self.f for _ in range(self.e)]
        g[0][0] = z % self.mod
        return FieldElem(self, g)

    def from_grid(self, grid) -> "FieldElem":
        g = [[int(grid[i][j]) % self.mod for j in range(self.f)] for i in range(self.e)]
        return FieldElem(self, g)

    def pi(self) -> "FieldElem":
        if self.alpha == 0:
            return self.from_int(self.p)
        g = [[0] * self.f for _ in range(self.e)]
        if self.e == 1:
            # e = 1 only when alpha = 0 (handled) or p = 2, alpha = 1: pi = zeta_2 - 1 = -2
            return self.from_int(-2)
        g[1][0] = 1
        return FieldElem(self, g)

    def zeta(self) -> "FieldElem":
        """zeta_{p^alpha} = 1 + pi."""
        return self.one() + self.pi()

    def beta(self) -> "FieldElem":
        g = [[0] * self.f for _ in range(self.e)]
        if self.f == 1:
            g[0][0] = (-self.unram[0]) % self.mod
        else:
            g[0][1] = 1
        return FieldElem(self, g)

    def omega(self) -> "FieldElem":
        """Teichmueller generator of the residue field torsion (order p^f - 1)."""
        return self.teichmuller(self.beta().residue_vector())

    # -- residue-field helpers -------------------------------------------------

    def teichmuller(self, residue) -> "FieldElem":
        """Teichmueller lift of a residue-field element (tuple of f digits)."""
        residue = tuple(d % self.p for d in residue)
        if all(d == 0 for d in residue):
            return self.zero()
        hit = self._teich_cache.get(residue)
        if hit is not None:
            return hit
        g = [[0] * self.f for _ in range(self.e)]
        g[0] = [d % self.mod for d in residue]
        x = FieldElem(self, g)
        q = self.p**self.f
        for _ in range(self.prec + 1):
            y = x**q
            if y == x:
                break
            x = y
        self._teich_cache[residue] = x
        return x

    def frobenius_beta(self, t: int) -> "FieldElem":
        """sigma^t(beta): the root of the defining polynomial congruent to beta^(p^t)."""
        t %= self.f
        hit = self._frob_cache.get(t)
        if hit is not None:
            return hit
        if t == 0:
            img = self.beta()
        else:
            x = self.beta() ** (self.p**t)
            gpoly = [c % self.mod for c in self.unram]
            dpoly = [(j * gpoly[j]) % self.mod for j in range(1, len(gpoly))]
            for _ in range(self.prec.bit_length() + 2):
                gx = _eval_poly(gpoly, x)
                dgx = _eval_poly(dpoly, x)
                x = x - gx * dgx.invert()
            img = x
        self._frob_cache[t] = img
        return img

    def galois_closure(self, generators):
        """All (s, t) pairs in the subgroup generated by the given pairs."""
        mod_s = self.p**self.alpha if self.alpha >= 1 else 1
        norm = lambda st: (st[0] % mod_s if mod_s > 1 else 0, st[1] % self.f)
        seen = {norm((1, 0))}
        frontier = [norm((1, 0))]
        gens = [norm(g) for g in generators]
        for s, _t in gens:
            if mod_s > 1 and math.gcd(s, self.p) != 1:
                raise ValueError("s must be prime to p")
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = norm((cur[0] * g[0] if mod_s > 1 else 0, cur[1] + g[1]))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
                    if len(seen) > self.degree:
                        raise ValueError("generators do not define a subgroup of the Galois group")
        return sorted(seen)


def _eval_poly(coeffs, x: "FieldElem") -> "FieldElem":
    # Horner; integer coefficients
    acc = x.tower.zero()
    for c in reversed(coeffs):
        acc = acc * x + x.tower.from_int(c) if c else acc * x
    return acc


class FieldElem:
    """An element sum_{i<e} (sum_{j<f} c_ij beta^j) pi^i, coefficients mod p^prec."""

    __slots__ = ("tower", "grid")

    def __init__(self, tower: FieldTower, grid):
        self.tower = tower
        self.grid = grid  # list of e rows, each a list of f ints in [0, mod)

    # -- basics ---------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower is other.tower and self.grid == other.grid

    def __hash__(self):
        return hash((id(self.tower), tuple(tuple(r) for r in self.grid)))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for row in self.grid for c in row)

    def residue_vector(self):
        """The image in the residue field, as f digits in [0, p)."""
        return tuple(c % self.tower.p for c in self.grid[0])

    @property
    def is_unit(self) -> bool:
        return any(d != 0 for d in self.residue_vector())

    def __neg__(self):
        m = self.tower.mod
        return FieldElem(self.tower, [[(-c) % m for c in row] for row in self.grid])

    def __add__(self, other):
        other = self._coerce(other)
        m = self.tower.mod
        return FieldElem(
            self.tower,
            [[(a + b) % m for a, b in zip(r1, r2)] for r1, r2 in zip(self.grid, other.grid)],
        )

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return -(self - other)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.tower is not self.tower:
                raise ValueError("elements from different towers")
            return other
        if isinstance(other, int):
            return self.tower.from_int(other)
        raise TypeError(f"cannot coerce {type(other)}")

    def scale(self, c: int) -> "FieldElem":
        m = self.tower.mod
        c %= m
        return FieldElem(self.tower, [[(c * x) % m for x in row] for row in self.grid])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        t = self.tower
        e, f, m = t.e, t.f, t.mod
        width = 2 * f - 1
        acc = [[0] * width for _ in range(2 * e - 1)]
        for i1, r1 in enumerate(self.grid):
            if all(c == 0 for c in r1):
                continue
            for i2, r2 in enumerate(other.grid):
                if all(c == 0 for c in r2):
                    continue
                row = acc[i1 + i2]
                for j1, c1 in enumerate(r1):
                    if c1:
                        for j2, c2 in enumerate(r2):
                            if c2:
                                row[j1 + j2] += c1 * c2
        # reduce beta-degree by the monic unramified polynomial
        g = t.unram
        for row in acc:
            for j in range(width - 1, f - 1, -1):
                c = row[j] % m
                if c:
                    row[j] = 0
                    for k in range(f):
                        row[j - f + k] -= c * g[k]
        # fold pi-degree >= e via the monic Q_alpha
        q = t.q_coeffs
        for i in range(2 * e - 2, e - 1, -1):
            row = acc[i]
            if any(c % m for c in row):
                for k in range(e):
                    a = q[k]
                    if a:
                        dst = acc[i - e + k]
                        for j in range(f):
                            dst[j] -= a * row[j]
            acc[i] = None
        return FieldElem(t, [[c % m for c in acc[i][:f]] for i in range(e)])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "FieldElem":
        if k < 0:
            return self.invert() ** (-k)
        result = self.tower.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def invert(self) -> "FieldElem":
        """Inverse of a unit by Newton iteration from the residue-field inverse."""
        t = self.tower
        if not self.is_unit:
            raise NonUnit("only units are invertible in the ring")
        q = t.p**t.f
        res = t.teichmuller(self.residue_vector())
        y = res ** (q - 2) if q > 2 else t.one()
        for _ in range(t.prec.bit_length() + t.e.bit_length() + 2):
            err = t.one() - self * y
            if err.is_zero:
                break
            y = y + y * err
        return y

    # -- valuation and digits ---------------------------------------------------

    def valuation(self) -> RationalValuation:
        """min over nonzero grid terms of i/e + v_p(c); v(p) = 1."""
        t = self.tower
        best = None
        for i, row in enumerate(self.grid):
            for c in row:
                if c:
                    vp = 0
                    while c % t.p == 0:
                        c //= t.p
                        vp += 1
                    cand = RationalValuation(i + t.e * vp, t.e)
                    if best is None or cand < best:
                        best = cand
        if best is None:
            raise IndeterminateAtPrecision("all tracked digits vanish")
        return best

    def pi_valuation_at_least(self, n: int) -> bool:
        """True when v(self) >= n/e at the tracked precision (zero counts as yes)."""
        if self.is_zero:
            return True
        return RationalValuation(n, self.tower.e) <= self.valuation()

    def congruent(self, other, n_pi: int) -> bool:
        """self = other mod pi^n_pi."""
        return (self - self._coerce(other)).pi_valuation_at_least(n_pi)

    def div_pi(self) -> "FieldElem":
        """Exact division by pi of an element divisible by pi.

        Uses p = -pi R(pi) with R the cofactor of Q_alpha, so everything stays
        inside the ring; consumes guard precision via one exact division by p.
        """
        t = self.tower
        row0 = self.grid[0]
        if any(c % t.p for c in row0):
            raise NonUnit("element is not divisible by pi")
        d0 = [c // t.p for c in row0]
        e, f, m = t.e, t.f, t.mod
        if t.alpha == 0:
            return FieldElem(t, [[c % m for c in d0]])
        q = t.q_coeffs
        out = [[0] * f for _ in range(e)]
        for i in range(e - 1):
            a = q[i + 1]
            for j in range(f):
                out[i][j] = (self.grid[i + 1][j] - a * d0[j]) % m
        for j in range(f):
            out[e - 1][j] = (-d0[j]) % m
        return FieldElem(t, out)

    def pi_digit_expansion(self, n_pi: int):
        """Teichmueller digit vectors lambda_0..lambda_{n_pi-1} with
        x = sum lambda_i pi^i mod pi^n_pi; each digit is f residue digits."""
        t = self.tower
        if self.is_zero:
            return [tuple([0] * t.f) for _ in range(n_pi)]
        digits, y = [], self
        for _ in range(n_pi):
            r = y.residue_vector()
            digits.append(r)
            if any(r):
                y = y - t.teichmuller(r)
            y = y.div_pi()
        return digits

    @staticmethod
    def from_pi_digits(tower: FieldTower, digits) -> "FieldElem":
        acc = tower.zero()
        pi = tower.pi()
        power = tower.one()
        for d in digits:
            acc = acc + tower.teichmuller(tuple(d)) * power
            power = power * pi
        return acc

    # -- Galois ------------------------------------------------------------------

    def galois_act(self, s: int, t: int) -> "FieldElem":
        """Apply zeta -> zeta^s, beta -> sigma^t(beta); a ring homomorphism."""
        tw = self.tower
        if tw.alpha >= 1:
            if math.gcd(s, tw.p) != 1:
                raise ValueError("s must be prime to p")
            s %= tw.p**tw.alpha
            pi_img = tw.zeta() ** s - tw.one()
        else:
            pi_img = tw.pi()
        beta_img = tw.frobenius_beta(t)
        acc = tw.zero()
        for i in range(tw.e - 1, -1, -1):
            row_val = tw.zero()
            for j in range(tw.f - 1, -1, -1):
                row_val = row_val * beta_img + tw.from_int(self.grid[i][j])
            acc = acc * pi_img + row_val
        return acc

    def norm(self, generators) -> "FieldElem":
        """Product over the orbit of the subgroup generated by (s, t) pairs."""
        out = self.tower.one()
        for s, t in self.tower.galois_closure(generators):
            out = out * self.galois_act(s if s else 1, t)
        return out

    def trace(self, generators) -> "FieldElem":
        out = self.tower.zero()
        for s, t in self.tower.galois_closure(generators):
            out = out + self.galois_act(s if s else 1, t)
        return out

    def __repr__(self):
        terms = []
        for i, row in enumerate(self.grid):
            for j, c in enumerate(row):
                if c:
                    terms.append(f"{c}*b^{j}*pi^{i}")
        return " + ".join(terms) if terms else "0"


def epsilon_alpha(tower: FieldTower) -> FieldElem:
    """The unit with p * epsilon = pi^phi(p^alpha), from the Eisenstein shape of
    Q_alpha: epsilon = -1 - sum_{0<i<e} (a_i/p) pi^i (exact integer divisions)."""
    if tower.alpha < 1:
        raise ValueError("epsilon_alpha needs alpha >= 1")
    g = [[0] * tower.f for _ in range(tower.e)]
    g[0][0] = -1 % tower.mod
    q = tower.q_coeffs
    for i in range(1, tower.e):
        g[i][0] = (-(q[i] // tower.p)) % tower.mod
    return FieldElem(tower, g)


def change_rings(x: FieldElem, target: FieldTower) -> FieldElem:
    """The map i_alpha into the next cyclotomic level: zeta_{p^a} -> zeta_{p^{a+1}}^p."""
    src = x.tower
    if target.p != src.p or target.f != src.f or target.alpha != src.alpha + 1:
        raise ValueError("target must be the same tower one cyclotomic level up")
    if src.alpha == 0:
        pi_img = target.from_int(src.p)
    else:
        pi_img = target.zeta() ** src.p - target.one()
    beta_img = target.beta()
    acc = target.zero()
    for i in range(src.e - 1, -1, -1):
        row_val = target.zero()
        for j in range(src.f - 1, -1, -1):
            row_val = row_val * beta_img + target.from_int(x.grid[i][j])
        acc = acc * pi_img + row_val
    return acc
