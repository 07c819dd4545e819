"""Classification of maximal finite subgroups of the stabilizer group and its
extended form, as total decision procedures over (p, n, u).

The inner-group classes come from the metacyclic/quaternionic classification;
the extended classes iterate maximal abelian F_0 over the tower levels and
apply the extendability branches, consuming r1/r2 verdicts from unitclasses.
Every emitted label carries its theorem provenance and a multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NotApplicable, UnsupportedParameters
from .localfield import euler_phi_prime_power
from .padic import PadicInt
from .unitclasses import multiplicative_order, r1_max, r2_admissible

GRID_P_MAX = 7
GRID_N_MAX = 12


@dataclass(frozen=True, order=True)
class GroupClassLabel:
    order: int
    name: str
    kind: str  # cyclic | metacyclic | product | semidirect | Q8 | D8 | Q16 | SD16 | T24 | O48
    provenance: str = field(compare=False)
    count: int = field(default=1, compare=False)
    params: tuple = field(default=(), compare=False)
    note: str = field(default="", compare=False)

    def to_json(self):
        out = {
            "label": self.name,
            "order": self.order,
            "provenance": self.provenance,
            "count": self.count,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class ClassificationInput:
    p: int
    n: int
    u_mod: int  # u mod p^2 for odd p, u mod 8 for p = 2
    u: PadicInt = None

    def __post_init__(self):
        mod = 8 if self.p == 2 else self.p**2
        object.__setattr__(self, "u_mod", self.u_mod % mod)
        if math.gcd(self.u_mod, self.p) != 1:
            raise ValueError("u must be a unit residue")
        if self.u is not None:
            from .padic import residue_datum

            if residue_datum(self.u, mod) != self.u_mod:
                raise ValueError("full unit disagrees with the residue datum")


@dataclass
class ClassificationReport:
    input: dict
    classes: list
    pairs: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self):
        out = {"input": self.input, "classes": [c.to_json() for c in sorted(self.classes)]}
        if self.pairs:
            out["pairs"] = [list(t) for t in self.pairs]
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def names(self):
        return sorted(c.name for c in self.classes for _ in range(c.count))


def _split_n(p: int, n: int):
    """(k, m) with n = (p-1) p^(k-1) m, m prime to p; k = 0 when (p-1) does not divide n."""
    if p == 2:
        k, m = 1, n
        while m % 2 == 0:
            m //= 2
            k += 1
        return k, m
    if n % (p - 1):
        return 0, n
    k, m = 1, n // (p - 1)
    while m % p == 0:
        m //= p
        k += 1
    return k, m


def _n_alpha(p: int, n: int, alpha: int) -> int:
    return n // euler_phi_prime_power(p, alpha)


def maximal_in_Sn(p: int, n: int) -> ClassificationReport:
    """Conjugacy classes of maximal finite subgroups of the stabilizer group."""
    classes = []
    notes = []
    k, m = _split_n(p, n)
    if p > 2:
        if k == 0:
            classes.append(
                GroupClassLabel(p**n - 1, f"C{p**n - 1}", "cyclic", "prop022")
            )
        else:
            classes.append(GroupClassLabel(p**n - 1, f"C{p**n - 1}", "cyclic", "thm024[G0]"))
            for alpha in range(1, k + 1):
                na = _n_alpha(p, n, alpha)
                quot = (p**na - 1) * (p - 1)
                classes.append(
                    GroupClassLabel(
                        p**alpha * quot,
                        f"C{p**alpha}:C{quot}",
                        "metacyclic",
                        f"thm024[G{alpha}]",
                        params=(p**alpha, quot),
                    )
                )
    else:
        for alpha in range(1, k + 1):
            na = _n_alpha(2, n, alpha)
            if alpha == 2 and k == 2:
                label = GroupClassLabel(
                    24 * (2**m - 1),
                    f"T24xC{2**m - 1}" if m > 1 else "T24",
                    "product",
                    "thm032+thm165",
                    params=(24, 2**m - 1),
                )
                if m == 1:
                    # C_6 = G_1 embeds in T_24; conjugacy classes are ordered by
                    # containment, so the cyclic class is not maximal here
                    label = GroupClassLabel(
                        label.order, label.name, label.kind,
                        label.provenance + "+cor173-dedup[G1=C6<T24]", params=label.params,
                    )
                    classes = [c for c in classes if c.name != "C6"]
                    notes.append("k=2, m=1: G_1 = C_6 embeds in T_24 and is dropped (Cor 173)")
                classes.append(label)
            else:
                order = 2**alpha * (2**na - 1)
                classes.append(
                    GroupClassLabel(order, f"C{order}", "cyclic", f"thm032[G{alpha}]" if k > 1 else "prop022")
                )
    return ClassificationReport({"p": p, "n": n}, classes, notes=notes)


def abelian_classes(p: int, n: int) -> ClassificationReport:
    """All abelian classes, indexed by pairs (alpha, d | p^(n_alpha) - 1)."""
    k, _m = _split_n(p, n)
    if p > 2 and n % (p - 1):
        k = 0
    pairs = []
    classes = []
    for alpha in range(0, k + 1):
        na = _n_alpha(p, n, alpha)
        top = p**na - 1
        for d in range(1, top + 1):
            if top % d == 0:
                pairs.append((alpha, d))
                classes.append(
                    GroupClassLabel(
                        p**alpha * d, f"C{p**alpha * d}", "cyclic", f"cor212[alpha={alpha},d={d}]"
                    )
                )
    return ClassificationReport({"p": p, "n": n}, classes, pairs=pairs)


def _u_generates_mod_p2(p: int, u_mod: int) -> bool:
    """u outside mu(Z_p^x) x U_2: the principal part of u is not 1 mod p^2."""
    ubar = u_mod % p
    teich = pow(ubar, p, p**2)
    return (u_mod - teich) % p**2 != 0


def quaternionic_extension(p: int, n: int, u_mod: int) -> dict:
    """Existence of the order 48m(2^m-1) extension of the binary tetrahedral class."""
    if p != 2:
        raise NotApplicable("quaternionic 2-Sylow needs p = 2")
    if n % 4 != 2:
        raise NotApplicable("Q_8 embeds only when n = 2 mod 4")
    m = n // 2
    u_mod %= 8
    exists = u_mod in (1, 7)
    return {
        "exists": exists,
        "order": 48 * m * (2**m - 1) if exists else None,
        "unique": True if exists else None,
        "provenance": "thm260",
    }


def _general_odd(p: int, n: int, u_mod: int):
    classes = []
    k, m = _split_n(p, n)
    for alpha in range(0, k + 1):
        na = _n_alpha(p, n, alpha)
        d = p**na - 1
        v1 = r1_max(p, n, alpha, d, u_mod)
        r1 = v1.maximal
        f0_order = p**alpha * d
        if alpha <= 1:
            full, prov = True, "thm250.2"
        elif alpha == k and _u_generates_mod_p2(p, u_mod):
            full, prov = True, "thm250.3"
        else:
            full, prov = False, "thm250.1"
        if full:
            w = n
            name = f"(C{f0_order}.{r1}):G"
            kind = "semidirect"
        else:
            w = (p - 1) * m
            name = f"(C{f0_order}.{r1}):G'"
            kind = "semidirect"
        classes.append(
            GroupClassLabel(
                f0_order * r1 * w,
                name,
                kind,
                f"{prov}[alpha={alpha},r1={v1.branch}]",
                params=(alpha, r1, w),
            )
        )
    return classes


def _general_two(n: int, u_mod: int):
    classes = []
    k, m = _split_n(2, n)
    u_mod %= 8
    for alpha in range(1, k + 1):
        na = _n_alpha(2, n, alpha)
        d = 2**na - 1
        v1 = r1_max(2, n, alpha, d, u_mod)
        r1 = v1.maximal
        f0_order = 2**alpha * d
        if alpha == 1:
            count = 1 if n % 2 else 2
            note = "" if count == 1 else "2-Sylow C2xC{2^(k-1)} vs C{2^k} (two classes)"
            classes.append(
                GroupClassLabel(
                    f0_order * n,
                    f"C{f0_order}:G",
                    "semidirect",
                    f"thm259.2[alpha=1,r1={v1.branch}]",
                    count=count,
                    params=(alpha, r1, n),
                    note=note,
                )
            )
        elif alpha == 2 and k == 2:
            if u_mod in (1, 7):
                q = quaternionic_extension(2, n, u_mod)
                classes.append(
                    GroupClassLabel(
                        q["order"],
                        f"(T24xC{2**m - 1}):C{n}" if m > 1 else "T24:C2",
                        "semidirect",
                        "thm260",
                        params=(alpha,),
                    )
                )
            else:
                w = 2 * m  # the full Galois group of Q_2(F_0)
                classes.append(
                    GroupClassLabel(
                        f0_order * r1 * w,
                        f"(C{f0_order}.{r1}):G",
                        "semidirect",
                        f"thm259.3[alpha=2,r1={v1.branch}]",
                        count=2,
                        params=(alpha, r1, w),
                        note="one of the two classes is contained in the T24 product class (Remark 265)",
                    )
                )
                classes.append(
                    GroupClassLabel(
                        24 * (2**m - 1),
                        f"T24xC{2**m - 1}" if m > 1 else "T24",
                        "product",
                        "thm260-nonextendable",
                        params=(24, 2**m - 1),
                    )
                )
        else:
            # alpha = 2 with k > 2 has no G-extension (Thm 259.3), alpha >= 3
            # never does (Thm 259.4); the odd part always extends (Thm 259.1)
            w = m
            classes.append(
                GroupClassLabel(
                    f0_order * r1 * w,
                    f"(C{f0_order}.{r1}):G'",
                    "semidirect",
                    f"thm259.1[alpha={alpha},r1={v1.branch}]",
                    params=(alpha, r1, w),
                )
            )
    return classes


# -- the hardcoded n = 2 tables ----------------------------------------------------


def _table_261(u_mod3: int):
    sd16 = GroupClassLabel(16, "SD16", "SD16", "thm261")
    if u_mod3 % 3 == 1:
        return [sd16, GroupClassLabel(24, "C3:Q8", "semidirect", "thm261[u=1 mod 3]")]
    return [sd16, GroupClassLabel(24, "C3:D8", "semidirect", "thm261[u=-1 mod 3]")]


def _table_264(u_mod8: int):
    c3c4 = GroupClassLabel(12, "C3:C4", "metacyclic", "thm264")
    c6c2 = GroupClassLabel(12, "C6:C2", "metacyclic", "thm264")
    t24 = GroupClassLabel(24, "T24", "T24", "thm264")
    tables = {
        1: [c6c2, GroupClassLabel(48, "O48", "O48", "thm264[u=1 mod 8]")],
        7: [c3c4, GroupClassLabel(48, "T24:C2", "semidirect", "thm264[u=-1 mod 8]")],
        3: [c3c4, c6c2, GroupClassLabel(8, "D8", "D8", "thm264[u=3 mod 8]"), t24],
        5: [c3c4, c6c2, GroupClassLabel(8, "Q8", "Q8", "thm264[u=-3 mod 8]"), t24],
    }
    return tables[u_mod8 % 8]


def _refine_n2(p: int, u_mod: int, classes):
    """Rename the general-engine output at n = 2 into the isomorphism types of
    the published tables (the structures depend on u through x_1^2)."""
    if p == 3:
        out = []
        for c in classes:
            if c.params and c.params[0] == 0:
                out.append(GroupClassLabel(16, "SD16", "SD16", c.provenance))
            else:
                name = "C3:Q8" if u_mod % 3 == 1 else "C3:D8"
                out.append(GroupClassLabel(24, name, "semidirect", c.provenance))
        return out
    out = []
    u8 = u_mod % 8
    for c in classes:
        if c.params and c.params[0] == 1:
            # the count-2 pair splits into the two published order-12 classes,
            # pruned by their containments in the alpha = 2 classes
            if u8 == 1:
                out.append(GroupClassLabel(12, "C6:C2", "metacyclic", c.provenance))
            elif u8 == 7:
                out.append(GroupClassLabel(12, "C3:C4", "metacyclic", c.provenance))
            else:
                out.append(GroupClassLabel(12, "C3:C4", "metacyclic", c.provenance))
                out.append(GroupClassLabel(12, "C6:C2", "metacyclic", c.provenance))
        elif c.name == "T24:C2" and u8 == 1:
            out.append(GroupClassLabel(48, "O48", "O48", c.provenance))
        elif c.kind == "semidirect" and c.count == 2 and c.order == 8:
            name = "D8" if u8 == 3 else "Q8"
            out.append(GroupClassLabel(8, name, name, c.provenance))
        else:
            out.append(c)
    return out


def maximal_in_Gn(inp: ClassificationInput) -> ClassificationReport:
    """Conjugacy classes of maximal finite subgroups of the extended group."""
    p, n = inp.p, inp.n
    if p > GRID_P_MAX or n > GRID_N_MAX:
        raise UnsupportedParameters(f"grid capped at p <= {GRID_P_MAX}, n <= {GRID_N_MAX}")
    if p > 2 and n % (p - 1):
        # no p-torsion: the single unramified tower class
        classes = [
            GroupClassLabel(
                (p**n - 1) * n, f"C{p**n - 1}:C{n}", "metacyclic", "thm250.2[alpha=0]",
                params=(0, 1, n),
            )
        ]
        return ClassificationReport({"p": p, "n": n, "u_mod": inp.u_mod}, classes)
    classes = _general_odd(p, n, inp.u_mod) if p > 2 else _general_two(n, inp.u_mod)
    if n == 2 and p in (2, 3):
        classes = _refine_n2(p, inp.u_mod, classes)
    return ClassificationReport({"p": p, "n": n, "u_mod": inp.u_mod}, classes)


def hardcoded_n2_table(p: int, u_mod: int):
    if p == 3:
        return sorted(_table_261(u_mod))
    if p == 2:
        return sorted(_table_264(u_mod))
    raise NotApplicable("tables exist for p in {2, 3} only")


def scan(p_values, n_values, u_values):
    """Sweep a grid and yield (p, n, u_mod, report) rows in deterministic order."""
    for p in sorted(p_values):
        for n in sorted(n_values):
            for u in sorted(u_values):
                if math.gcd(u, p) != 1:
                    continue
                try:
                    rep = maximal_in_Gn(ClassificationInput(p, n, u))
                except UnsupportedParameters:
                    continue
                yield p, n, u, rep
