"""Character tables, isotypic decompositions, and fixed-space dimensions.

Tables are inputs, not computed by a general algorithm: the bundled
constructors cover Z<n>, D<n> (n <= 12), S3 and S4 with exact entries, and
user tables can be loaded from JSON.  All inner products are exact; any
value that has to be an integer is extracted with a hard check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyc
from .permgroup import Group, Perm, parse_cycles


class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class CharacterTable:
    group: Group
    class_reps: tuple[Perm, ...]
    class_sizes: tuple[int, ...]
    rows: tuple[tuple[Cyc, ...], ...]
    real_type: tuple[bool, ...]
    class_names: tuple[str, ...] = ()

    def __post_init__(self):
        if sum(self.class_sizes) != self.group.order:
            raise CharacterError("class sizes do not sum to the group order")

    @property
    def n_classes(self) -> int:
        return len(self.class_reps)

    @property
    def n_irreps(self) -> int:
        return len(self.rows)

    def dims(self) -> tuple[int, ...]:
        return tuple(row[0].as_integer() for row in self.rows)

    def class_of(self, g: Perm) -> int:
        lut = _class_lookup(self)
        return lut[g]

    def value(self, irrep: int, g: Perm) -> Cyc:
        return self.rows[irrep][self.class_of(g)]

    def inner(self, chi: tuple, psi: tuple) -> Fraction:
        """<chi, psi> = (1/|G|) sum size * chi * conj(psi); must be rational."""
        total = Cyc.rational(0)
        for size, a, b in zip(self.class_sizes, chi, psi):
            a = a if isinstance(a, Cyc) else Cyc.rational(a)
            b = b if isinstance(b, Cyc) else Cyc.rational(b)
            total = total + a * b.conjugate() * size
        total = total * Fraction(1, self.group.order)
        if not total.is_rational():
            raise CharacterError("inner product is not rational")
        return total.as_fraction()

    def check_orthonormal(self) -> None:
        for i in range(self.n_irreps):
            for j in range(self.n_irreps):
                expected = Fraction(1 if i == j else 0)
                if self.inner(self.rows[i], self.rows[j]) != expected:
                    raise CharacterError(f"rows {i}, {j} are not orthonormal")


_class_lookup_cache: dict[int, dict] = {}


def _class_lookup(table: CharacterTable) -> dict:
    key = id(table)
    lut = _class_lookup_cache.get(key)
    if lut is None:
        group = table.group
        lut = {}
        for idx, rep in enumerate(table.class_reps):
            for g in group.elements:
                lut[group.conj(g, rep)] = idx
        if len(lut) != group.order:
            raise CharacterError("class representatives do not cover the group")
        _class_lookup_cache[key] = lut
    return lut


@dataclass(frozen=True)
class IsotypicDecomposition:
    multiplicities: tuple[int, ...]
    dims: tuple[int, ...]

    @property
    def component_dims(self) -> tuple[int, ...]:
        return tuple(m * d for m, d in zip(self.multiplicities, self.dims))

    def total_dim(self) -> int:
        return sum(self.component_dims)


def permutation_character(table: CharacterTable, action=None) -> tuple[int, ...]:
    """Fixed-point character of a permutation action, one value per class.

    ``action`` maps a group element to the permutation it acts by; the
    default is the group's own action on {1..degree}.
    """
    if action is None:
        action = lambda g: g
    return tuple(
        sum(1 for i, x in enumerate(action(rep)) if x == i) for rep in table.class_reps
    )


def isotypic_multiplicities(chi, table: CharacterTable) -> IsotypicDecomposition:
    mults = []
    for row in table.rows:
        q = table.inner(chi, row)
        if q.denominator != 1 or q < 0:
            raise CharacterError(f"character inconsistent with table: <chi,row> = {q}")
        mults.append(q.numerator)
    return IsotypicDecomposition(tuple(mults), table.dims())


def fixed_space_dim(table: CharacterTable, chi, subgroup) -> int:
    """dim of the subgroup-fixed subspace: average of chi over the subgroup."""
    total = Cyc.rational(0)
    for h in subgroup:
        v = chi[table.class_of(h)]
        total = total + (v if isinstance(v, Cyc) else Cyc.rational(v))
    total = total * Fraction(1, len(subgroup))
    if not total.is_rational():
        raise CharacterError("not a character: averaged value is irrational")
    q = total.as_fraction()
    if q.denominator != 1:
        raise CharacterError(f"not a character: fixed dimension {q}")
    return q.numerator


# ---------------------------------------------------------------------------
# bundled tables


def bundled_table(name: str) -> CharacterTable:
    name = name.strip()
    if name in ("S3",):
        return _symmetric3()
    if name == "S4":
        return _symmetric4()
    if name.startswith("Z"):
        n = int(name[1:])
        if not 1 <= n <= 12:
            raise CharacterError(f"no bundled table for {name}")
        return _cyclic(n)
    if name.startswith("D"):
        n = int(name[1:])
        if not 1 <= n <= 12:
            raise CharacterError(f"no bundled table for {name}")
        return _dihedral(n)
    raise CharacterError(f"no bundled table for {name}")


def _cyclic(n: int) -> CharacterTable:
    g = Group.from_name(f"Z{n}")
    if n == 1:
        return CharacterTable(
            g, (g.identity,), (1,), ((Cyc.rational(1),),), (True,), ("(1)",)
        )
    gen = tuple((i + 1) % n for i in range(n))
    reps = []
    x = g.identity
    for _ in range(n):
        reps.append(x)
        x = g.mul(gen, x)
    rows = tuple(
        tuple(Cyc.root_of_unity(j * a, n) for a in range(n)) for j in range(n)
    )
    real = tuple(j == 0 or 2 * j == n for j in range(n))
    names = tuple(f"(g^{a})" if a else "(1)" for a in range(n))
    return CharacterTable(g, tuple(reps), (1,) * n, rows, real, names)


def _dihedral(n: int) -> CharacterTable:
    g = Group.from_name(f"D{n}")
    if n == 1:
        z2 = g
        reps = tuple(sorted(z2.elements))
        rows = (
            (Cyc.rational(1), Cyc.rational(1)),
            (Cyc.rational(1), Cyc.rational(-1)),
        )
        return CharacterTable(z2, reps, (1, 1), rows, (True, True), ("(1)", "(k)"))
    if n == 2:
        rot = next(x for x in g.elements if x[:2] == (1, 0) and x[2:] == (2, 3))
        refl = next(x for x in g.elements if x[:2] == (0, 1) and x[2:] == (3, 2))
        both = g.mul(rot, refl)
        reps = (g.identity, rot, refl, both)
        one = Cyc.rational(1)
        neg = Cyc.rational(-1)
        rows = ((one,) * 4, (one, neg, one, neg), (one, one, neg, neg), (one, neg, neg, one))
        return CharacterTable(
            g, reps, (1, 1, 1, 1), rows, (True,) * 4, ("(1)", "(r)", "(k)", "(rk)")
        )
    rot = parse_cycles("(" + " ".join(str(i + 1) for i in range(n)) + ")")
    refl = tuple((-i) % n for i in range(n))  # fixes vertex 1
    rots = [g.identity]
    for _ in range(n - 1):
        rots.append(g.mul(rot, rots[-1]))
    one = Cyc.rational(1)
    neg = Cyc.rational(-1)
    if n % 2:
        reps = [g.identity] + [rots[a] for a in range(1, (n + 1) // 2)] + [refl]
        sizes = [1] + [2] * ((n - 1) // 2) + [n]
        names = ["(1)"] + [f"(r^{a})" if a > 1 else "(r)" for a in range(1, (n + 1) // 2)] + ["(k)"]
        rows = [tuple([one] * len(reps))]
        rows.append(tuple([one] * ((n + 1) // 2) + [neg]))
        for j in range(1, (n - 1) // 2 + 1):
            row = [Cyc.rational(2)]
            for a in range(1, (n + 1) // 2):
                row.append(Cyc.root_of_unity(j * a, n) + Cyc.root_of_unity(-j * a, n))
            row.append(Cyc.rational(0))
            rows.append(tuple(row))
        real = [True] * len(rows)
    else:
        # class order: (1), (k), (r), ..., (r^(n/2-1)), (rk), (r^(n/2))
        half = n // 2
        reps = [g.identity, refl] + [rots[a] for a in range(1, half)]
        reps += [g.mul(rots[1], refl), rots[half]]
        sizes = [1, half] + [2] * (half - 1) + [half, 1]
        names = ["(1)", "(k)"] + [f"(r^{a})" if a > 1 else "(r)" for a in range(1, half)]
        names += ["(rk)", f"(r^{half})"]
        # linear characters: k -> e1, r -> e2
        def linear(e1, e2):
            row = [one, Cyc.rational(e1)]
            row += [Cyc.rational(e2**a) for a in range(1, half)]
            row.append(Cyc.rational(e1 * e2))
            row.append(Cyc.rational(e2**half))
            return tuple(row)

        rows = [linear(1, 1), linear(-1, -1), linear(-1, 1), linear(1, -1)]
        for j in range(1, half):
            row = [Cyc.rational(2), Cyc.rational(0)]
            row += [
                Cyc.root_of_unity(j * a, n) + Cyc.root_of_unity(-j * a, n)
                for a in range(1, half)
            ]
            row.append(Cyc.rational(0))
            row.append(Cyc.root_of_unity(j * half, n) * 2)
            rows.append(tuple(row))
        real = [True] * len(rows)
    return CharacterTable(
        g, tuple(reps), tuple(sizes), tuple(rows), tuple(real), tuple(names)
    )


def _symmetric3() -> CharacterTable:
    g = Group.from_name("S3")
    reps = (g.identity, parse_cycles("(1 2)", 3), parse_cycles("(1 2 3)", 3))
    r = Cyc.rational
    rows = (
        (r(1), r(1), r(1)),
        (r(1), r(-1), r(1)),
        (r(2), r(0), r(-1)),
    )
    return CharacterTable(
        g, reps, (1, 3, 2), rows, (True,) * 3, ("(1)", "(12)", "(123)")
    )


def _symmetric4() -> CharacterTable:
    g = Group.from_name("S4")
    reps = (
        g.identity,
        parse_cycles("(1 2)", 4),
        parse_cycles("(1 2)(3 4)", 4),
        parse_cycles("(1 2 3)", 4),
        parse_cycles("(1 2 3 4)", 4),
    )
    r = Cyc.rational
    rows = (
        (r(1), r(1), r(1), r(1), r(1)),
        (r(1), r(-1), r(1), r(1), r(-1)),
        (r(2), r(0), r(2), r(-1), r(0)),
        (r(3), r(1), r(-1), r(0), r(-1)),
        (r(3), r(-1), r(-1), r(0), r(1)),
    )
    return CharacterTable(
        g,
        reps,
        (1, 6, 3, 8, 6),
        rows,
        (True,) * 5,
        ("(1)", "(12)", "(12)(34)", "(123)", "(1234)"),
    )


def table_from_json(group: Group, payload: str | dict) -> CharacterTable:
    """User-supplied table: class rep words, sizes, rows of 'p/q' strings."""
    data = json.loads(payload) if isinstance(payload, str) else payload
    reps = tuple(parse_cycles(w, group.degree) for w in data["class_reps"])
    sizes = tuple(int(s) for s in data["class_sizes"])
    rows = tuple(
        tuple(Cyc.rational(Fraction(str(v))) for v in row) for row in data["rows"]
    )
    real = tuple(bool(b) for b in data.get("real_type", [True] * len(rows)))
    table = CharacterTable(group, reps, sizes, rows, real)
    table.check_orthonormal()
    return table


# ---------------------------------------------------------------------------
# the antipodal extension Gamma x Z2


class SignedGroup:
    """Gamma x Z2 where the extra Z2 acts antipodally on every component.

    The irreducible characters used downstream are chi_l tensor sign, one
    per irreducible of Gamma; dims and multiplicities match Gamma's.
    """

    def __init__(self, table: CharacterTable):
        from .permgroup import direct_product

        gamma = table.group
        self.gamma = gamma
        self.gamma_table = table
        z2 = Group.make([tuple(range(gamma.degree)) + (gamma.degree + 1, gamma.degree)])
        flip = z2.generators[0]
        self.group = Group.make(
            [g + (gamma.degree, gamma.degree + 1) for g in gamma.generators] + [flip]
        )
        d = gamma.degree
        self._parts = {}
        for g in self.group.elements:
            gamma_part = g[:d]
            eps = 1 if g[d] == d else -1
            self._parts[g] = (gamma_part, eps)

    @property
    def order(self) -> int:
        return self.group.order

    def parts(self, g: Perm) -> tuple[Perm, int]:
        return self._parts[g]

    def signed_char(self, l: int, g: Perm) -> Cyc:
        """Value of (chi_l tensor sign) at g."""
        gamma_part, eps = self._parts[g]
        v = self.gamma_table.rows[l][self.gamma_table.class_of(gamma_part)]
        return v * eps

    def require_real_type(self, l: int) -> None:
        if not self.gamma_table.real_type[l]:
            raise CharacterError(
                f"irreducible {l} is not of real type; only real-type components are supported"
            )

    def signed_dim(self, l: int) -> int:
        return self.gamma_table.rows[l][0].as_integer()
