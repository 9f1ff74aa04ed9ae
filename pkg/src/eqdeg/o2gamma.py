"""Closed subgroups of O(2) x Gamma' with finite Weyl group.

Gamma' is a finite group (in the delay-network pipeline, Gamma x Z2 with
the antipodal Z2).  Subgroups are stored in Goursat form: a closed
O(2)-part H, a part K <= Gamma', kernels Z <| H and R <| K, and the pairing
H/Z ~ K/R realised as an explicit element set

    Sigma = {(h, x) in H x K : pairing matches}.

O(2) elements are handled symbolically and exactly: (t, +1) is the
rotation by 2*pi*t and (t, -1) the reflection r_t * kappa, with t a
Fraction mod 1.  Conjugation rules in O(2): rotations are central on
rotations; conjugating by a rotation r_phi shifts every reflection
parameter by 2*phi; conjugating by kappa negates parameters.  That makes
all Dn with the same n conjugate, and Zn, SO(2), O(2) normal.

Everything downstream (orbit types, Weyl orders, containment counts,
Burnside products) reduces to finite exact computations on these element
sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .chartab import CharacterTable, SignedGroup
from .cyclotomic import Cyc
from .permgroup import Group, subgroup_lattice

DEBUG_CHECK_SUBGROUPS = False

ZERO = Fraction(0)
HALF = Fraction(1, 2)


class InfiniteWeylError(ValueError):
    pass


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# context: the finite factor Gamma' with characters and subgroup data


class GammaContext:
    """Multiplication tables, characters and subgroup classes of Gamma'."""

    def __init__(self, group: Group, char_rows, char_labels=None):
        self.group = group
        self.n = group.order
        self.elems = list(group.elements)
        idx = {g: i for i, g in enumerate(self.elems)}
        self._idx = idx
        self.identity = idx[group.identity]
        self.mult = [
            [idx[group.mul(a, b)] for b in self.elems] for a in self.elems
        ]
        self.inv = [idx[group.inv(a)] for a in self.elems]
        self.conj = [
            [idx[group.conj(g, x)] for x in self.elems] for g in self.elems
        ]
        self.chars: list[tuple[Cyc, ...]] = [tuple(row) for row in char_rows]
        self.char_labels = list(char_labels or range(len(self.chars)))
        self.char_dims = [row[self.identity].as_integer() for row in self.chars]
        self.lattice = subgroup_lattice(group)
        self._set_of_class = [
            frozenset(idx[g] for g in cls.rep_set) for cls in self.lattice.classes
        ]
        self._class_of_set: dict[frozenset, int] = {}
        for ci, cls in enumerate(self.lattice.classes):
            for member in cls.conjugates:
                self._class_of_set[frozenset(idx[g] for g in member)] = ci
        # caches
        self._interned: dict = {}
        self._mode1: list | None = None
        self._fixdim: dict = {}
        self._weyl: dict = {}
        self._ncount: dict = {}
        self._products: dict = {}
        self._key_of_set: dict = {}

    @staticmethod
    def from_character_table(table: CharacterTable) -> "GammaContext":
        rows = [
            tuple(table.rows[l][table.class_of(g)] for g in table.group.elements)
            for l in range(table.n_irreps)
        ]
        return GammaContext(table.group, rows)

    @staticmethod
    def from_signed_group(signed: SignedGroup) -> "GammaContext":
        rows = [
            tuple(signed.signed_char(l, g) for g in signed.group.elements)
            for l in range(signed.gamma_table.n_irreps)
        ]
        ctx = GammaContext(signed.group, rows)
        ctx.signed = signed
        return ctx

    def exponent(self) -> int:
        e = 1
        for i in range(self.n):
            k, x = 1, i
            while x != self.identity:
                x = self.mult[x][i]
                k += 1
            e = lcm(e, k)
        return e

    def subgroup_class_index(self, kset: frozenset) -> int:
        return self._class_of_set[frozenset(kset)]

    def subgroup_conjugates(self, kset: frozenset) -> list[frozenset]:
        ci = self.subgroup_class_index(kset)
        out = {
            frozenset(self.conj[g][x] for x in kset) for g in range(self.n)
        }
        assert len(out) == self.lattice.classes[ci].class_size
        return sorted(out, key=sorted)

    def class_sets(self) -> list[frozenset]:
        return list(self._set_of_class)

    def subgroup_name(self, kset: frozenset) -> str:
        overrides = getattr(self, "display_overrides", None)
        if overrides:
            name = overrides.get(self.subgroup_class_index(frozenset(kset)))
            if name:
                return name
        signed = getattr(self, "signed", None)
        if signed is None:
            return self.lattice.classes[self.subgroup_class_index(kset)].name
        return self._signed_name(frozenset(kset))

    def bind_display_names(self, named_generators: dict) -> None:
        """Attach conventional display names: {name: iterable of element
        indices generating the subgroup}.  Display only; fingerprints stay
        the contract."""
        overrides = {}
        for name, gens in named_generators.items():
            sub = {self.identity}
            frontier = [self.identity]
            gen_idx = list(gens)
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gen_idx:
                        y = self.mult[g][x]
                        if y not in sub:
                            sub.add(y)
                            nxt.append(y)
                frontier = nxt
            overrides[self.subgroup_class_index(frozenset(sub))] = name
        self.display_overrides = overrides

    def _signed_name(self, kset: frozenset) -> str:
        """Decorated display name over Gamma x Z2: S for S x {1}, Sp for
        S x Z2, S^T for the twisted subgroup with even part T.  Bindings are
        a convention of this engine; structural fingerprints are the
        contract."""
        cached = getattr(self, "_signed_names", None)
        if cached is None:
            cached = {}
            self._signed_names = cached
        name = cached.get(kset)
        if name is not None:
            return name
        signed = self.signed
        gamma_lat = getattr(self, "_gamma_lattice", None)
        if gamma_lat is None:
            gamma_lat = subgroup_lattice(signed.gamma)
            self._gamma_lattice = gamma_lat
        proj = frozenset(signed.parts(self.elems[g])[0] for g in kset)
        even = frozenset(
            signed.parts(self.elems[g])[0]
            for g in kset
            if signed.parts(self.elems[g])[1] == 1
        )
        sname = gamma_lat.classes[gamma_lat.class_of(proj)].name
        if len(kset) == 2 * len(proj):
            name = f"{sname}p"
        elif len(even) == len(kset):
            name = sname
        else:
            tname = gamma_lat.classes[gamma_lat.class_of(even)].name
            name = f"{sname}^{tname}"
        cached[kset] = name
        return name

    def char_value(self, l: int, g: int) -> Cyc:
        return self.chars[l][g]


# ---------------------------------------------------------------------------
# amalgamated classes


@dataclass(frozen=True)
class AmalgamatedClass:
    """One conjugacy class of closed subgroups of O(2) x Gamma'.

    kind "fin": finite subgroup, elems = frozenset of (t, s, g).
    kind "o2":  O(2) x K (isotropy shapes of mode-0 vectors; "G" itself is
                the case K = Gamma').
    kind "so2": SO(2) x K (only order/containment queries).
    """

    ctx: GammaContext
    kind: str
    elems: frozenset | None
    K: frozenset | None
    key: tuple

    def __eq__(self, other):
        return isinstance(other, AmalgamatedClass) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    # -- structural data ---------------------------------------------------

    @property
    def order(self) -> int:
        if self.kind == "fin":
            return len(self.elems)
        raise InfiniteWeylError("infinite subgroup has no order")

    def axes(self) -> list[Fraction]:
        return sorted({t for (t, s, g) in self.elems if s == -1})

    def is_dihedral(self) -> bool:
        return self.kind == "fin" and any(s == -1 for (_, s, _) in self.elems)

    def h_part(self) -> tuple[str, int]:
        """O(2)-projection as (kind, rotation order)."""
        if self.kind == "o2":
            return ("O2", 0)
        if self.kind == "so2":
            return ("SO2", 0)
        rot = {t for (t, s, g) in self.elems if s == 1}
        d = len(rot)
        return ("D", d) if self.is_dihedral() else ("Z", d)

    def k_part(self) -> frozenset:
        if self.kind in ("o2", "so2"):
            return self.K
        return frozenset(g for (_, _, g) in self.elems)

    def z_part(self) -> frozenset:
        """Elements of the O(2)-side kernel {h : (h, identity) in Sigma}."""
        e = self.ctx.identity
        if self.kind in ("o2", "so2"):
            return frozenset({"all"})
        return frozenset((t, s) for (t, s, g) in self.elems if g == e)

    def r_part(self) -> frozenset:
        """The Gamma'-side kernel {x : (identity_O2, x) in Sigma}."""
        if self.kind in ("o2", "so2"):
            return self.K
        return frozenset(g for (t, s, g) in self.elems if s == 1 and t == 0)

    def l_order(self) -> int:
        if self.kind in ("o2", "so2"):
            return 1
        return len(self.k_part()) // len(self.r_part())

    def fingerprint(self) -> tuple:
        """Structural identity used for acceptance matching and reports."""
        if self.kind in ("o2", "so2"):
            return (self.kind, len(self.K))
        hk, d = self.h_part()
        return (hk, 2 * d if hk == "D" else d, len(self.z_part()),
                self.l_order(), len(self.r_part()), len(self.k_part()))

    def name(self) -> str:
        ctx = self.ctx
        if self.kind == "o2":
            return f"O(2) x {ctx.subgroup_name(self.K)}" if len(self.K) < ctx.n else "G"
        if self.kind == "so2":
            return f"SO(2) x {ctx.subgroup_name(self.K)}"
        hk, d = self.h_part()
        hname = f"{hk}{d}"
        z = self.z_part()
        rz = sum(1 for (t, s) in z if s == 1)
        fz = len(z) - rz
        if fz:
            zname = f"D{rz}"
            q = d // rz
            lname = "Z1" if q == 1 else f"Z{q}"
        else:
            zname = "Z1" if rz == 1 else f"Z{rz}"
            q = d // rz
            lname = "Z2" if q == 1 else f"D{q}"
        rname = ctx.subgroup_name(self.r_part())
        kname = ctx.subgroup_name(self.k_part())
        return f"{hname} ^{zname} x_{lname} ^{rname} {kname}"


# -- O(2) x Gamma' element algebra (t, s, g) --------------------------------


def elem_mul(ctx: GammaContext, a, b):
    t1, s1, g1 = a
    t2, s2, g2 = b
    return ((t1 + t2 if s1 == 1 else t1 - t2) % 1, s1 * s2, ctx.mult[g1][g2])


def elem_inv(ctx: GammaContext, a):
    t, s, g = a
    return ((-t) % 1 if s == 1 else t, s, ctx.inv[g])


def _kappa_conj(elems):
    return frozenset(((-t) % 1, s, g) for (t, s, g) in elems)


def _shift_refl(elems, delta):
    return frozenset(
        ((t + delta) % 1, s, g) if s == -1 else (t, s, g) for (t, s, g) in elems
    )


def _gamma_conj(ctx, elems, g):
    tab = ctx.conj[g]
    return frozenset((t, s, tab[x]) for (t, s, x) in elems)


def _serialize(elems) -> tuple:
    return tuple(sorted((t.numerator, t.denominator, s, g) for (t, s, g) in elems))


def _fin_key(ctx: GammaContext, elems: frozenset) -> tuple:
    cached = ctx._key_of_set.get(elems)
    if cached is not None:
        return cached
    best = None
    for kappa in (False, True):
        base = _kappa_conj(elems) if kappa else elems
        axes = sorted({t for (t, s, g) in base if s == -1}) or [ZERO]
        for a in axes:
            aligned = _shift_refl(base, -a)
            for g in range(ctx.n):
                cand = _serialize(_gamma_conj(ctx, aligned, g))
                if best is None or cand < best:
                    best = cand
    key = ("fin", best)
    ctx._key_of_set[elems] = key
    return key


def _assert_subgroup(ctx, elems):
    if not DEBUG_CHECK_SUBGROUPS:
        return
    ident = (ZERO, 1, ctx.identity)
    assert ident in elems
    for a in elems:
        assert elem_inv(ctx, a) in elems
        for b in elems:
            assert elem_mul(ctx, a, b) in elems


def make_fin(ctx: GammaContext, elems) -> AmalgamatedClass:
    elems = frozenset(elems)
    _assert_subgroup(ctx, elems)
    key = _fin_key(ctx, elems)
    cached = ctx._interned.get(key)
    if cached is None:
        cached = AmalgamatedClass(ctx, "fin", elems, None, key)
        ctx._interned[key] = cached
    return cached


def make_o2(ctx: GammaContext, kset) -> AmalgamatedClass:
    kset = frozenset(kset)
    members = ctx.subgroup_conjugates(kset)
    key = ("o2", tuple(sorted(min(members, key=sorted))))
    cached = ctx._interned.get(key)
    if cached is None:
        cached = AmalgamatedClass(ctx, "o2", None, kset, key)
        ctx._interned[key] = cached
    return cached


def make_so2(ctx: GammaContext, kset) -> AmalgamatedClass:
    kset = frozenset(kset)
    members = ctx.subgroup_conjugates(kset)
    key = ("so2", tuple(sorted(min(members, key=sorted))))
    cached = ctx._interned.get(key)
    if cached is None:
        cached = AmalgamatedClass(ctx, "so2", None, kset, key)
        ctx._interned[key] = cached
    return cached


def full_group(ctx: GammaContext) -> AmalgamatedClass:
    return make_o2(ctx, frozenset(range(ctx.n)))


# ---------------------------------------------------------------------------
# folding


def fold(cls: AmalgamatedClass, p: int) -> AmalgamatedClass:
    """The preimage of the class under the p-fold cover of O(2).

    A mode-k isotropy class pulls back to the mode-p*k class; p = 1 is the
    identity.
    """
    if p < 1:
        raise ValueError("fold index must be >= 1")
    if p == 1 or cls.kind in ("o2", "so2"):
        return cls
    ctx = cls.ctx
    out = set()
    for (t, s, g) in cls.elems:
        for j in range(p):
            out.add(((t + j) / p % 1, s, g))
    return make_fin(ctx, out)


# ---------------------------------------------------------------------------
# fixed-space dimensions in the irreducible pieces W_k (x) V_l


def fixed_dim(cls: AmalgamatedClass, k: int, l: int) -> int:
    """dim of the fixed subspace of the class inside W_k (x) V_l.

    For k >= 1 the block is the complexification of V_l with rotations
    acting by exp(-2*pi*i*k*t); the rotation-only part of the subgroup has
    a complex fixed space, and each reflection-type element acts on it as
    a real structure, cutting the real dimension in half.
    """
    ctx = cls.ctx
    cache_key = (cls.key, k, l)
    cached = ctx._fixdim.get(cache_key)
    if cached is not None:
        return cached
    if cls.kind in ("o2", "so2"):
        if k >= 1:
            dim = 0
        else:
            dim = _avg_char(ctx, l, cls.K)
    elif k == 0:
        dim = _avg_char(ctx, l, cls.k_part())
    else:
        rot = [(t, g) for (t, s, g) in cls.elems if s == 1]
        total = Cyc.rational(0)
        for (t, g) in rot:
            total = total + Cyc.root_turn((-k * t) % 1) * ctx.char_value(l, g)
        total = total * Fraction(1, len(rot))
        cdim = total.as_fraction()
        if cdim.denominator != 1:
            raise ArithmeticError(f"non-integer complex fixed dimension {cdim}")
        dim = cdim.numerator if cls.is_dihedral() else 2 * cdim.numerator
    ctx._fixdim[cache_key] = dim
    return dim


def _avg_char(ctx: GammaContext, l: int, kset) -> int:
    total = Cyc.rational(0)
    for g in kset:
        total = total + ctx.char_value(l, g)
    q = (total * Fraction(1, len(kset))).as_fraction()
    if q.denominator != 1:
        raise ArithmeticError(f"non-integer fixed dimension {q}")
    return q.numerator


# ---------------------------------------------------------------------------
# Weyl groups, containment, counts


def weyl_is_finite(cls: AmalgamatedClass) -> bool:
    if cls.kind in ("o2", "so2"):
        return True
    return cls.is_dihedral()


def weyl_order(cls: AmalgamatedClass) -> int:
    ctx = cls.ctx
    cached = ctx._weyl.get(cls.key)
    if cached is not None:
        return cached
    if cls.kind == "o2":
        kset = frozenset(cls.K)
        norm = sum(
            1
            for g in range(ctx.n)
            if all(ctx.conj[g][x] in kset for x in kset)
        )
        w = norm // len(kset)
    elif cls.kind == "so2":
        kset = frozenset(cls.K)
        norm = sum(
            1
            for g in range(ctx.n)
            if all(ctx.conj[g][x] in kset for x in kset)
        )
        w = 2 * norm // len(kset)
    else:
        if not cls.is_dihedral():
            raise InfiniteWeylError(
                "rotation-only classes have infinite Weyl group in O(2) x Gamma'"
            )
        elems = cls.elems
        axes = cls.axes()
        count = 0
        for g in range(ctx.n):
            base = _gamma_conj(ctx, elems, g)
            for kappa in (False, True):
                twisted = _kappa_conj(base) if kappa else base
                tw_axes = {t for (t, s, _) in twisted if s == -1}
                for delta in {(a - b) % 1 for a in axes for b in tw_axes}:
                    if _shift_refl(twisted, delta) == elems:
                        count += 1
        # each (shift, twist, gamma) action is realised by exactly two rotations
        w = 2 * count // len(elems)
    ctx._weyl[cls.key] = w
    return w


def subconjugate(c1: AmalgamatedClass, c2: AmalgamatedClass) -> bool:
    return _containment_count(c1, c2, count_all=False) > 0


def n_count_amalgam(c1: AmalgamatedClass, c2: AmalgamatedClass) -> int:
    """Number of conjugates of c2 containing a fixed representative of c1."""
    return _containment_count(c1, c2, count_all=True)


def _containment_count(c1, c2, count_all: bool) -> int:
    ctx = c1.ctx
    if ctx is not c2.ctx:
        raise ValueError("classes live over different groups")
    memo_key = (c1.key, c2.key, count_all)
    cached = ctx._ncount.get(memo_key)
    if cached is not None:
        return cached
    result = _containment_count_raw(ctx, c1, c2, count_all)
    ctx._ncount[memo_key] = result
    return result


def _containment_count_raw(ctx, c1, c2, count_all):
    if c2.kind == "o2":
        k1 = c1.k_part()
        hits = [K for K in ctx.subgroup_conjugates(c2.K) if k1 <= K]
        return len(hits)
    if c2.kind == "so2":
        if c1.kind == "o2" or (c1.kind == "fin" and c1.is_dihedral()):
            return 0
        k1 = c1.k_part()
        return len([K for K in ctx.subgroup_conjugates(c2.K) if k1 <= K])
    if c1.kind in ("o2", "so2"):
        return 0
    if not c1.is_dihedral():
        raise InfiniteWeylError("containment counts need a reflection in the smaller class")
    if c2.order % c1.order:
        return 0
    a1 = c1.axes()[0]
    targets = set()
    for g in range(ctx.n):
        base = _gamma_conj(ctx, c2.elems, g)
        for kappa in (False, True):
            twisted = _kappa_conj(base) if kappa else base
            for b in sorted({t for (t, s, _) in twisted if s == -1}):
                cand = _shift_refl(twisted, a1 - b)
                if c1.elems <= cand:
                    if not count_all:
                        return 1
                    targets.add(cand)
    return len(targets)


# ---------------------------------------------------------------------------
# candidate enumeration at the base Fourier mode


def _dihedral_o2_group(d: int) -> tuple[list, dict]:
    elems = [(Fraction(j, d) % 1, s) for j in range(d) for s in (1, -1)]

    def mul(a, b):
        t1, s1 = a
        t2, s2 = b
        return ((t1 + t2 if s1 == 1 else t1 - t2) % 1, s1 * s2)

    return elems, mul


def group_isomorphisms(ea, mula, eb, mulb) -> list[dict]:
    """All isomorphisms between two small finite groups given elementwise."""
    if len(ea) != len(eb):
        return []

    def find_identity(elems, mul):
        return next(e for e in elems if all(mul(e, x) == x for x in elems))

    ida, idb = find_identity(ea, mula), find_identity(eb, mulb)

    def order_of(x, mul, ident):
        k, y = 1, x
        while y != ident:
            y = mul(y, x)
            k += 1
        return k

    orda = {x: order_of(x, mula, ida) for x in ea}
    ordb = {x: order_of(x, mulb, idb) for x in eb}
    if sorted(orda.values()) != sorted(ordb.values()):
        return []

    def closure(gens, elems, mul, ident):
        out = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mul(x, g)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    gens = []
    generated = {ida}
    for x in sorted(ea, key=lambda x: -orda[x]):
        if x not in generated:
            gens.append(x)
            generated = closure(gens, ea, mula, ida)
            if len(generated) == len(ea):
                break

    # express every element as a word reachable from the generators
    parents = {ida: None}
    order_bfs = [ida]
    i = 0
    while i < len(order_bfs):
        x = order_bfs[i]
        i += 1
        for gi, g in enumerate(gens):
            y = mula(x, g)
            if y not in parents:
                parents[y] = (x, gi)
                order_bfs.append(y)

    isos = []

    def assign(maps):
        image = {ida: idb}
        for x in order_bfs[1:]:
            px, gi = parents[x]
            image[x] = mulb(image[px], maps[gi])
        if len(set(image.values())) != len(eb):
            return None
        for a in ea:
            for b in ea:
                if image[mula(a, b)] != mulb(image[a], image[b]):
                    return None
        return image

    def backtrack(pos, chosen):
        if pos == len(gens):
            image = assign(chosen)
            if image is not None:
                isos.append(image)
            return
        want = orda[gens[pos]]
        for cand in eb:
            if ordb[cand] == want:
                backtrack(pos + 1, chosen + [cand])

    backtrack(0, [])
    return isos


def _normal_subgroups_of(ctx: GammaContext, kset: frozenset) -> list[frozenset]:
    out = []
    for sub in ctx.lattice.group.subgroups():
        sidx = frozenset(ctx._idx[g] for g in sub)
        if sidx <= kset and all(
            ctx.conj[g][x] in sidx for g in kset for x in sidx
        ):
            out.append(sidx)
    return out


def mode1_candidates(ctx: GammaContext) -> list[AmalgamatedClass]:
    """All classes that can be isotropy of a nonzero mode-1 vector and have
    a reflection in the O(2)-part (equivalently, finite Weyl group)."""
    if ctx._mode1 is not None:
        return ctx._mode1
    cached = _load_candidate_cache(ctx)
    if cached is not None:
        ctx._mode1 = cached
        return cached
    found: dict = {}
    exp = ctx.exponent()

    def record(elems):
        cls = make_fin(ctx, elems)
        found[cls.key] = cls

    class_sets = ctx.class_sets()
    normal_cache = {kset: _normal_subgroups_of(ctx, kset) for kset in class_sets}

    # pattern A: trivial O(2)-side kernel, L isomorphic to the dihedral part
    for d in divisors(exp):
        h_elems, h_mul = _dihedral_o2_group(d)
        for kset in class_sets:
            for rset in normal_cache[kset]:
                if len(kset) != 2 * d * len(rset):
                    continue
                cosets = _cosets_of(ctx, kset, rset)
                qmul = _coset_mul(ctx, cosets)
                for iso in group_isomorphisms(
                    h_elems, h_mul, list(cosets), qmul
                ):
                    elems = set()
                    for h, coset in iso.items():
                        t, s = h
                        for x in coset:
                            elems.add((t, s, x))
                    record(elems)

    # pattern B: O(2)-side kernel D1 = {1, kappa}; forces H in {D1, D2}
    for kset in class_sets:
        record({(ZERO, s, x) for s in (1, -1) for x in kset})
        for rset in normal_cache[kset]:
            if len(kset) != 2 * len(rset):
                continue
            elems = {(ZERO, s, x) for s in (1, -1) for x in rset}
            elems |= {(HALF, s, x) for s in (1, -1) for x in kset - rset}
            record(elems)

    out = sorted(found.values(), key=lambda c: (-c.order, c.key))
    ctx._mode1 = out
    _store_candidate_cache(ctx, out)
    return out


def _cache_path(ctx):
    import hashlib
    import os
    from pathlib import Path

    cache_dir = os.environ.get("EQDEG_CACHE_DIR")
    if not cache_dir:
        return None
    blob = repr((ctx.group.elements, [tuple(map(repr, row)) for row in ctx.chars]))
    digest = hashlib.sha256(blob.encode()).hexdigest()[:24]
    return Path(cache_dir) / f"mode1-{digest}.json"


def _load_candidate_cache(ctx):
    import json

    path = _cache_path(ctx)
    if path is None or not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    out = []
    for elems in payload:
        out.append(
            make_fin(
                ctx,
                {(Fraction(num, den), s, g) for (num, den, s, g) in elems},
            )
        )
    return out


def _store_candidate_cache(ctx, classes) -> None:
    import json

    path = _cache_path(ctx)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [
        sorted((t.numerator, t.denominator, s, g) for (t, s, g) in cls.elems)
        for cls in classes
    ]
    path.write_text(json.dumps(payload))


def _cosets_of(ctx, kset, rset) -> list[frozenset]:
    seen = set()
    cosets = []
    for g in sorted(kset):
        if g in seen:
            continue
        coset = frozenset(ctx.mult[g][x] for x in rset)
        seen |= coset
        cosets.append(coset)
    return cosets


def _coset_mul(ctx, cosets):
    lookup = {}
    for c in cosets:
        for x in c:
            lookup[x] = c

    def mul(a, b):
        return lookup[ctx.mult[min(a)][min(b)]]

    return mul


# ---------------------------------------------------------------------------
# orbit types per irreducible block


def enumerate_candidate_classes(ctx: GammaContext, k: int, l: int) -> list[AmalgamatedClass]:
    """Finite-Weyl classes that can appear as isotropy of nonzero vectors
    in W_k (x) V_l, folded to mode k."""
    if k == 0:
        out = []
        for kset in ctx.class_sets():
            if _avg_char(ctx, l, kset) > 0:
                out.append(make_o2(ctx, kset))
        return out
    base = [c for c in mode1_candidates(ctx) if fixed_dim(c, 1, l) > 0]
    return [fold(c, k) for c in base]


def orbit_types_mode1(ctx: GammaContext, l: int) -> list[AmalgamatedClass]:
    """Realised finite-Weyl orbit types of nonzero vectors at the base mode."""
    cands = [c for c in mode1_candidates(ctx) if fixed_dim(c, 1, l) > 0]
    realized = []
    for c in cands:
        dim_c = fixed_dim(c, 1, l)
        ok = True
        for c2 in cands:
            if c2 is c or c2.order <= c.order or c2.order % c.order:
                continue
            if fixed_dim(c2, 1, l) >= dim_c and subconjugate(c, c2):
                ok = False
                break
        if ok:
            realized.append(c)
    return realized


def _k0_orbit_classes(ctx: GammaContext, l: int) -> list[frozenset]:
    """Realised isotropy subgroup classes of Gamma' on V_l (trivial O(2))."""
    cands = [
        (ci, kset)
        for ci, kset in enumerate(ctx.class_sets())
        if _avg_char(ctx, l, kset) > 0
    ]
    out = []
    for ci, kset in cands:
        dim_c = _avg_char(ctx, l, kset)
        ok = True
        for cj, k2 in cands:
            if cj == ci:
                continue
            if ctx.lattice.n_count(ci, cj) > 0 and _avg_char(ctx, l, k2) >= dim_c:
                ok = False
                break
        if ok:
            out.append(kset)
    return out


def orbit_types(ctx: GammaContext, k: int, l: int) -> list[AmalgamatedClass]:
    if k == 0:
        return [make_o2(ctx, kset) for kset in _k0_orbit_classes(ctx, l)]
    return [fold(c, k) for c in orbit_types_mode1(ctx, l)]


def maximal_orbit_types(ctx: GammaContext, k: int, l: int) -> list[AmalgamatedClass]:
    """Orbit types maximal inside the block (the whole group excluded)."""
    if k == 0:
        kinds = _k0_orbit_classes(ctx, l)
        out = []
        for kset in kinds:
            ci = ctx.subgroup_class_index(kset)
            if not any(
                ctx.lattice.n_count(ci, ctx.subgroup_class_index(k2)) > 0
                for k2 in kinds
                if k2 != kset
            ):
                out.append(make_o2(ctx, kset))
        return out
    base = orbit_types_mode1(ctx, l)
    maxima = [
        c
        for c in base
        if not any(c2 is not c and subconjugate(c, c2) for c2 in base)
    ]
    return [fold(c, k) for c in maxima]


# ---------------------------------------------------------------------------
# Burnside products over O(2) x Gamma'


def class_product(c1: AmalgamatedClass, c2: AmalgamatedClass) -> dict:
    """(c1) * (c2) in the Burnside ring: {class: multiplicity}.

    Orbit types with a rotation-only O(2)-part have infinite Weyl group and
    carry no coefficient; they are dropped.
    """
    ctx = c1.ctx
    key = tuple(sorted((c1.key, c2.key)))
    cached = ctx._products.get(key)
    if cached is None:
        if c1.kind == "o2" and c2.kind == "o2":
            cached = _product_o2_o2(ctx, c1, c2)
        elif c1.kind == "o2":
            cached = _product_o2_fin(ctx, c1, c2)
        elif c2.kind == "o2":
            cached = _product_o2_fin(ctx, c2, c1)
        else:
            cached = _product_fin_fin(ctx, c1, c2)
        ctx._products[key] = cached
    return cached


def _product_o2_o2(ctx, c1, c2) -> dict:
    out: dict = {}
    k1, k2 = c1.K, c2.K
    seen = set()
    for g in range(ctx.n):
        coset_id = frozenset(
            ctx.mult[a][ctx.mult[g][b]] for a in k1 for b in k2
        )
        if coset_id in seen:
            continue
        seen.add(coset_id)
        inter = frozenset(x for x in k1 if ctx.conj[ctx.inv[g]][x] in k2)
        cls = make_o2(ctx, inter)
        out[cls] = out.get(cls, 0) + 1
    return out


def _product_o2_fin(ctx, c_o2, c_fin) -> dict:
    out: dict = {}
    kset = c_o2.K
    k_fin = c_fin.k_part()
    seen = set()
    for g in range(ctx.n):
        coset_id = frozenset(
            ctx.mult[a][ctx.mult[g][b]] for a in kset for b in k_fin
        )
        if coset_id in seen:
            continue
        seen.add(coset_id)
        target = frozenset(ctx.conj[ctx.inv[g]][x] for x in kset)
        inter = frozenset(
            (t, s, x) for (t, s, x) in c_fin.elems if x in target
        )
        if any(s == -1 for (_, s, _) in inter):
            cls = make_fin(ctx, inter)
            out[cls] = out.get(cls, 0) + 1
    return out


def _product_fin_fin(ctx, c1, c2) -> dict:
    a_elems, b_elems = c1.elems, c2.elems
    a_rot = {(t, g) for (t, s, g) in a_elems if s == 1}
    a_refl = [(t, g) for (t, s, g) in a_elems if s == -1]
    b_rot = {(t, g) for (t, s, g) in b_elems if s == 1}
    b_refl = [(t, g) for (t, s, g) in b_elems if s == -1]
    m_grid = 2 * lcm(*[t.denominator for (t, _, _) in a_elems | b_elems])
    weights: dict = {}
    for g in range(ctx.n):
        conj_g = ctx.conj[g]
        inv_tab = ctx.conj[ctx.inv[g]]
        rot_part = frozenset(
            (t, 1, x) for (t, x) in a_rot if (t, inv_tab[x]) in b_rot
        )
        buckets: dict = {}
        for (alpha, c) in a_refl:
            for (beta, b) in b_refl:
                if conj_g[b] != c:
                    continue
                phi = (alpha - beta) / 2 % 1
                for cand in (phi, (phi + HALF) % 1):
                    buckets.setdefault(cand, []).append((alpha, -1, c))
        for phi, refls in buckets.items():
            assert (phi * m_grid).denominator == 1
            inter = rot_part | frozenset(refls)
            weights[inter] = weights.get(inter, 0) + len(inter)
    total = len(a_elems) * len(b_elems)
    out: dict = {}
    for inter, weight in weights.items():
        cls = make_fin(ctx, inter)
        out[cls] = out.get(cls, 0) + weight
    result = {}
    for cls, weight in out.items():
        num = 2 * weight
        if num % total:
            raise AssertionError(
                "non-integer orbit count in Burnside product; "
                "subgroup data is inconsistent"
            )
        result[cls] = num // total
    return result
