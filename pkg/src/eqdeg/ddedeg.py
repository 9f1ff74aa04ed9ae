"""Spectral analysis of the linearized delay network and the theorem engine.

For m commensurate delays the linearization acts on Fourier mode k through
the coupling sum c_k = sum_j exp(2*pi*i*j*k/m) * mu_j, which is real when
mu_j = mu_{m-j} (time reversibility).  The block eigenvalue on mode k is

    xi_{k,l} = (k^2 + c_k^l) / (1 + k^2),

negative exactly when c_k^l < -k^2, so only finitely many blocks carry
degree contributions.  Everything here is exact rational when the inputs
are rational and the cosines are (m in {1,2,3,4,6}); otherwise floats with
a tolerance band are used and near-zero eigenvalues are flagged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import cos, isqrt, pi

from .basicdeg import GRingElement, degree_product, x_o
from .chartab import CharacterTable, IsotypicDecomposition
from .cyclotomic import rational_cos_turn
from .o2gamma import (
    AmalgamatedClass,
    GammaContext,
    fixed_dim,
    fold,
    maximal_orbit_types,
    weyl_order,
)

DEFAULT_TOL = 1e-9


class ReversibilityError(ValueError):
    pass


class ScalarityError(ValueError):
    """The linearization does not act as a scalar on an isotypic component."""


class DegenerateSpectrumError(ValueError):
    """0 is an eigenvalue of the linearized operator."""


@dataclass
class LinearizationData:
    """Scalar values mu_j^l of the linearization on each isotypic component.

    mu[l] is the tuple (mu_0^l, ..., mu_{m-1}^l); reversibility demands
    mu_j = mu_{m-j} for every component.
    """

    m: int
    mu: dict[int, tuple]
    exact: bool = True

    def __post_init__(self):
        for l, row in self.mu.items():
            if len(row) != self.m:
                raise ValueError(f"component {l}: expected {self.m} delay values")
            for j in range(1, self.m):
                a, b = row[j], row[(self.m - j) % self.m]
                if self.exact:
                    if a != b:
                        raise ReversibilityError(
                            f"component {l}: mu_{j} != mu_{self.m - j}"
                        )
                elif abs(a - b) > 1e-12:
                    raise ReversibilityError(
                        f"component {l}: mu_{j} != mu_{self.m - j}"
                    )

    @staticmethod
    def from_matrices(
        table: CharacterTable,
        decomposition: IsotypicDecomposition,
        matrices,
        tol: float = DEFAULT_TOL,
    ) -> "LinearizationData":
        """Extract mu_j^l from raw matrices by isotypic projection.

        Each matrix must act as a scalar on every component present in the
        decomposition; a non-scalar block is rejected.
        """
        exact = all(
            isinstance(v, (int, Fraction)) for mat in matrices for row in mat for v in row
        )
        group = table.group
        n = group.degree
        for mat in matrices:
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError("linearization matrices must match the network size")
        mu: dict[int, tuple] = {}
        for l, mult in enumerate(decomposition.multiplicities):
            if mult == 0:
                continue
            proj = _isotypic_projector(table, l)
            basis_cols = [
                tuple(proj[r][c] for r in range(n))
                for c in range(n)
                if any(proj[r][c] for r in range(n))
            ]
            if not basis_cols:
                raise ScalarityError(f"component {l}: empty isotypic projector")
            row_vals = []
            for mat in matrices:
                val = _scalar_on_component(mat, proj, basis_cols, exact, tol, l)
                row_vals.append(val)
            mu[l] = tuple(row_vals)
        return LinearizationData(m=len(matrices), mu=mu, exact=exact)

    def component_indices(self) -> list[int]:
        return sorted(self.mu)


def _isotypic_projector(table: CharacterTable, l: int):
    group = table.group
    n = group.degree
    dim = table.dims()[l]
    proj = [[Fraction(0)] * n for _ in range(n)]
    for g in group.elements:
        chi = table.rows[l][table.class_of(g)]
        chi_q = chi.as_fraction()
        w = Fraction(dim, group.order) * chi_q
        for col in range(n):
            proj[g[col]][col] += w
    return proj


def _scalar_on_component(mat, proj, basis_cols, exact, tol, l):
    n = len(proj)
    ref = None
    for col in basis_cols:
        image = [sum(mat[r][i] * col[i] for i in range(n)) for r in range(n)]
        norm2 = sum(x * x for x in col)
        val = sum(image[i] * col[i] for i in range(n)) / norm2
        resid = [image[i] - val * col[i] for i in range(n)]
        if exact:
            if any(resid):
                raise ScalarityError(
                    f"component {l}: matrix is not scalar on the isotypic block"
                )
        else:
            scale = max(1.0, max(abs(float(x)) for x in image))
            if any(abs(float(r)) > tol * scale for r in resid):
                raise ScalarityError(
                    f"component {l}: matrix is not scalar on the isotypic block"
                )
        if ref is None:
            ref = val
        elif exact and val != ref:
            raise ScalarityError(f"component {l}: inconsistent scalar values")
        elif not exact and abs(float(val - ref)) > tol:
            raise ScalarityError(f"component {l}: inconsistent scalar values")
    return ref


def coupling_coefficient(data: LinearizationData, l: int, k: int):
    """c_k^l = sum_j mu_j^l cos(2*pi*j*k/m); the sine part cancels by
    reversibility."""
    row = data.mu[l]
    m = data.m
    if data.exact:
        total = Fraction(0)
        for j, v in enumerate(row):
            c = rational_cos_turn(Fraction(j * k, m) % 1)
            if c is None:
                total = None
                break
            total += Fraction(v) * c
        if total is not None:
            return total
    return float(sum(float(v) * cos(2 * pi * j * k / m) for j, v in enumerate(row)))


def xi(data: LinearizationData, l: int, k: int):
    c = coupling_coefficient(data, l, k)
    if isinstance(c, Fraction):
        return (k * k + c) / (1 + k * k)
    return (k * k + c) / (1.0 + k * k)


def default_k_max(data: LinearizationData) -> int:
    bound = 0.0
    for row in data.mu.values():
        bound = max(bound, data.m * max(abs(float(v)) for v in row))
    k = 1
    while k * k <= bound + 1:
        k += 1
    return k


SIGN_CHARS = {1: "+", 0: "0", -1: "-"}


@dataclass
class SpectralTable:
    """Signs, values and multiplicities of the block eigenvalues."""

    data: LinearizationData
    decomposition: IsotypicDecomposition
    k_max: int
    tol: float = DEFAULT_TOL
    xi_values: dict[tuple[int, int], object] = field(default_factory=dict)
    signs: dict[tuple[int, int], int] = field(default_factory=dict)
    m_kl: dict[tuple[int, int], int] = field(default_factory=dict)
    degenerate: list[tuple[int, int]] = field(default_factory=list)

    @property
    def components(self) -> list[int]:
        return self.data.component_indices()

    def build(self) -> "SpectralTable":
        for l in self.components:
            mult = self.decomposition.multiplicities[l]
            for k in range(0, self.k_max + 1):
                v = xi(self.data, l, k)
                self.xi_values[(k, l)] = v
                if isinstance(v, Fraction):
                    sign = 0 if v == 0 else (1 if v > 0 else -1)
                else:
                    sign = 0 if abs(v) <= self.tol else (1 if v > 0 else -1)
                self.signs[(k, l)] = sign
                if sign == 0:
                    self.degenerate.append((k, l))
                self.m_kl[(k, l)] = mult if sign < 0 else 0
        self._check_tail()
        return self

    def _check_tail(self) -> None:
        for l in self.components:
            row = self.data.mu[l]
            bound = self.data.m * max(abs(float(v)) for v in row)
            if self.k_max * self.k_max <= bound:
                raise ValueError(
                    f"k_max={self.k_max} too small: negative blocks may be missed"
                )
        for (k, l), sign in self.signs.items():
            if k == self.k_max:
                assert sign > 0, "tail bound violated"

    def zero_spectrum(self) -> bool:
        return bool(self.degenerate)

    def negative_factors(self) -> list[tuple[int, int, int]]:
        """(k, l, multiplicity) for each negative block."""
        return [
            (k, l, m)
            for (k, l), m in sorted(self.m_kl.items())
            if m > 0
        ]

    def sign_grid(self) -> list[list[str]]:
        return [
            [SIGN_CHARS[self.signs[(k, l)]] for l in self.components]
            for k in range(self.k_max + 1)
        ]

    def resonance_set(self, k_search: int | None = None) -> set[int]:
        """All modes where some block eigenvalue vanishes.

        Exact inputs: solved in closed form from k^2 = -c_k (the coupling
        only depends on k mod m).  Float inputs: scanned up to the bound.
        """
        out = set()
        m = self.data.m
        for l in self.components:
            for r in range(m):
                c = coupling_coefficient(self.data, l, r)
                if isinstance(c, Fraction):
                    if c > 0:
                        continue
                    target = -c
                    if target.denominator != 1:
                        continue
                    root = isqrt(target.numerator)
                    if root * root == target.numerator and root % m == r % m:
                        out.add(root)
                else:
                    limit = k_search or default_k_max(self.data)
                    for k in range(r, limit + 1, m):
                        if abs(k * k + c) <= self.tol:
                            out.add(k)
        return out


def survival_parity(table: SpectralTable, cls: AmalgamatedClass, k: int) -> int:
    """Number of negative blocks at mode k in which the class has odd fixed
    dimension; odd parity is the sufficient test for a surviving
    coefficient."""
    total = 0
    for l in table.components:
        m = table.m_kl.get((k, l), 0)
        if m and fixed_dim(cls, k, l) % 2 == 1:
            total += m
    return total


@dataclass
class Conclusion:
    cls: AmalgamatedClass
    mode: int
    component: int
    coefficient: int | None
    x_o: int
    parity: int
    base_mode_class: AmalgamatedClass

    def jsonable(self) -> dict:
        return {
            "class": self.cls.name(),
            "fingerprint": list(self.cls.fingerprint()),
            "mode": self.mode,
            "component": self.component + 1,
            "coefficient": self.coefficient,
            "x_o": self.x_o,
            "parity": self.parity,
            "weyl_order": weyl_order(self.cls),
            "non_constant": True,
        }


@dataclass
class DegreeReport:
    omega: GRingElement | None
    conclusions: list[Conclusion]
    zero_spectrum_flag: bool
    spectral: SpectralTable
    factors: list[tuple[int, int, int]]
    resonances: set[int] = field(default_factory=set)

    def guaranteed_fingerprints(self) -> list[tuple]:
        return sorted(c.cls.fingerprint() for c in self.conclusions)


def assemble_omega(ctx: GammaContext, spectral: SpectralTable) -> DegreeReport:
    """Full degree computation: omega = (G) - prod of basic degrees.

    Requires a nondegenerate spectrum; conclusions list every maximal-kind
    class at modes k >= 1 whose omega-coefficient is nonzero (each is
    finite, hence guarantees a non-constant orbit of periodic solutions
    with that extended symmetry class).
    """
    if spectral.zero_spectrum():
        raise DegenerateSpectrumError(
            f"zero block eigenvalue at {spectral.degenerate}; "
            "use the resonance-avoiding route"
        )
    factors = spectral.negative_factors()
    product = degree_product(ctx, factors)
    omega = GRingElement.unit(ctx) - product
    conclusions = _conclusions_from_omega(ctx, spectral, omega)
    return DegreeReport(
        omega=omega,
        conclusions=conclusions,
        zero_spectrum_flag=False,
        spectral=spectral,
        factors=factors,
        resonances=spectral.resonance_set(),
    )


def _conclusions_from_omega(ctx, spectral, omega) -> list[Conclusion]:
    out = []
    seen = set()
    modes = sorted({k for (k, l, m) in spectral.negative_factors() if k >= 1})
    for k in modes:
        for l in spectral.components:
            for cls in maximal_orbit_types(ctx, k, l):
                if cls.key in seen:
                    continue
                coeff = omega.coeff(cls)
                if coeff == 0:
                    continue
                seen.add(cls.key)
                base = _mode1_base(ctx, cls, k)
                out.append(
                    Conclusion(
                        cls=cls,
                        mode=k,
                        component=l,
                        coefficient=coeff,
                        x_o=x_o(ctx, k, l, cls),
                        parity=survival_parity(spectral, cls, k),
                        base_mode_class=base,
                    )
                )
    out.sort(key=lambda c: (c.mode, c.component, c.cls.key))
    return out


def _mode1_base(ctx, cls, k):
    if k == 1:
        return cls
    for l in range(len(ctx.chars)):
        for base in maximal_orbit_types(ctx, 1, l):
            if fold(base, k) == cls:
                return base
    return cls


def theorem_conclusions_nondegenerate(
    ctx: GammaContext, spectral: SpectralTable
) -> DegreeReport:
    """Existence report for the nondegenerate case (0 not in the spectrum)."""
    return assemble_omega(ctx, spectral)


def theorem_conclusions_resonant(
    ctx: GammaContext, spectral: SpectralTable, s: int
) -> DegreeReport:
    """Resonance-avoiding route: restrict to modes k = (2j-1)s.

    s must be chosen so that no odd multiple of s is resonant; conclusions
    come from the parity counts at those modes.
    """
    resonances = spectral.resonance_set()
    bad = sorted(r for r in resonances if r > 0 and (r // s) % 2 == 1 and r % s == 0)
    if bad:
        raise ValueError(
            f"s={s} is not admissible: resonant mode {bad[0]} is an odd multiple of s"
        )
    conclusions = []
    seen = set()
    modes = [k for k in range(1, spectral.k_max + 1) if (k % s == 0) and (k // s) % 2 == 1]
    for k in modes:
        for l in spectral.components:
            if spectral.m_kl.get((k, l), 0) == 0:
                continue
            for cls in maximal_orbit_types(ctx, k, l):
                if cls.key in seen:
                    continue
                parity = survival_parity(spectral, cls, k)
                if parity % 2 == 0:
                    continue
                seen.add(cls.key)
                conclusions.append(
                    Conclusion(
                        cls=cls,
                        mode=k,
                        component=l,
                        coefficient=None,
                        x_o=x_o(ctx, k, l, cls),
                        parity=parity,
                        base_mode_class=_mode1_base(ctx, cls, k),
                    )
                )
    conclusions.sort(key=lambda c: (c.mode, c.component, c.cls.key))
    return DegreeReport(
        omega=None,
        conclusions=conclusions,
        zero_spectrum_flag=spectral.zero_spectrum(),
        spectral=spectral,
        factors=[],
        resonances=resonances,
    )


def check_growth_condition(rhs, n: int, m: int, radius: float, samples: int = 2000, seed: int = 0):
    """Sampled check of the outward-pointing condition x . f(x, y) > 0 on the
    shell |x| in [R, 2R], |y_j| <= |x|.  Heuristic evidence, not a proof.

    ``rhs(args)`` evaluates the right-hand side on a flat list of m*n
    floats (current state first, then the delayed blocks).
    """
    import random

    rng = random.Random(seed)
    worst = None
    positive = 0
    for _ in range(samples):
        scale = radius * (1 + rng.random())
        x = [rng.uniform(-1, 1) for _ in range(n)]
        top = max(abs(v) for v in x) or 1.0
        x = [v * scale / top for v in x]
        args = list(x)
        for _ in range(m - 1):
            y = [rng.uniform(-scale, scale) for _ in range(n)]
            args.extend(y)
        val = rhs(args)
        dot = sum(a * b for a, b in zip(x, val))
        if worst is None or dot < worst:
            worst = dot
        if dot > 0:
            positive += 1
    return {
        "samples": samples,
        "positive": positive,
        "min_dot": worst,
        "all_positive": positive == samples,
        "note": "sampled evidence only",
    }
