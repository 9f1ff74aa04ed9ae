"""Command-line entry point and pipeline orchestration.

Pipeline: character data -> spectral table -> orbit-type enumeration ->
basic degrees -> Burnside product -> existence report.  Reports are
byte-stable across runs: every collection is canonically ordered and no
timestamps are emitted.

Exit codes: 0 success; 2 degenerate spectrum (a zero block eigenvalue,
rerun with --s); 3 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import pi
from pathlib import Path

from . import __version__
from .burnside import mult_classes
from .basicdeg import basic_degree
from .chartab import (
    CharacterError,
    SignedGroup,
    bundled_table,
    isotypic_multiplicities,
    permutation_character,
    table_from_json,
)
from .ddedeg import (
    DegreeReport,
    LinearizationData,
    SpectralTable,
    assemble_omega,
    default_k_max,
    theorem_conclusions_resonant,
)
from .o2gamma import GammaContext, weyl_order
from .permgroup import Group, parse_cycles, subgroup_lattice

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_INVALID = 3

NAME_CAVEAT = (
    "naming: decorated subgroup labels are bindings of this engine; "
    "structural fingerprints (H, |Z|, |L|, |R|, |K|, Weyl order) are authoritative"
)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


def load_config(path_or_dict) -> dict:
    if isinstance(path_or_dict, dict):
        data = path_or_dict
    else:
        with open(path_or_dict) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"malformed JSON: {exc}") from exc
    for key in ("group", "delays", "linearization"):
        if key not in data:
            raise ConfigError(f"missing config key: {key}")
    if not isinstance(data["delays"], int) or data["delays"] < 1:
        raise ConfigError("delays must be a positive integer")
    return data


def _build_group_and_table(config):
    spec = config["group"]
    if isinstance(spec, str):
        table = bundled_table(spec)
        return table.group, table
    if isinstance(spec, dict) and "generators" in spec:
        group = Group.make(spec["generators"])
        tab_payload = config.get("character_table")
        if tab_payload is None:
            raise ConfigError("custom groups need an explicit character_table")
        table = table_from_json(group, tab_payload)
        return group, table
    raise ConfigError("group must be a preset name or {'generators': [...]}")


def _representation_action(config, group):
    rep = config.get("representation", "natural")
    if rep == "natural":
        return lambda g: g
    if isinstance(rep, dict) and "images" in rep:
        images = [parse_cycles(w) if isinstance(w, str) else tuple(w) for w in rep["images"]]
        word_map = generator_word_map(group)
        gens = list(group.generators)
        deg = max(len(p) for p in images)
        images = [p + tuple(range(len(p), deg)) for p in images]

        def act(g):
            out = tuple(range(deg))
            for gi in word_map[g]:
                out = tuple(images[gi][x] for x in out)
            return out

        return act
    raise ConfigError("representation must be 'natural' or {'images': [...]}")


def generator_word_map(group) -> dict:
    """Element -> generator index word (left to right application order)."""
    words = {group.identity: ()}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(group.generators):
                y = group.mul(g, x)
                if y not in words:
                    words[y] = (gi,) + words[x]
                    nxt.append(y)
        frontier = nxt
    return words


def _parse_value(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    return float(v)


def _build_linearization(config, table, decomposition) -> LinearizationData:
    lin = config["linearization"]
    m = config["delays"]
    if "matrices" in lin:
        mats = [[[_parse_value(v) for v in row] for row in mat] for mat in lin["matrices"]]
        if len(mats) != m:
            raise ConfigError(f"expected {m} matrices, got {len(mats)}")
        return LinearizationData.from_matrices(table, decomposition, mats)
    if "mu" in lin:
        mu = {}
        for key, row in lin["mu"].items():
            l = int(key) - 1
            if not 0 <= l < table.n_irreps:
                raise ConfigError(f"mu component {key} out of range")
            mu[l] = tuple(_parse_value(v) for v in row)
        exact = all(
            isinstance(v, Fraction) for row in mu.values() for v in row
        )
        return LinearizationData(m=m, mu=mu, exact=exact)
    raise ConfigError("linearization needs 'matrices' or 'mu'")


D6_NAMED_SUBGROUPS = {
    # conventional decorated labels for the hexagon example, bound to
    # explicit generators (gamma word, antipodal sign)
    "Z2-": [("(1 4)(2 5)(3 6)", -1)],
    "~D1": [("(1 4)(2 5)(3 6)", 1)],
    "D2d": [("(2 6)(3 5)", 1), ("(1 4)(2 5)(3 6)", -1)],
    "~D2d": [("(1 2)(3 6)(4 5)", 1), ("(1 4)(2 5)(3 6)", -1)],
    "D2z": [("(1 4)(2 5)(3 6)", 1), ("(2 6)(3 5)", -1)],
    "~D2z": [("(1 4)(2 5)(3 6)", 1), ("(1 2)(3 6)(4 5)", -1)],
    "D6z": [("(1 2 3 4 5 6)", 1), ("(2 6)(3 5)", 1)],
}


def _bind_d6_names(ctx: GammaContext) -> None:
    signed = getattr(ctx, "signed", None)
    if signed is None or signed.gamma.order != 12 or signed.gamma.degree != 6:
        return
    named = {}
    for name, gens in D6_NAMED_SUBGROUPS.items():
        idxs = []
        for word, eps in gens:
            gamma_perm = parse_cycles(word, 6)
            target = None
            for i, elem in enumerate(ctx.elems):
                gp, e = signed.parts(elem)
                if gp == gamma_perm and e == eps:
                    target = i
                    break
            if target is None:
                return
            idxs.append(target)
        named[name] = idxs
    ctx.bind_display_names(named)


# ---------------------------------------------------------------------------
# analysis pipeline


@dataclass
class AnalysisResult:
    config: dict
    table: object
    ctx: GammaContext
    decomposition: object
    lin: LinearizationData
    spectral: SpectralTable
    report: DegreeReport | None
    exit_code: int
    message: str = ""

    def report_json(self) -> dict:
        spectral = self.spectral
        out = {
            "engine": {"name": "eqdeg", "version": __version__},
            "group": self.config["group"] if isinstance(self.config["group"], str) else "custom",
            "delays": self.lin.m,
            "k_max": spectral.k_max,
            "components": [l + 1 for l in spectral.components],
            "multiplicities": list(self.decomposition.multiplicities),
            "mu": {
                str(l + 1): [str(v) for v in row] for l, row in sorted(self.lin.mu.items())
            },
            "spectrum": {
                "signs": spectral.sign_grid()[: min(spectral.k_max, 10) + 1],
                "negative_blocks": [
                    {"mode": k, "component": l + 1, "multiplicity": m}
                    for (k, l, m) in spectral.negative_factors()
                ],
                "degenerate": [[k, l + 1] for (k, l) in spectral.degenerate],
                "resonances": sorted(self.report.resonances) if self.report else [],
            },
            "omega": self.report.omega.to_jsonable()
            if self.report and self.report.omega is not None
            else None,
            "conclusions": [c.jsonable() for c in self.report.conclusions]
            if self.report
            else [],
            "zero_spectrum": spectral.zero_spectrum(),
            "exit_code": self.exit_code,
            "note": NAME_CAVEAT,
        }
        return out

    def report_text(self) -> str:
        lines = []
        spectral = self.spectral
        group_name = self.config["group"] if isinstance(self.config["group"], str) else "custom"
        lines.append(f"equivariant degree analysis ({group_name}, m={self.lin.m})")
        lines.append("")
        lines.append("isotypic multiplicities: " + ", ".join(
            f"V{l + 1}:{mult}"
            for l, mult in enumerate(self.decomposition.multiplicities)
            if mult
        ))
        lines.append("")
        lines.append("block eigenvalue signs (rows k = 0..%d, columns l = %s):" % (
            min(spectral.k_max, 10),
            ", ".join(str(l + 1) for l in spectral.components),
        ))
        for k, row in enumerate(spectral.sign_grid()[: min(spectral.k_max, 10) + 1]):
            lines.append(f"  k={k:<2d}  " + "  ".join(row))
        lines.append("")
        if spectral.zero_spectrum():
            lines.append("DEGENERATE: zero block eigenvalue at " + ", ".join(
                f"(k={k}, l={l + 1})" for (k, l) in spectral.degenerate
            ))
        if self.report is None:
            lines.append(self.message)
            return "\n".join(lines) + "\n"
        if self.report.omega is not None:
            lines.append("omega = (G) - deg:")
            lines.append("  " + self.report.omega.render())
            lines.append("")
        lines.append(f"guaranteed non-constant solution classes ({len(self.report.conclusions)}):")
        for c in self.report.conclusions:
            coeff = "parity-route" if c.coefficient is None else f"coeff {c.coefficient:+d}"
            lines.append(
                f"  mode {c.mode} block V{c.component + 1}: ({c.cls.name()})  "
                f"[{coeff}, x_o={c.x_o}, |W|={weyl_order(c.cls)}]"
            )
        lines.append("")
        lines.append(NAME_CAVEAT)
        return "\n".join(lines) + "\n"


def run_analyze(config, k_max=None, s=None, tol=None) -> AnalysisResult:
    group, table = _build_group_and_table(config)
    action = _representation_action(config, group)
    chi = permutation_character(table, action)
    decomposition = isotypic_multiplicities(chi, table)
    for l, mult in enumerate(decomposition.multiplicities):
        if mult:
            if not table.real_type[l]:
                raise ConfigError(
                    f"component {l + 1} is not of real type; unsupported"
                )
    lin = _build_linearization(config, table, decomposition)
    options = config.get("options", {})
    k_max = k_max or options.get("k_max") or default_k_max(lin)
    tol = tol or float(options.get("tol", 1e-9))
    spectral = SpectralTable(lin, decomposition, k_max=k_max, tol=tol).build()
    signed = SignedGroup(table)
    ctx = GammaContext.from_signed_group(signed)
    _bind_d6_names(ctx)
    s = s or options.get("s")
    if spectral.zero_spectrum() and not s:
        return AnalysisResult(
            config, table, ctx, decomposition, lin, spectral, None,
            EXIT_DEGENERATE,
            "degenerate spectrum: pass --s to use the resonance-avoiding route",
        )
    if s:
        try:
            report = theorem_conclusions_resonant(ctx, spectral, int(s))
        except ValueError as exc:
            return AnalysisResult(
                config, table, ctx, decomposition, lin, spectral, None,
                EXIT_INVALID, str(exc),
            )
    else:
        report = assemble_omega(ctx, spectral)
    return AnalysisResult(
        config, table, ctx, decomposition, lin, spectral, report, EXIT_OK
    )


REPORT_SCHEMA = {
    "engine": dict,
    "group": str,
    "delays": int,
    "k_max": int,
    "components": list,
    "multiplicities": list,
    "mu": dict,
    "spectrum": dict,
    "conclusions": list,
    "zero_spectrum": bool,
    "exit_code": int,
}


def validate_report(payload: dict) -> list[str]:
    errors = []
    for key, typ in REPORT_SCHEMA.items():
        if key not in payload:
            errors.append(f"missing key {key}")
        elif not isinstance(payload[key], typ):
            errors.append(f"key {key} has type {type(payload[key]).__name__}")
    if "spectrum" in payload:
        for sub in ("signs", "negative_blocks", "degenerate"):
            if sub not in payload["spectrum"]:
                errors.append(f"missing spectrum.{sub}")
    for conc in payload.get("conclusions", []):
        for key in ("class", "fingerprint", "mode", "coefficient", "x_o"):
            if key not in conc:
                errors.append(f"conclusion missing {key}")
    return errors


# ---------------------------------------------------------------------------
# verification subcommand


def run_verify(config) -> dict:
    import numpy as np

    from .verifier import (
        FourierSolution,
        class_matches_symmetries,
        isotropy_of_trajectory,
        newton_solve,
        SystemSpec,
        apriori_check,
    )
    from .ddedeg import check_growth_condition
    from .o2gamma import maximal_orbit_types

    system = config.get("system")
    if not system:
        raise ConfigError("verification needs a 'system' block")
    result = run_analyze(config)
    if result.exit_code != EXIT_OK:
        raise ConfigError("verification requires a nondegenerate analysis")
    lin_mats = [
        [[float(_parse_value(v)) for v in row] for row in mat]
        for mat in config["linearization"]["matrices"]
    ]
    n = result.table.group.degree
    cubic = float(_parse_value(system.get("cubic", "1/2")))
    terms = [[(cubic, ((c, 3),))] for c in range(n)]
    spec = SystemSpec(n=n, m=result.lin.m, period=2 * pi, linear=lin_mats, terms=terms)
    spec.check_reversible()
    spec.check_odd()
    growth = check_growth_condition(
        lambda args: list(spec.rhs(np.asarray(args)[None, :])[0]),
        n=n,
        m=result.lin.m,
        radius=float(system.get("radius", 4.0)),
        samples=int(system.get("growth_samples", 500)),
    )
    K = int(system.get("fourier_modes", 32))
    seed_l = int(system.get("seed_component", 5)) - 1
    amp = float(system.get("seed_amplitude", 4.0))
    basis = _seed_vector(result.table, seed_l)
    coeffs = np.zeros((2 * K + 1, n))
    coeffs[1] = amp * basis
    sol, rep = newton_solve(spec, FourierSolution(K, coeffs), tol=1e-12, max_iter=100)
    out = {
        "growth_check": growth,
        "converged": rep.converged,
        "iterations": rep.iterations,
        "residual_sup": rep.residual_sup,
        "non_constant": bool(not sol.is_constant()),
        "matched_classes": [],
        "apriori": None,
    }
    if rep.converged and not sol.is_constant():
        ctx = result.ctx
        gamma = result.table.group
        perms = sorted({tuple(g) for g in gamma.elements})

        def perm_of_gamma_index(gidx):
            gp, eps = ctx.signed.parts(ctx.elems[gidx])
            return tuple(gp), eps

        syms = isotropy_of_trajectory(sol, perms, tol=1e-6, theta_denominator=12)
        guaranteed = []
        for l in result.spectral.components:
            guaranteed.extend(maximal_orbit_types(ctx, 1, l))
        out["matched_classes"] = sorted(
            cls.name()
            for cls in guaranteed
            if class_matches_symmetries(cls, syms, perm_of_gamma_index)
        )
        out["detected_symmetries"] = len(syms)
        out["apriori"] = apriori_check(spec, sol, radius=float(system.get("radius", 4.0)))
    else:
        out["note"] = "Newton did not produce a non-constant orbit; report retained"
    return out


def _seed_vector(table, l):
    import numpy as np

    group = table.group
    n = group.degree
    dim = table.dims()[l]
    proj = np.zeros((n, n))
    for g in group.elements:
        chi = float(table.rows[l][table.class_of(g)].as_fraction())
        mat = np.zeros((n, n))
        for col in range(n):
            mat[g[col], col] = 1.0
        proj += (dim / group.order) * chi * mat
    for col in range(n):
        v = proj[:, col]
        if np.linalg.norm(v) > 1e-9:
            return v / np.max(np.abs(v))
    raise ConfigError(f"component {l + 1} absent from the representation")


# ---------------------------------------------------------------------------
# CLI


def bundled_example_path() -> Path:
    return Path(__file__).parent / "data" / "d6_example.json"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="eqdeg",
        description="Equivariant degree analysis of reversible coupled delay networks",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="reserved; all stages are deterministic and sequential")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="full pipeline on a JSON config")
    p_an.add_argument("config")
    p_an.add_argument("--kmax", type=int, default=None)
    p_an.add_argument("--s", type=int, default=None)
    p_an.add_argument("--tol", type=float, default=None)
    p_an.add_argument("--json-only", action="store_true")
    p_an.add_argument("--out", default=".")

    p_lat = sub.add_parser("lattice", help="subgroup classes of a preset group")
    p_lat.add_argument("group")

    p_bur = sub.add_parser("burnside", help="Burnside multiplication table")
    p_bur.add_argument("group")

    p_bd = sub.add_parser("basic-deg", help="basic degree of one block")
    p_bd.add_argument("group")
    p_bd.add_argument("k", type=int)
    p_bd.add_argument("l", type=int, help="character row, 1-based")

    p_sp = sub.add_parser("spectrum", help="block eigenvalue table only")
    p_sp.add_argument("config")
    p_sp.add_argument("--kmax", type=int, default=None)

    p_ver = sub.add_parser("verify", help="numerical corroboration run")
    p_ver.add_argument("config")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigError, CharacterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def _dispatch(args) -> int:
    if args.command == "analyze":
        config = load_config(args.config)
        result = run_analyze(config, k_max=args.kmax, s=args.s, tol=args.tol)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = result.report_json()
        errors = validate_report(payload)
        if errors:
            raise ConfigError("report failed schema validation: " + "; ".join(errors))
        (out_dir / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        if not args.json_only:
            (out_dir / "report.txt").write_text(result.report_text())
            print(result.report_text(), end="")
        if result.exit_code != EXIT_OK:
            print(f"note: {result.message}", file=sys.stderr)
        return result.exit_code

    if args.command == "lattice":
        lat = subgroup_lattice(Group.from_name(args.group))
        print(f"{len(lat.classes)} subgroup conjugacy classes "
              f"({sum(c.class_size for c in lat.classes)} subgroups)")
        for i, cls in enumerate(lat.classes):
            print(
                f"  [{i:2d}] {cls.name:<8} order {cls.order:<4d} "
                f"class size {cls.class_size:<3d} |W| = {cls.weyl_order}"
            )
        return EXIT_OK

    if args.command == "burnside":
        lat = subgroup_lattice(Group.from_name(args.group))
        names = [c.name for c in lat.classes]
        print("generators: " + ", ".join(f"({n})" for n in names))
        for i in range(len(lat.classes)):
            for j in range(i, len(lat.classes)):
                prod = mult_classes(lat, i, j)
                print(f"  ({names[i]})*({names[j]}) = {prod.render()}")
        return EXIT_OK

    if args.command == "basic-deg":
        table = bundled_table(args.group)
        ctx = GammaContext.from_signed_group(SignedGroup(table))
        _bind_d6_names(ctx)
        if not 1 <= args.l <= table.n_irreps:
            raise ConfigError(f"l must be in 1..{table.n_irreps}")
        deg = basic_degree(ctx, args.k, args.l - 1)
        print(f"deg(k={args.k}, l={args.l}) = {deg.render()}")
        return EXIT_OK

    if args.command == "spectrum":
        config = load_config(args.config)
        result = run_analyze_spectrum_only(config, args.kmax)
        print(result)
        return EXIT_OK

    if args.command == "verify":
        config = load_config(args.config)
        out = run_verify(config)
        print(json.dumps(out, indent=2, sort_keys=True, default=str))
        return EXIT_OK

    raise ConfigError(f"unknown command {args.command}")


def run_analyze_spectrum_only(config, k_max=None) -> str:
    group, table = _build_group_and_table(config)
    action = _representation_action(config, group)
    chi = permutation_character(table, action)
    decomposition = isotypic_multiplicities(chi, table)
    lin = _build_linearization(config, table, decomposition)
    k_max = k_max or config.get("options", {}).get("k_max") or default_k_max(lin)
    spectral = SpectralTable(lin, decomposition, k_max=k_max).build()
    lines = ["block eigenvalue signs (columns l = %s):" % ", ".join(
        str(l + 1) for l in spectral.components
    )]
    for k, row in enumerate(spectral.sign_grid()):
        lines.append(f"  k={k:<2d}  " + "  ".join(row))
    return "\n".join(lines)


if __name__ == "__main__":
    sys.exit(main())
