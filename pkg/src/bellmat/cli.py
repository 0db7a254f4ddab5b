"""Command-line entry point: ``bellmat <subcommand> ...``.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage or input
error, 3 unsupported family kind.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction

import numpy as np

from . import bell, evolution, ncalg, spectral, yangbaxter
from .bell import BellFamily, UnsupportedKindError
from .linalg import Operator
from .report import VerificationReport, all_passed, timed
from .scalar import LAMBDA_MINUS, LAMBDA_PLUS, SQRT2

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument helpers --------------------------------------------------------


def parse_phases(text: str | None) -> dict:
    """'sym' -> symbolic, 'z8:1,3' -> exact zeta8 powers, '0.3,0.7' -> numeric angles."""
    if text is None or text == "sym":
        return {}
    try:
        if text.startswith("z8:"):
            return {"zeta_powers": [int(k) for k in text[3:].split(",")]}
        return {"phases": [float(x) for x in text.split(",")]}
    except ValueError as exc:
        raise UsageError(f"cannot parse phases {text!r}") from exc


def parse_q(text: str, j2: int) -> dict:
    if text == "1":
        return {"zeta_powers": [0] * ((j2 + 1) // 2)}
    return parse_phases(text)


def family_from(args: argparse.Namespace, kind: str | None = None) -> BellFamily:
    kind = kind or getattr(args, "kind", None) or ("plain" if getattr(args, "n", None) else "jj")
    if kind == "plain":
        if args.n is None:
            raise UsageError("--n is required for the plain family")
        return BellFamily.plain(args.n)
    if kind == "jj":
        j = args.j or "1/2"
        return BellFamily.jj(j, **parse_phases(getattr(args, "phases", None)))
    return BellFamily.of_kind(kind)


def resolve_seed(args: argparse.Namespace) -> int:
    env = os.environ.get("BELLMAT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"BELLMAT_SEED={env!r} is not an integer") from exc
    return args.seed


# -- text rendering ----------------------------------------------------------


def render_matrix(op: Operator) -> str:
    """Aligned rows; a common 1/√2 is factored out when that shortens the entries."""
    def cells(o: Operator) -> list[list[str]]:
        return [[str(o[r, c]) for c in range(o.dim)] for r in range(o.dim)]

    plain = cells(op)
    scaled = cells(op.scale(SQRT2))
    prefix = ""
    grid = plain
    if sum(map(len, sum(scaled, []))) < sum(map(len, sum(plain, []))):
        grid, prefix = scaled, "1/√2 ×\n"
    width = max(len(s) for row in grid for s in row)
    return prefix + "\n".join("  ".join(s.rjust(width) for s in row) for row in grid)


def operator_json(op: Operator, family: BellFamily) -> dict:
    if family.kind == "jj" and family.qtable.angles is not None:
        return op.to_json(family.assignment, numeric=True)
    return op.to_json()


def emit(lines: list[str], out=None) -> None:
    out = out or sys.stdout
    out.write("\n".join(lines) + ("\n" if lines else ""))


# -- emit-* ------------------------------------------------------------------


def cmd_emit_bell(args: argparse.Namespace) -> int:
    family = family_from(args)
    B = family.B
    if args.format == "text":
        emit([render_matrix(B)])
    else:
        emit([json.dumps(operator_json(B, family), sort_keys=True)])
    return EXIT_OK


def cmd_emit_ghz(args: argparse.Namespace) -> int:
    states = bell.ghz_generate(args.n)
    if not 0 <= args.k < len(states):
        raise UsageError(f"--k must lie in 0..{len(states) - 1}")
    psi = states[args.k]
    if args.format == "text":
        lines = [
            f"|{','.join(bell.format_half(x) for x in psi.space.labels(i))}>  {a}"
            for i, a in sorted(psi.amplitudes.items())
        ]
        emit(lines)
    else:
        emit([json.dumps(psi.to_json(), sort_keys=True)])
    return EXIT_OK


def cmd_emit_diag(args: argparse.Namespace) -> int:
    family = family_from(args, "jj")
    diag = spectral.build_diagonalizer(family)
    conj = diag.conjugate(family.B)
    parts = {"N": diag.n_matrix, "D": diag.d_matrix, "diagonal": conj}
    if args.format == "text":
        emit([f"{k}:\n{render_matrix(v)}" for k, v in parts.items()])
    else:
        emit([json.dumps({k: operator_json(v, family) for k, v in parts.items()}, sort_keys=True)])
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def _numeric_report(name: str, params: dict, fn: Callable[[], float], tol: float) -> VerificationReport:
    rep = VerificationReport(name, params)
    with timed(rep):
        res = fn()
        rep.details = {"max_residual": float(f"{res:.3e}"), "tol": tol}
        rep.passed = res < tol
    return rep


def suite_braid(family: BellFamily, args: argparse.Namespace, seed: int) -> list[VerificationReport]:
    params = family.describe()
    if args.variant == "epsilon-bell":
        return [yangbaxter.check_braid(bell.epsilon_variant(family), "braid-epsilon-variant", params)]
    reps = [yangbaxter.check_braid(family.B, "braid", params)]
    if family.space.dim <= 16:
        reps.append(_numeric_report("braid-numeric", params, lambda: yangbaxter.braid_oracle(family.B, 5, seed), args.tol))
    return reps


def suite_malg(family: BellFamily, args: argparse.Namespace, seed: int) -> list[VerificationReport]:
    reps = [yangbaxter.check_M_algebra(family)]
    if family.kind == "jj":
        reps.append(bell.check_q_constraints(family.qtable))
    return reps


def suite_qybe(family: BellFamily, args: argparse.Namespace, seed: int) -> list[VerificationReport]:
    params = family.describe()
    R = yangbaxter.yang_baxterize(family.B, LAMBDA_PLUS, LAMBDA_MINUS)
    return [
        yangbaxter.check_qybe(R, params),
        yangbaxter.check_normalization(R),
        yangbaxter.check_braid_limit(R),
        _numeric_report("qybe-numeric", params, lambda: yangbaxter.qybe_oracle(R, 5, seed), args.tol),
    ]


def suite_mybe(family: BellFamily, args: argparse.Namespace, seed: int) -> list[VerificationReport]:
    params = family.describe()
    reps = [yangbaxter.check_modified_ybe(family), yangbaxter.check_reparameterization(Fraction(1, 3), Fraction(1, 2))]
    rng = np.random.default_rng(seed)
    symbols = sorted(family.qtable.units) if family.kind == "jj" else []

    def worst() -> float:
        res = 0.0
        for _ in range(5):
            t1, t2 = rng.uniform(-0.7, 0.7, size=2)
            angles = family.assignment or {s: float(rng.uniform(-math.pi, math.pi)) for s in symbols}
            res = max(res, yangbaxter.trig_residual(family, t1, t2, angles))
            res = max(res, yangbaxter.trig_residual(family, t1, t2, angles, hyperbolic=True))
        return res

    reps.append(_numeric_report("trig-numeric", params, worst, max(args.tol, 1e-10)))
    return reps


def suite_virtual(family: BellFamily, args: argparse.Namespace, seed: int) -> list[VerificationReport]:
    return list(yangbaxter.check_virtual(family))


def suite_spectral(family: BellFamily, args: argparse.Namespace, seed: int) -> list[VerificationReport]:
    reps = [
        spectral.characteristic_check(family.B),
        spectral.projectors(family.M).check(),
        spectral.check_spectral_reconstruction(family),
        spectral.check_projector_baxterization(family),
    ]
    if family.kind == "jj":
        diag = spectral.build_diagonalizer(family)
        expected = spectral.canonical_diagonal(family.space.dim)
        reps.append(spectral.check_diagonalizer(diag, family.B, family.M, expected, params=family.describe()))
    return reps


SUITES: dict[str, Callable[[BellFamily, argparse.Namespace, int], list[VerificationReport]]] = {
    "braid": suite_braid,
    "malg": suite_malg,
    "qybe": suite_qybe,
    "mybe": suite_mybe,
    "virtual": suite_virtual,
    "spectral": suite_spectral,
}


def cmd_verify(args: argparse.Namespace) -> int:
    family = family_from(args)
    seed = resolve_seed(args)
    names = list(SUITES) if args.check == "all" else [args.check]
    reports: list[VerificationReport] = []
    for name in names:
        reports.extend(SUITES[name](family, args, seed))
    if args.format == "text":
        emit([r.to_text(args.timing) for r in reports])
    else:
        emit([r.to_line(args.timing) for r in reports])
    return EXIT_OK if all_passed(reports) else EXIT_FAIL


# -- evolve ------------------------------------------------------------------


def cmd_evolve(args: argparse.Namespace) -> int:
    family = family_from(args, "jj")
    if family.kind == "jj" and family.qtable.angles is None and family.qtable.symbolic:
        raise UsageError("evolve needs numeric or z8 phases")
    spec = evolution.EvolutionSpec(family, scale=args.scale)
    key, _, value = args.state.partition("=")
    if key != "k" or not value.isdigit():
        raise UsageError("--state takes the form k=<basis index>")
    k = int(value)
    dim = family.space.dim
    if k >= dim:
        raise UsageError(f"basis index {k} out of range 0..{dim - 1}")
    if args.steps < 1:
        raise UsageError("--steps must be positive")
    phi0 = np.zeros(dim, dtype=complex)
    phi0[k] = 1.0
    thetas = np.linspace(args.theta0, args.theta1, args.steps + 1)
    traj = evolution.evolve(spec, phi0, thetas)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            evolution.write_trajectory_csv(traj, fh)
    else:
        evolution.write_trajectory_csv(traj, sys.stdout)
    return EXIT_OK


# -- relations ---------------------------------------------------------------


def _relations_output(rs: ncalg.RelationSet, family: BellFamily | None, fmt: str) -> None:
    numeric = family is not None and family.kind == "jj" and family.qtable.angles is not None
    if fmt == "text":
        lines = [rs.to_text()]
        if numeric:
            # coefficients stay symbolic in text; the angles follow
            angles = {bell.format_half(k): v for k, v in sorted(family.assignment.items())}
            lines.append(f"# angles {json.dumps(angles)}")
        emit(lines)
        return
    data = rs.to_json()
    if numeric:
        a = family.assignment
        for entry, rel in zip(data, rs.relations):
            entry["coeffs"] = [
                {"re": c.evaluate(a).real, "im": c.evaluate(a).imag} for _, c in rel.sorted_terms()
            ]
    emit([json.dumps(data, sort_keys=True)])


def cmd_relations(args: argparse.Namespace) -> int:
    if args.which == "compare":
        if not (args.left and args.right):
            raise UsageError("compare needs --left and --right")
        with open(args.left) as fh:
            left = ncalg.RelationSet.from_json(json.load(fh))
        with open(args.right) as fh:
            right = ncalg.RelationSet.from_json(json.load(fh))
        rep = ncalg.span_equal(left, right, numeric_points=2, seed=resolve_seed(args))
        emit([rep.to_text() if args.format == "text" else rep.to_line()])
        return EXIT_OK if rep.passed else EXIT_FAIL
    if args.which == "ncgeo" and args.n is not None:
        family = BellFamily.plain(args.n)
    else:
        j2 = bell.as_j2(args.j or "1/2")
        family = BellFamily.jj(args.j or "1/2", **parse_q(args.q, j2))
    if args.which == "rtt":
        rs = ncalg.extract_rtt(family)
    elif args.which == "rll":
        rs = ncalg.extract_rll(family, include_quotient=args.quotient)
    elif args.which == "ttilde":
        rs = ncalg.ttilde_relations(family)
    else:
        rs = ncalg.ncgeo_relations(family, Fraction(args.mu))
    _relations_output(rs, family, args.format)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bellmat", description="Generalized Bell matrices and Yang-Baxter identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp: argparse.ArgumentParser, choices=("json", "text")) -> None:
        sp.add_argument("--format", choices=choices, default=choices[0])

    def family_args(sp: argparse.ArgumentParser) -> None:
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--j", help="spin J as a fraction, e.g. 3/2")
        g.add_argument("--n", type=int, help="qubit count for the undeformed family")
        sp.add_argument("--phases", default="sym", help="sym | comma-separated angles | z8:k1,k2,...")

    sp = sub.add_parser("emit-bell", help="print the Bell matrix")
    sp.add_argument("--kind", choices=("plain", "jj", "j1j2"), default=None)
    family_args(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_emit_bell)

    sp = sub.add_parser("emit-ghz", help="print one GHZ state (column k of B)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_emit_ghz)

    sp = sub.add_parser("emit-diag", help="print N, D and D B D^† for the canonical choice of f")
    sp.add_argument("--j", default="1/2")
    sp.add_argument("--phases", default="sym")
    fmt(sp)
    sp.set_defaults(func=cmd_emit_diag, n=None)

    sp = sub.add_parser("verify", help="run identity checks")
    sp.add_argument("check", choices=(*SUITES, "all"))
    family_args(sp)
    sp.add_argument("--variant", choices=("bell", "epsilon-bell"), default="bell")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--timing", action="store_true", help="include wall-clock times (output no longer reproducible)")
    fmt(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("evolve", help="write a B(theta) trajectory as CSV")
    sp.add_argument("--j", default="1/2")
    sp.add_argument("--phases", default="0")
    sp.add_argument("--theta0", type=float, default=0.0)
    sp.add_argument("--theta1", type=float, default=math.pi / 4)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--state", default="k=0")
    sp.add_argument("--scale", type=float, default=1.0, help="Hamiltonian prefactor; 0.5 for the H = -(i/2)M convention")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_evolve, n=None)

    sp = sub.add_parser("relations", help="extract or compare quadratic relation sets")
    sp.add_argument("which", choices=("rtt", "rll", "ncgeo", "ttilde", "compare"))
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--j")
    g.add_argument("--n", type=int, help="qubit count (ncgeo only)")
    sp.add_argument("--q", default="sym", help="sym | 1 | comma-separated angles | z8:k1,...")
    sp.add_argument("--mu", default="2")
    sp.add_argument("--quotient", action="store_true", help="add L+⊗L- = L-⊗L+ to the rll set")
    sp.add_argument("--left")
    sp.add_argument("--right")
    sp.add_argument("--seed", type=int, default=0)
    fmt(sp)
    sp.set_defaults(func=cmd_relations)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UnsupportedKindError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (UsageError, ncalg.MixedFamiliesError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
