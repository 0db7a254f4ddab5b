"""Braid relation, QYBE and related identities, decided exactly.

Spectral parameters are formal commuting variables; operator-valued
polynomials are compared coefficient by coefficient, so every check here is
a finite exact computation.  Each check also has a dense floating-point
oracle that rebuilds the identity with numpy Kronecker products.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from fractions import Fraction

import numpy as np

from .bell import BellFamily, check_q_constraints
from .halfint import format_half
from .linalg import IndexSpace, Operator, lift, pair_factor, permutation
from .report import VerificationReport, timed
from .scalar import PhaseScalar

Mono = tuple[int, ...]


class ParametricOperator:
    """Polynomial in commuting variables with Operator coefficients."""

    def __init__(self, space: IndexSpace, variables: tuple[str, ...], coeffs: Mapping[Mono, Operator]) -> None:
        self.space = space
        self.variables = variables
        self.coeffs: dict[Mono, Operator] = {m: op for m, op in coeffs.items() if not op.is_zero()}

    @classmethod
    def linear(cls, constant: Operator, slope: Operator, var: str = "x") -> ParametricOperator:
        return cls(constant.space, (var,), {(0,): constant, (1,): slope})

    @classmethod
    def constant(cls, op: Operator, variables: tuple[str, ...]) -> ParametricOperator:
        return cls(op.space, variables, {(0,) * len(variables): op})

    def coefficient(self, mono: Mono) -> Operator:
        return self.coeffs.get(tuple(mono), Operator.zero(self.space))

    def degree(self) -> int:
        return max((sum(m) for m in self.coeffs), default=0)

    def _compatible(self, other: ParametricOperator) -> None:
        if self.variables != other.variables:
            raise ValueError(f"variables differ: {self.variables} vs {other.variables}")

    def __add__(self, other: ParametricOperator) -> ParametricOperator:
        self._compatible(other)
        out = dict(self.coeffs)
        for m, op in other.coeffs.items():
            out[m] = out[m] + op if m in out else op
        return ParametricOperator(self.space, self.variables, out)

    def __neg__(self) -> ParametricOperator:
        return ParametricOperator(self.space, self.variables, {m: -op for m, op in self.coeffs.items()})

    def __sub__(self, other: ParametricOperator) -> ParametricOperator:
        return self + (-other)

    def __matmul__(self, other: ParametricOperator) -> ParametricOperator:
        self._compatible(other)
        out: dict[Mono, Operator] = {}
        for m1, a in self.coeffs.items():
            for m2, b in other.coeffs.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                p = a @ b
                out[m] = out[m] + p if m in out else p
        return ParametricOperator(self.space, self.variables, out)

    def scale(self, s: PhaseScalar) -> ParametricOperator:
        return ParametricOperator(self.space, self.variables, {m: op.scale(s) for m, op in self.coeffs.items()})

    def dagger(self) -> ParametricOperator:
        """Adjoint for real values of the variables."""
        return ParametricOperator(self.space, self.variables, {m: op.dagger() for m, op in self.coeffs.items()})

    def lift(self, i: int, n: int) -> ParametricOperator:
        coeffs = {m: lift(op, i, n) for m, op in self.coeffs.items()}
        space = IndexSpace.spins(pair_factor(Operator.zero(self.space)), n)
        return ParametricOperator(space, self.variables, coeffs)

    def at_zero(self) -> Operator:
        return self.coefficient((0,) * len(self.variables))

    def substitute(self, variables: tuple[str, ...], image: Mono) -> ParametricOperator:
        """Replace the single variable t by the monomial ``image`` in new variables."""
        if len(self.variables) != 1:
            raise ValueError("substitute expects a univariate polynomial")
        out = {}
        for (k,), op in self.coeffs.items():
            out[tuple(k * e for e in image)] = op
        return ParametricOperator(self.space, variables, out)

    def evaluate(self, values: Mapping[str, float], assignment: Mapping[int, float] | None = None) -> np.ndarray:
        out = np.zeros((self.space.dim, self.space.dim), dtype=complex)
        for m, op in self.coeffs.items():
            w = 1.0
            for var, e in zip(self.variables, m):
                w *= values[var] ** e
            out += w * op.to_numpy(assignment)
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParametricOperator):
            return NotImplemented
        return self.variables == other.variables and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]


# -- residual witnesses ---------------------------------------------------


def operator_witness(residual: Operator, mono: Mono | None = None, variables=()) -> dict | None:
    """Smallest failing (row, col) entry of a residual operator, or None."""
    for r, c, v in residual.entries():
        w = {
            "row": r,
            "col": c,
            "row_labels": [format_half(x) for x in residual.space.labels(r)],
            "col_labels": [format_half(x) for x in residual.space.labels(c)],
            "residual": str(v),
        }
        if mono is not None:
            w["monomial"] = dict(zip(variables, mono))
        return w
    return None


def parametric_witness(residual: ParametricOperator) -> dict | None:
    best = None
    for m, op in residual.coeffs.items():
        for r, c, _ in op.entries():
            key = (r, c, m)
            if best is None or key < best:
                best = key
            break
    if best is None:
        return None
    r, c, m = best
    return operator_witness(
        Operator.from_entries(residual.space, [(r, c, residual.coeffs[m][r, c])]), m, residual.variables
    )


# -- numeric oracle helpers -------------------------------------------------


def random_assignments(symbols: Sequence[int], count: int, rng: np.random.Generator) -> list[dict[int, float]]:
    return [{s: float(rng.uniform(-math.pi, math.pi)) for s in symbols} for _ in range(count)]


def _symbols_of(*ops: Operator) -> list[int]:
    syms: set[int] = set()
    for op in ops:
        for _, _, v in op.entries():
            syms |= v.symbols()
    return sorted(syms)


def _embed(g: np.ndarray, d: int, i: int, n: int) -> np.ndarray:
    return np.kron(np.kron(np.eye(d ** (i - 1)), g), np.eye(d ** (n - i - 1)))


def numeric_braid_residual(g: np.ndarray, d: int) -> float:
    g1, g2 = _embed(g, d, 1, 3), _embed(g, d, 2, 3)
    adjacent = np.max(np.abs(g1 @ g2 @ g1 - g2 @ g1 @ g2))
    f1, f3 = _embed(g, d, 1, 4), _embed(g, d, 3, 4)
    far = np.max(np.abs(f1 @ f3 - f3 @ f1)) if d <= 4 else 0.0
    return float(max(adjacent, far))


# -- braid relation ------------------------------------------------------


def check_braid(g: Operator, name: str = "braid", params: Mapping | None = None) -> VerificationReport:
    """g1 g2 g1 = g2 g1 g2 on V⊗3 and g1 g3 = g3 g1 on V⊗4, exactly."""
    j2 = pair_factor(g)
    rep = VerificationReport(name, dict(params or {"V": format_half(j2)}))
    with timed(rep):
        g1, g2 = lift(g, 1, 3), lift(g, 2, 3)
        residual = g1 @ g2 @ g1 - g2 @ g1 @ g2
        f1, f3 = lift(g, 1, 4), lift(g, 3, 4)
        far = f1 @ f3 - f3 @ f1
        rep.details = {"adjacent": residual.is_zero(), "far_commutation": far.is_zero()}
        rep.passed = residual.is_zero() and far.is_zero()
        if not residual.is_zero():
            rep.witness = {"relation": "adjacent", **operator_witness(residual)}
        elif not far.is_zero():
            rep.witness = {"relation": "far", **operator_witness(far)}
    return rep


def braid_oracle(g: Operator, points: int = 5, seed: int = 0) -> float:
    """Dense numeric braid residual, maximized over random angle assignments."""
    d = pair_factor(g) + 1
    rng = np.random.default_rng(seed)
    syms = _symbols_of(g)
    worst = 0.0
    for a in random_assignments(syms, points if syms else 1, rng):
        worst = max(worst, numeric_braid_residual(g.to_numpy(a), d))
    return worst


# -- M-algebra -------------------------------------------------------------


def check_M_algebra(family: BellFamily, _anticommute_sign: int = -1) -> VerificationReport:
    """M^2 = -1, M_{i+1} M_i = -M_i M_{i+1}, far commutation, and the q side conditions."""
    if family.kind != "jj" and family.n % 2:
        from .bell import UnsupportedKindError

        raise UnsupportedKindError("the M-algebra check needs a V⊗V family (even N)")
    rep = VerificationReport("malg", family.describe())
    with timed(rep):
        M = family.M
        square = M @ M + Operator.identity(M.space)
        m1, m2 = lift(M, 1, 3), lift(M, 2, 3)
        anti = m2 @ m1 - (m1 @ m2).scale(_anticommute_sign)
        f1, f3 = lift(M, 1, 4), lift(M, 3, 4)
        far = f1 @ f3 - f3 @ f1
        qrep = check_q_constraints(family.qtable) if family.kind == "jj" else None
        parts = {"square": square, "anticommute": anti, "far_commutation": far}
        rep.details = {k: v.is_zero() for k, v in parts.items()}
        if qrep is not None:
            rep.details["q_conditions"] = qrep.passed
        rep.passed = all(rep.details.values())
        for k, v in parts.items():
            if not v.is_zero():
                rep.witness = {"relation": k, **operator_witness(v)}
                break
        else:
            if qrep is not None and not qrep.passed:
                rep.witness = qrep.witness
    return rep


# -- Yang-Baxterization and the QYBE ------------------------------------


def characteristic_residual(g: Operator, lam1: PhaseScalar, lam2: PhaseScalar) -> Operator:
    eye = Operator.identity(g.space)
    return (g - eye.scale(lam1)) @ (g - eye.scale(lam2))


def yang_baxterize(g: Operator, lam1: PhaseScalar, lam2: PhaseScalar, var: str = "x") -> ParametricOperator:
    """R(x) = g + x*lam1*lam2*g^{-1} for a braid generator with two eigenvalues."""
    if not characteristic_residual(g, lam1, lam2).is_zero():
        raise ValueError("generator does not satisfy (g - lam1)(g - lam2) = 0")
    # g^{-1} = (lam1 + lam2 - g) / (lam1 lam2) from the characteristic equation
    eye = Operator.identity(g.space)
    slope = eye.scale(lam1 + lam2) - g
    return ParametricOperator.linear(g, slope, var)


def qybe_sides(R: ParametricOperator) -> tuple[ParametricOperator, ParametricOperator]:
    """Both sides of R1(x) R2(xy) R1(y) = R2(y) R1(xy) R2(x) as polynomials in (x, y)."""
    v = ("x", "y")
    r1, r2 = R.lift(1, 3), R.lift(2, 3)
    x, y, xy = (1, 0), (0, 1), (1, 1)
    lhs = r1.substitute(v, x) @ r2.substitute(v, xy) @ r1.substitute(v, y)
    rhs = r2.substitute(v, y) @ r1.substitute(v, xy) @ r2.substitute(v, x)
    return lhs, rhs


def check_qybe(R: ParametricOperator, params: Mapping | None = None) -> VerificationReport:
    rep = VerificationReport("qybe", dict(params or {}))
    with timed(rep):
        lhs, rhs = qybe_sides(R)
        residual = lhs - rhs
        rep.passed = residual.is_zero()
        rep.details = {"monomials": len(lhs.coeffs)}
        rep.witness = parametric_witness(residual)
    return rep


def qybe_oracle(R: ParametricOperator, points: int = 5, seed: int = 0) -> float:
    d = pair_factor(R.at_zero()) + 1
    rng = np.random.default_rng(seed)
    syms = _symbols_of(*R.coeffs.values())
    worst = 0.0
    for a in random_assignments(syms, points, rng):
        x, y = rng.uniform(-2, 2, size=2)

        def at(t):
            return R.evaluate({R.variables[0]: t}, a)

        lhs = _embed(at(x), d, 1, 3) @ _embed(at(x * y), d, 2, 3) @ _embed(at(y), d, 1, 3)
        rhs = _embed(at(y), d, 2, 3) @ _embed(at(x * y), d, 1, 3) @ _embed(at(x), d, 2, 3)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def check_normalization(R: ParametricOperator) -> VerificationReport:
    """R(x) R(x)^† = (1 + x^2) I for real x, as a polynomial identity."""
    rep = VerificationReport("normalization")
    with timed(rep):
        prod = R @ R.dagger()
        eye = Operator.identity(R.space)
        expected = ParametricOperator(R.space, R.variables, {(0,): eye, (2,): eye})
        residual = prod - expected
        rep.passed = residual.is_zero()
        rep.witness = parametric_witness(residual)
    return rep


def bell_rx(family: BellFamily) -> ParametricOperator:
    """R(x) = B + x B^{-1}."""
    return ParametricOperator.linear(family.B, family.B_inv)


# -- additive solution ---------------------------------------------------


def mybe_sides(family: BellFamily) -> tuple[ParametricOperator, ParametricOperator]:
    """Both sides of the additive YBE after multiplying through by (1 + uv)."""
    M = family.M
    eye = Operator.identity(M.space)
    v2 = ("u", "v")

    def r(i: int, var: Mono) -> ParametricOperator:
        return ParametricOperator(M.space, v2, {(0, 0): eye, var: M}).lift(i, 3)

    def middle(i: int) -> ParametricOperator:
        # (1 + uv) I + (u + v) M
        return ParametricOperator(M.space, v2, {(0, 0): eye, (1, 1): eye, (1, 0): M, (0, 1): M}).lift(i, 3)

    u, v = (1, 0), (0, 1)
    lhs = r(1, u) @ middle(2) @ r(1, v)
    rhs = r(2, v) @ middle(1) @ r(2, u)
    return lhs, rhs


def check_modified_ybe(family: BellFamily) -> VerificationReport:
    rep = VerificationReport("mybe", family.describe())
    with timed(rep):
        lhs, rhs = mybe_sides(family)
        residual = lhs - rhs
        rep.passed = residual.is_zero()
        rep.witness = parametric_witness(residual)
    return rep


def mybe_oracle(family: BellFamily, points: int = 5, seed: int = 0) -> float:
    M0 = family.M
    d = family.j2 + 1
    rng = np.random.default_rng(seed)
    syms = _symbols_of(M0)
    worst = 0.0
    for a in random_assignments(syms, points, rng):
        M = M0.to_numpy(a)
        eye = np.eye(M.shape[0])
        while True:
            u, v = rng.uniform(-0.9, 0.9, size=2)
            if abs(1 + u * v) > 1e-3:
                break
        w = (u + v) / (1 + u * v)
        lhs = _embed(eye + u * M, d, 1, 3) @ _embed(eye + w * M, d, 2, 3) @ _embed(eye + v * M, d, 1, 3)
        rhs = _embed(eye + v * M, d, 2, 3) @ _embed(eye + w * M, d, 1, 3) @ _embed(eye + u * M, d, 2, 3)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def reparameterize(x: Fraction | int) -> Fraction:
    """u = (1 - x)/(1 + x)."""
    x = Fraction(x)
    if x == -1:
        raise ValueError("x = -1 is a pole of the reparameterization")
    return (1 - x) / (1 + x)


def check_reparameterization(x: Fraction | int, y: Fraction | int) -> VerificationReport:
    """(1 - xy)/(1 + xy) = (u + v)/(1 + uv), in exact rationals."""
    x, y = Fraction(x), Fraction(y)
    rep = VerificationReport("reparameterize", {"x": str(x), "y": str(y)})
    if x * y == -1:
        raise ValueError("1 + xy = 0 is a pole")
    u, v = reparameterize(x), reparameterize(y)
    left = (1 - x * y) / (1 + x * y)
    right = (u + v) / (1 + u * v)
    rep.passed = left == right
    rep.details = {"u": str(u), "v": str(v), "middle": str(right)}
    if not rep.passed:
        rep.witness = {"left": str(left), "right": str(right)}
    return rep


def trig_residual(
    family: BellFamily,
    theta1: float,
    theta2: float,
    assignment: Mapping[int, float] | None = None,
    hyperbolic: bool = False,
) -> float:
    """Numeric residual of R1(T1) R2(T1+T2) R1(T2) = R2(T2) R1(T1+T2) R2(T1).

    R(T) = I - i tan(T) M, or R(T) = I + tanh(T) M for the hyperbolic form.
    """
    if not hyperbolic:
        for t in (theta1, theta2, theta1 + theta2):
            if abs(math.cos(t)) < 1e-9:
                raise ValueError(f"tan pole at {t}")
    M = family.M.to_numpy(assignment if assignment is not None else family.assignment)
    d = family.j2 + 1
    eye = np.eye(M.shape[0])

    def r(t: float) -> np.ndarray:
        return eye + (math.tanh(t) if hyperbolic else -1j * math.tan(t)) * M

    t12 = theta1 + theta2
    lhs = _embed(r(theta1), d, 1, 3) @ _embed(r(t12), d, 2, 3) @ _embed(r(theta2), d, 1, 3)
    rhs = _embed(r(theta2), d, 2, 3) @ _embed(r(t12), d, 1, 3) @ _embed(r(theta1), d, 2, 3)
    return float(np.max(np.abs(lhs - rhs)))


def trig_check(
    family: BellFamily,
    theta1: float,
    theta2: float,
    assignment: Mapping[int, float] | None = None,
    tol: float = 1e-10,
) -> VerificationReport:
    rep = VerificationReport("trig", {**family.describe(), "theta1": theta1, "theta2": theta2})
    with timed(rep):
        res = trig_residual(family, theta1, theta2, assignment)
        res_h = trig_residual(family, theta1, theta2, assignment, hyperbolic=True)
        rep.details = {"residual": res, "residual_hyperbolic": res_h}
        rep.passed = res < tol and res_h < tol
    return rep


# -- virtual braid ---------------------------------------------------------


def check_virtual(family: BellFamily, m: Operator | None = None) -> tuple[VerificationReport, VerificationReport]:
    """Mixed relations between M and the swap P on V⊗3.

    Returns (standard, literal): the standard relation P1 P2 M1 P2 P1 = M2, and
    the relation P1 M2 P1 = P2 M1 P1 taken as written.  The literal report is
    informational only.
    """
    M = family.M if m is None else m
    P = permutation(M.space)
    p1, p2 = lift(P, 1, 3), lift(P, 2, 3)
    m1, m2 = lift(M, 1, 3), lift(M, 2, 3)
    params = family.describe()
    std = VerificationReport("virtual-standard", params)
    with timed(std):
        residual = p1 @ p2 @ m1 @ p2 @ p1 - m2
        std.passed = residual.is_zero()
        std.witness = operator_witness(residual)
    lit = VerificationReport("virtual-literal", params, informational=True)
    with timed(lit):
        residual = p1 @ m2 @ p1 - p2 @ m1 @ p1
        lit.passed = residual.is_zero()
        lit.witness = operator_witness(residual)
    return std, lit


def check_braid_limit(R: ParametricOperator) -> VerificationReport:
    """The (x, y) = (0, 0) coefficient of the QYBE is the braid relation for R(0)."""
    rep = VerificationReport("qybe-braid-limit")
    with timed(rep):
        lhs, rhs = qybe_sides(R)
        g = R.at_zero()
        g1, g2 = lift(g, 1, 3), lift(g, 2, 3)
        ok_l = lhs.coefficient((0, 0)) == g1 @ g2 @ g1
        ok_r = rhs.coefficient((0, 0)) == g2 @ g1 @ g2
        rep.passed = ok_l and ok_r and (lhs.coefficient((0, 0)) == rhs.coefficient((0, 0)))
    return rep


__all__ = [
    "ParametricOperator",
    "bell_rx",
    "braid_oracle",
    "check_braid",
    "check_braid_limit",
    "check_M_algebra",
    "check_modified_ybe",
    "check_normalization",
    "check_qybe",
    "check_reparameterization",
    "check_virtual",
    "characteristic_residual",
    "mybe_oracle",
    "qybe_oracle",
    "reparameterize",
    "trig_check",
    "trig_residual",
    "yang_baxterize",
]
