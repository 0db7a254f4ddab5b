"""Quadratic relation sets in free noncommutative generators.

Relations are extracted by multiplying the almost-complex structure against
tensor products of generator matrices, entry by entry, with the convention
(A⊗B)[(i,j),(k,l)] = A[i,k] B[j,l] and words ordered first factor first.
Two relation sets are compared by the linear span of their quadratics, after
instantiating the phase symbols at powers of zeta_8 so that coefficients lie
in the field Q(zeta_8).
"""

from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .bell import BellFamily, UnsupportedKindError
from .halfint import eps, format_half, parse_half, spin_labels
from .linalg import IndexSpace, Operator, pair_factor
from .report import VerificationReport, timed
from .scalar import I, ONE, ZERO, PhaseScalar

FAMILY_ORDER = {"T": 0, "Ttilde": 1, "Lplus": 2, "Lminus": 3, "Xcoord": 4, "XiForm": 5}


class MixedFamiliesError(ValueError):
    pass


class NonInvertibleUnitError(ValueError):
    pass


class GenSymbol(NamedTuple):
    family: str
    indices: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.family}[{','.join(format_half(i) for i in self.indices)}]"

    @classmethod
    def parse(cls, text: str) -> GenSymbol:
        fam, _, rest = text.partition("[")
        if not rest.endswith("]"):
            raise ValueError(f"bad generator symbol {text!r}")
        return cls(fam, tuple(parse_half(s) for s in rest[:-1].split(",")))

    def sort_key(self) -> tuple:
        return (FAMILY_ORDER.get(self.family, 99), self.family, tuple(-i for i in self.indices))


def T(i: int, j: int, family: str = "T") -> GenSymbol:
    return GenSymbol(family, (i, j))


Word = tuple[GenSymbol, ...]


def word_key(word: Word) -> tuple:
    return (len(word), tuple(s.sort_key() for s in word))


class NCPoly:
    """Element of the free algebra: words with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, PhaseScalar] | None = None) -> None:
        self.terms: dict[Word, PhaseScalar] = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[PhaseScalar | int | Fraction, Sequence[GenSymbol]]]) -> NCPoly:
        acc: dict[Word, PhaseScalar] = {}
        for c, w in pairs:
            w = tuple(w)
            acc[w] = acc.get(w, ZERO) + PhaseScalar.coerce(c)
        return cls(acc)

    @classmethod
    def gen(cls, s: GenSymbol) -> NCPoly:
        return cls({(s,): ONE})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: NCPoly) -> NCPoly:
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc[w] + c if w in acc else c
        return NCPoly(acc)

    def __neg__(self) -> NCPoly:
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: NCPoly) -> NCPoly:
        return self + (-other)

    def scale(self, s: PhaseScalar | int | Fraction) -> NCPoly:
        s = PhaseScalar.coerce(s)
        return NCPoly({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other: NCPoly) -> NCPoly:
        acc: dict[Word, PhaseScalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                p = c1 * c2
                acc[w] = acc[w] + p if w in acc else p
        return NCPoly(acc)

    def substitute(self, mapping: Mapping[GenSymbol, NCPoly]) -> NCPoly:
        out = NCPoly()
        for w, c in self.terms.items():
            term = NCPoly({(): c})
            for s in w:
                term = term * (mapping[s] if s in mapping else NCPoly.gen(s))
            out = out + term
        return out

    def map_scalars(self, f: Callable[[PhaseScalar], PhaseScalar]) -> NCPoly:
        return NCPoly({w: f(c) for w, c in self.terms.items()})

    def reversed(self) -> NCPoly:
        return NCPoly({tuple(reversed(w)): c for w, c in self.terms.items()})

    def families(self) -> set[str]:
        return {s.family for w in self.terms for s in w}

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def sorted_terms(self) -> list[tuple[Word, PhaseScalar]]:
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for k, (w, c) in enumerate(self.sorted_terms()):
            word = "·".join(str(s) for s in w)
            cs = str(c)
            neg = cs.startswith("-") and "+" not in cs and " - " not in cs
            if neg:
                cs = cs[1:]
            body = word if cs == "1" else f"({cs})·{word}"
            if k == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"NCPoly({self})"

    def to_json(self) -> dict:
        items = self.sorted_terms()
        return {"words": [[str(s) for s in w] for w, _ in items], "coeffs": [c.to_json() for _, c in items]}

    @classmethod
    def from_json(cls, data: Mapping) -> NCPoly:
        return cls.from_terms(
            (PhaseScalar.from_json(c), [GenSymbol.parse(s) for s in w]) for w, c in zip(data["words"], data["coeffs"])
        )


@dataclass
class RelationSet:
    relations: list[NCPoly]
    tags: list[str] | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def families(self) -> set[str]:
        out: set[str] = set()
        for r in self.relations:
            out |= r.families()
        return out

    def is_homogeneous_quadratic(self) -> bool:
        return all(r.degrees() == {2} for r in self.relations)

    def tagged(self, tag: str) -> list[NCPoly]:
        return [r for r, t in zip(self.relations, self.tags or []) if t == tag]

    def map(self, f: Callable[[NCPoly], NCPoly]) -> RelationSet:
        rels, tags = [], []
        for k, r in enumerate(self.relations):
            r2 = f(r)
            if r2:
                rels.append(r2)
                if self.tags:
                    tags.append(self.tags[k])
        return RelationSet(rels, tags or None, dict(self.meta))

    def __add__(self, other: RelationSet) -> RelationSet:
        tags = None
        if self.tags is not None or other.tags is not None:
            tags = (self.tags or [""] * len(self)) + (other.tags or [""] * len(other))
        return RelationSet(self.relations + other.relations, tags)

    def to_json(self) -> list[dict]:
        out = []
        for k, r in enumerate(self.relations):
            d = r.to_json()
            if self.tags:
                d["tag"] = self.tags[k]
            out.append(d)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> RelationSet:
        rels = [NCPoly.from_json(d) for d in data]
        tags = [d["tag"] for d in data] if data and all("tag" in d for d in data) else None
        return cls(rels, tags)

    def to_text(self) -> str:
        lines = []
        for k, r in enumerate(self.relations):
            prefix = f"[{self.tags[k]}] " if self.tags else ""
            lines.append(f"{prefix}{r} = 0")
        return "\n".join(lines)


# -- extraction --------------------------------------------------------------


def _require_jj(family: BellFamily) -> None:
    if family.kind != "jj":
        raise UnsupportedKindError("relation extraction needs a J⊗J family")


def _tensor_entry(space, fam_left: str, fam_right: str, r: int, c: int) -> NCPoly:
    a, b = space.labels(r)
    cc, d = space.labels(c)
    return NCPoly({(T(a, cc, fam_left), T(b, d, fam_right)): ONE})


def _commutator_entries(
    M: Operator, left: tuple[str, str], right: tuple[str, str]
) -> Iterable[tuple[int, int, NCPoly]]:
    """Entries of M (L1⊗L2) - (R1⊗R2) M for every (row, col)."""
    space = M.space
    dim = space.dim
    for r in range(dim):
        mrow = M.row(r)
        for c in range(dim):
            poly = NCPoly()
            for k, m in mrow.items():
                poly = poly + _tensor_entry(space, *left, k, c).scale(m)
            for k in range(dim):
                m = M[k, c]
                if m:
                    poly = poly - _tensor_entry(space, *right, r, k).scale(m)
            yield r, c, poly


def _relations_from(entries: Iterable[tuple[int, int, NCPoly]], tag: str, out: RelationSet) -> None:
    for _, _, poly in entries:
        out.meta["entries"] = out.meta.get("entries", 0) + 1
        if poly.is_zero():
            out.meta["zero_entries"] = out.meta.get("zero_entries", 0) + 1
            continue
        out.relations.append(poly)
        out.tags.append(tag)


def extract_rtt(family: BellFamily, gen: str = "T") -> RelationSet:
    """One relation per entry of M (T⊗T) - (T⊗T) M, zero entries dropped."""
    _require_jj(family)
    out = RelationSet([], [])
    _relations_from(_commutator_entries(family.M, (gen, gen), (gen, gen)), "TT", out)
    return out


def extract_rll(family: BellFamily, include_quotient: bool = False) -> RelationSet:
    """M L±L± relations and the mixed relation

    L+⊗L- - L-⊗L+ + M (L+⊗L-) - (L-⊗L+) M = 0.
    """
    _require_jj(family)
    M = family.M
    out = RelationSet([], [])
    _relations_from(_commutator_entries(M, ("Lplus", "Lplus"), ("Lplus", "Lplus")), "L+L+", out)
    _relations_from(_commutator_entries(M, ("Lminus", "Lminus"), ("Lminus", "Lminus")), "L-L-", out)
    space = M.space
    mixed = (
        (r, c, poly + _tensor_entry(space, "Lplus", "Lminus", r, c) - _tensor_entry(space, "Lminus", "Lplus", r, c))
        for r, c, poly in _commutator_entries(M, ("Lplus", "Lminus"), ("Lminus", "Lplus"))
    )
    _relations_from(mixed, "mixed", out)
    if include_quotient:
        dim = space.dim
        quotient = (
            (r, c, _tensor_entry(space, "Lplus", "Lminus", r, c) - _tensor_entry(space, "Lminus", "Lplus", r, c))
            for r in range(dim)
            for c in range(dim)
        )
        _relations_from(quotient, "quotient", out)
    return out


def rtt_component_relations(family: BellFamily, gen: str = "T") -> RelationSet:
    """The component pattern

    T[i1,-i2] T[j1,-j2] + eps(i1) eps(i2) q[i1,j1] q[i2,j2] T[-i1,i2] T[-j1,j2] = 0
    over all index tuples, written out directly from the formula.
    """
    _require_jj(family)
    qt = family.qtable
    labels = spin_labels(qt.j2)
    rels = []
    for i1 in labels:
        for j1 in labels:
            for i2 in labels:
                for j2 in labels:
                    coeff = qt.q(i1, j1) * qt.q(i2, j2) * (eps(i1) * eps(i2))
                    rels.append(
                        NCPoly.from_terms(
                            [
                                (1, (T(i1, -i2, gen), T(j1, -j2, gen))),
                                (coeff, (T(-i1, i2, gen), T(-j1, j2, gen))),
                            ]
                        )
                    )
    return RelationSet(rels)


def rll_mixed_component_relations(family: BellFamily) -> RelationSet:
    """L+[i1,i2] L-[j1,j2] - L-[i1,i2] L+[j1,j2] + eps(i1) q[i1,j1] L+[-i1,i2] L-[-j1,j2]
    + eps(i2) q[-i2,-j2] L-[i1,-i2] L+[j1,-j2] = 0."""
    _require_jj(family)
    qt = family.qtable
    labels = spin_labels(qt.j2)
    rels = []
    for i1 in labels:
        for j1 in labels:
            for i2 in labels:
                for j2 in labels:
                    rels.append(
                        NCPoly.from_terms(
                            [
                                (1, (T(i1, i2, "Lplus"), T(j1, j2, "Lminus"))),
                                (-1, (T(i1, i2, "Lminus"), T(j1, j2, "Lplus"))),
                                (qt.q(i1, j1) * eps(i1), (T(-i1, i2, "Lplus"), T(-j1, j2, "Lminus"))),
                                (qt.q(-i2, -j2) * eps(i2), (T(i1, -i2, "Lminus"), T(j1, -j2, "Lplus"))),
                            ]
                        )
                    )
    return RelationSet(rels)


def b4_algebra_relations(q: PhaseScalar, gen: str = "T") -> RelationSet:
    """The eight relations of the 4x4 case in a, b, c, d = T[½,½], T[½,-½], T[-½,½], T[-½,-½]."""
    a, b, c, d = (T(1, 1, gen),), (T(1, -1, gen),), (T(-1, 1, gen),), (T(-1, -1, gen),)
    qi = q.inverse()
    pairs = [
        [(1, a + a), (-1, d + d)],
        [(1, a + b), (-q, d + c)],
        [(1, b + b), (q * q, c + c)],
        [(1, a + c), (-qi, d + b)],
        [(1, a + d), (-1, d + a)],
        [(1, b + a), (q, c + d)],
        [(1, b + c), (1, c + b)],
        [(1, c + a), (qi, b + d)],
    ]
    return RelationSet([NCPoly.from_terms(p) for p in pairs])


def ttilde_substitution(j2: int) -> dict[GenSymbol, NCPoly]:
    """T[i,j] in terms of Tt, inverting Tt[i,j] = eps(i) T[i,j] + T[-i,-j].

    Per pair {(i,j), (-i,-j)} the substitution matrix [[eps, 1], [1, -eps]]
    squares to 2 I, so T[i,j] = (eps(i) Tt[i,j] + Tt[-i,-j]) / 2.
    """
    labels = spin_labels(j2)
    half = Fraction(1, 2)
    return {
        T(i, j): NCPoly.from_terms([(half * eps(i), (T(i, j, "Ttilde"),)), (half, (T(-i, -j, "Ttilde"),))])
        for i in labels
        for j in labels
    }


def ttilde_forward(j2: int) -> dict[GenSymbol, NCPoly]:
    """Tt[i,j] = eps(i) T[i,j] + T[-i,-j]."""
    labels = spin_labels(j2)
    return {
        T(i, j, "Ttilde"): NCPoly.from_terms([(eps(i), (T(i, j),)), (1, (T(-i, -j),))]) for i in labels for j in labels
    }


def ttilde_pair_determinant(i: int) -> int:
    e = eps(i)
    return e * (-e) - 1 * 1


def ttilde_relations(family: BellFamily | str | Fraction) -> RelationSet:
    """RTT relations at q = 1 rewritten in the Tt generators."""
    if not isinstance(family, BellFamily):
        from .bell import as_j2

        j2 = as_j2(family)
        family = BellFamily.jj(family, zeta_powers=[0] * ((j2 + 1) // 2))
    _require_jj(family)
    if any(u != ONE for u in family.qtable.units.values()):
        raise ValueError("the Tt change of generators is defined for q = 1 only")
    sub = ttilde_substitution(family.qtable.j2)
    return extract_rtt(family).map(lambda r: r.substitute(sub))


def ttilde_null_relations(j2: int) -> RelationSet:
    """Tt[i,-i]^2, Tt[i,i] Tt[-i,-i], Tt[i,i] Tt[-i,i], Tt[i,-i] Tt[i,i] for every label i."""
    rels = []
    for i in spin_labels(j2):
        for w in [
            (T(i, -i, "Ttilde"), T(i, -i, "Ttilde")),
            (T(i, i, "Ttilde"), T(-i, -i, "Ttilde")),
            (T(i, i, "Ttilde"), T(-i, i, "Ttilde")),
            (T(i, -i, "Ttilde"), T(i, i, "Ttilde")),
        ]:
            rels.append(NCPoly({w: ONE}))
    return RelationSet(rels)


def ttilde_sign_families(j2: int) -> RelationSet:
    """The four sign-conditioned Tt families, generated over all index tuples."""
    labels = spin_labels(j2)
    rels = []
    for i1 in labels:
        for i2 in labels:
            for j1 in labels:
                for j2_ in labels:
                    s12, s21 = eps(i1) * eps(i2), eps(i2) * eps(j1)
                    A = T(i1, -i2, "Ttilde")
                    Bm = T(-i1, i2, "Ttilde")
                    if s21 == 1:
                        w1, w2 = (A, T(j1, -j2_, "Ttilde")), (Bm, T(-j1, j2_, "Ttilde"))
                    else:
                        w1, w2 = (A, T(-j1, j2_, "Ttilde")), (Bm, T(j1, -j2_, "Ttilde"))
                    # lhs = sign * rhs
                    sign = -s12 * s21
                    rels.append(NCPoly.from_terms([(1, w1), (-sign, w2)]))
    return RelationSet(rels)


def b4_tilde_null_relations() -> RelationSet:
    """a~d~, d~a~, b~b~, c~c~, a~c~, d~b~, b~a~, c~d~ with a~ = a + d, b~ = b + c, c~ = b - c, d~ = a - d."""
    a, b, c, d = (NCPoly.gen(T(*ij)) for ij in [(1, 1), (1, -1), (-1, 1), (-1, -1)])
    at, bt, ct, dt = a + d, b + c, b - c, a - d
    return RelationSet([at * dt, dt * at, bt * bt, ct * ct, at * ct, dt * bt, bt * at, ct * dt])


def _as_pair(M: Operator) -> Operator:
    """View M on V⊗V; an even number of qubits splits into two equal halves."""
    return M.with_space(IndexSpace.spins(pair_factor(M), 2))


def ncgeo_relations(family: BellFamily, mu: PhaseScalar | Fraction | int) -> RelationSet:
    """Coordinate/form relations

    X⊗X = i M (X⊗X),  ξ⊗ξ = -i M (ξ⊗ξ),
    X⊗ξ = (mu/2 - 1) ξ⊗X + (mu/2) i M (ξ⊗X),
    one relation per component (i, j).
    """
    mu = PhaseScalar.coerce(mu)
    M = _as_pair(family.M)
    space = M.space
    half_mu = mu * Fraction(1, 2)
    rels, tags = [], []

    def vec(f1: str, f2: str, r: int) -> NCPoly:
        a, b = space.labels(r)
        return NCPoly({(GenSymbol(f1, (a,)), GenSymbol(f2, (b,))): ONE})

    def m_apply(f1: str, f2: str, r: int) -> NCPoly:
        out = NCPoly()
        for k, m in M.row(r).items():
            out = out + vec(f1, f2, k).scale(m)
        return out

    for r in range(space.dim):
        rels.append(vec("Xcoord", "Xcoord", r) - m_apply("Xcoord", "Xcoord", r).scale(I))
        tags.append("xx")
    for r in range(space.dim):
        rels.append(vec("XiForm", "XiForm", r) + m_apply("XiForm", "XiForm", r).scale(I))
        tags.append("xixi")
    for r in range(space.dim):
        rel = vec("Xcoord", "XiForm", r) - vec("XiForm", "Xcoord", r).scale(half_mu - ONE) - m_apply("XiForm", "Xcoord", r).scale(half_mu * I)
        rels.append(rel)
        tags.append("mixed")
    return RelationSet(rels, tags, {"mu": str(mu)})


def projector_components(family: BellFamily, which: str, f1: str, f2: str) -> list[NCPoly]:
    """Components of P±(A⊗B) with P± = (1 ± iM)/2, expanded directly."""
    M = _as_pair(family.M)
    space = M.space
    sign = 1 if which == "+" else -1
    out = []
    for r in range(space.dim):
        a, b = space.labels(r)
        poly = NCPoly({(GenSymbol(f1, (a,)), GenSymbol(f2, (b,))): PhaseScalar.rational(Fraction(1, 2))})
        for k, m in M.row(r).items():
            c, d = space.labels(k)
            poly = poly + NCPoly({(GenSymbol(f1, (c,)), GenSymbol(f2, (d,))): m * I * Fraction(sign, 2)})
        out.append(poly)
    return out


def rescale_generator(rs: RelationSet, symbol: GenSymbol, unit: PhaseScalar) -> RelationSet:
    """Substitute symbol -> unit * symbol in every relation."""
    try:
        unit.inverse()
    except (ValueError, ZeroDivisionError) as exc:
        raise NonInvertibleUnitError(f"{unit} is not invertible") from exc

    def go(r: NCPoly) -> NCPoly:
        return NCPoly({w: c * unit ** sum(1 for s in w if s == symbol) for w, c in r.terms.items()})

    return rs.map(go)


def specialize_generators(rs: RelationSet, mapping: Mapping[str, str]) -> RelationSet:
    """Rename generator families, e.g. {"Lplus": "T", "Lminus": "T"}."""

    def go(r: NCPoly) -> NCPoly:
        return NCPoly.from_terms(
            (c, tuple(GenSymbol(mapping.get(s.family, s.family), s.indices) for s in w)) for w, c in r.terms.items()
        )

    return rs.map(go)


# -- span comparison ---------------------------------------------------------


def _instantiate(rs: RelationSet, units: Mapping[int, PhaseScalar]) -> list[NCPoly]:
    return [r.map_scalars(lambda c: c.substitute(units)) for r in rs.relations]


def rref(rows: Iterable[Mapping[int, PhaseScalar]]) -> dict[int, dict[int, PhaseScalar]]:
    """Reduced row echelon basis over Q(zeta_8), keyed by pivot column."""
    basis: dict[int, dict[int, PhaseScalar]] = {}
    for row in rows:
        v = {k: x for k, x in row.items() if x}
        for p, brow in basis.items():
            c = v.get(p)
            if c:
                for k, x in brow.items():
                    y = v.get(k, ZERO) - c * x
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
        if not v:
            continue
        p = min(v)
        inv = v[p].inverse()
        v = {k: x * inv for k, x in v.items()}
        for q, brow in basis.items():
            c = brow.get(p)
            if c:
                for k, x in v.items():
                    y = brow.get(k, ZERO) - c * x
                    if y:
                        brow[k] = y
                    else:
                        brow.pop(k, None)
        basis[p] = v
    return dict(sorted(basis.items()))


def _columns(*sets: Sequence[NCPoly]) -> dict[Word, int]:
    words = {w for s in sets for r in s for w in r.terms}
    return {w: k for k, w in enumerate(sorted(words, key=word_key))}


def span_rank(rs: RelationSet, units: Mapping[int, PhaseScalar] | None = None) -> int:
    rels = _instantiate(rs, units or {})
    cols = _columns(rels)
    return len(rref({cols[w]: c for w, c in r.terms.items()} for r in rels))


def _numeric_matrix(rels: Sequence[NCPoly], cols: Mapping[Word, int], angles: Mapping[int, float]) -> np.ndarray:
    A = np.zeros((max(len(rels), 1), len(cols)), dtype=complex)
    for i, r in enumerate(rels):
        for w, c in r.terms.items():
            A[i, cols[w]] = c.evaluate(angles)
    return A


def _numeric_rank(A: np.ndarray, tol: float) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))


def default_instantiations(symbols: Sequence[int]) -> list[dict[int, int]]:
    """Four exact points u_l = zeta8**k, with k shifted per symbol."""
    return [{s: (k + n) % 8 for n, s in enumerate(sorted(symbols))} for k in (0, 1, 2, 3)]


def _symbols(*sets: RelationSet) -> list[int]:
    out: set[int] = set()
    for s in sets:
        for r in s.relations:
            for c in r.terms.values():
                out |= c.symbols()
    return sorted(out)


def span_equal(
    a: RelationSet,
    b: RelationSet,
    instantiations: Sequence[Mapping[int, int]] | None = None,
    numeric_points: int = 0,
    seed: int = 0,
    tol: float = 1e-9,
    name: str = "span-equal",
) -> VerificationReport:
    """Equality of the linear spans of two quadratic relation sets.

    ``instantiations`` map phase-symbol ids to zeta8 exponents (u_l = zeta8**k);
    each gives an exact row reduction over Q(zeta_8).  ``numeric_points`` adds
    random real-angle checks comparing rank(A), rank(B) and rank([A; B]).
    """
    if a.families() and b.families() and a.families() != b.families():
        raise MixedFamiliesError(f"generator families differ: {sorted(a.families())} vs {sorted(b.families())}")
    rep = VerificationReport(name)
    with timed(rep):
        syms = _symbols(a, b)
        if instantiations is None:
            instantiations = default_instantiations(syms) if syms else [{}]
        exact = []
        for inst in instantiations:
            units = {s: PhaseScalar.zeta(k) for s, k in inst.items()}
            ra, rb = _instantiate(a, units), _instantiate(b, units)
            cols = _columns(ra, rb)
            ea = rref({cols[w]: c for w, c in r.terms.items()} for r in ra)
            eb = rref({cols[w]: c for w, c in r.terms.items()} for r in rb)
            same = ea == eb
            exact.append({"zeta_powers": {format_half(s): k for s, k in inst.items()}, "rank_a": len(ea), "rank_b": len(eb), "equal": same})
        numeric = []
        rng = np.random.default_rng(seed)
        for _ in range(numeric_points):
            angles = {s: float(rng.uniform(-np.pi, np.pi)) for s in syms}
            cols = _columns(a.relations, b.relations)
            A = _numeric_matrix(a.relations, cols, angles)
            B = _numeric_matrix(b.relations, cols, angles)
            r_a, r_b, r_ab = (_numeric_rank(X, tol) for X in (A, B, np.vstack([A, B])))
            numeric.append({"rank_a": r_a, "rank_b": r_b, "rank_union": r_ab, "equal": r_a == r_b == r_ab})
        rep.details = {"exact": exact}
        if numeric:
            rep.details["numeric"] = numeric
        rep.passed = all(e["equal"] for e in exact) and all(n["equal"] for n in numeric)
        if not rep.passed:
            bad = next((e for e in exact if not e["equal"]), None) or next(n for n in numeric if not n["equal"])
            rep.witness = bad
    return rep


def contains_up_to_scalar(rs: RelationSet, poly: NCPoly) -> bool:
    """Is some relation of ``rs`` an exact scalar multiple of ``poly``?"""
    if poly.is_zero():
        return False
    w0, c0 = poly.sorted_terms()[0]
    for r in rs.relations:
        if set(r.terms) != set(poly.terms):
            continue
        ratio_num, ratio_den = r.terms[w0], c0
        if all(r.terms[w] * ratio_den == c * ratio_num for w, c in poly.terms.items()):
            return True
    return False


def in_span(rs: RelationSet, poly: NCPoly, units: Mapping[int, PhaseScalar] | None = None) -> bool:
    """Exact span membership after instantiating phase symbols (none if units is empty)."""
    units = units or {}
    rels = _instantiate(rs, units)
    (target,) = _instantiate(RelationSet([poly]), units)
    cols = _columns(rels, [target])
    base = rref({cols[w]: c for w, c in r.terms.items()} for r in rels)
    grown = rref(
        [{cols[w]: c for w, c in r.terms.items()} for r in rels] + [{cols[w]: c for w, c in target.terms.items()}]
    )
    return len(base) == len(grown)


def index_symmetry(rs: RelationSet, kind: str, invert_phases: bool = True) -> RelationSet:
    """Image of ``rs`` under T[i,j] -> T[-i,-j] ("negate") or T[i,j] -> T[j,i]
    ("transpose"), optionally with every u_l replaced by its inverse."""
    if kind == "negate":
        move = lambda s: GenSymbol(s.family, tuple(-i for i in s.indices))  # noqa: E731
    elif kind == "transpose":
        move = lambda s: GenSymbol(s.family, tuple(reversed(s.indices)))  # noqa: E731
    else:
        raise ValueError(f"unknown symmetry {kind!r}")
    labels = _symbols(rs)
    inv = {lab: PhaseScalar.u(-lab) for lab in labels} if invert_phases else {}

    def go(r: NCPoly) -> NCPoly:
        return NCPoly.from_terms((c.substitute(inv) if inv else c, tuple(move(s) for s in w)) for w, c in r.terms.items())

    return rs.map(go)
