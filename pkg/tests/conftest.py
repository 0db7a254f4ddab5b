from __future__ import annotations

from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from bellmat.scalar import PhaseScalar

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# criterion lines appended by test_acceptance, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


small_fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def phase_scalars(draw, labels=(1, 3), max_terms=3) -> PhaseScalar:
    n = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(n):
        c = draw(small_fracs)
        r = draw(st.integers(0, 7))
        mono = {lab: draw(st.integers(-2, 2)) for lab in labels if draw(st.booleans())}
        terms.append((c, r, mono))
    return PhaseScalar.from_terms(terms)


@st.composite
def field_elements(draw) -> PhaseScalar:
    """Nonzero elements of Q(zeta_8) (no phase symbols)."""
    coeffs = draw(st.lists(small_fracs, min_size=4, max_size=4).filter(any))
    return PhaseScalar.from_terms((c, r, None) for r, c in enumerate(coeffs))


angles = st.fixed_dictionaries({1: st.floats(-3.2, 3.2), 3: st.floats(-3.2, 3.2)})

HALF = Fraction(1, 2)
