from fractions import Fraction

from hypothesis import strategies as st

F = Fraction

rationals = st.fractions(min_value=-2, max_value=2, max_denominator=30)
unit_rationals = st.fractions(min_value=-1, max_value=1, max_denominator=30)


@st.composite
def affine_weights(draw, k=4):
    """``k`` rationals summing to exactly one (components may be negative)."""
    head = [draw(rationals) for _ in range(k - 1)]
    return head + [1 - sum(head)]


@st.composite
def simplex_weights(draw, k):
    raw = draw(st.lists(st.integers(0, 50), min_size=k, max_size=k).filter(any))
    total = sum(raw)
    return [F(v, total) for v in raw]


# Acceptance bookkeeping: one line per criterion in the terminal summary.
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record(number: int, name: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE[number] = (name, bool(ok), detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
