from fractions import Fraction

import pytest
from hypothesis import strategies as st

from bosonladder.model import (make_custom, make_k_photon, make_multi_mode, make_three_mode,
                               make_two_mode)

ACCEPTANCE_LINES = []


def builtin_models(max_N, sparse=False):
    """Representative models from every built-in family with N <= max_N."""
    Ns = range(max_N + 1)
    if sparse:
        Ns = sorted({0, 1, 2, 3, 5, 8, max_N // 2, max_N - 1, max_N} & set(range(max_N + 1)))
    out = []
    for N in Ns:
        for k in (1, 2, 3):
            out.append(make_k_photon(k, N))
        out.append(make_three_mode(N))
        out.append(make_two_mode(2, 2, 2 * N + 1, 1))
        out.append(make_multi_mode(1, [1, 2], [0, 1], N))
    return out


def model_id(m):
    return f"{m.family}{m.label}" + (f"k{dict(m.params).get('k')}" if m.family == "k_photon" else "")


positive_beta = st.one_of(
    st.integers(min_value=1, max_value=50),
    st.fractions(min_value=Fraction(1, 10), max_value=20, max_denominator=12),
)


@st.composite
def custom_models(draw, max_N=8, min_N=0):
    N = draw(st.integers(min_value=min_N, max_value=max_N))
    betas = draw(st.lists(positive_beta, min_size=N, max_size=N))
    return make_custom(list(betas) + [0])


def record_acceptance(number, title, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def kp12():
    return make_k_photon(1, 2)


@pytest.fixture
def two_level():
    return make_custom([1, 0])
