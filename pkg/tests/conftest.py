import sys
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from unitroot.context import PrimeContext  # noqa: E402
from unitroot.series import PadicLaurentSeries  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")


@pytest.fixture
def ctx3():
    return PrimeContext(3, prec=6, window=3 ** 8)


def int_series(ctx, lo=-6, hi=6, max_terms=4, min_pi=0):
    """Strategy for sparse e = 1 series with exponents in [lo, hi]."""
    mod = ctx.p ** ctx.prec
    coeff = st.integers(0, mod - 1).map(lambda c: c * ctx.p ** min_pi)
    return st.dictionaries(st.integers(lo, hi), coeff, max_size=max_terms).map(
        lambda d: PadicLaurentSeries.from_ints(ctx, d))


ACCEPTANCE_LINES: dict = {}


def report(n: int, ok: bool, detail: str) -> str:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
