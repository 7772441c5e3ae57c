import pathlib

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import settings, strategies as st

from effalg.poly import Polynomial

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

MAPS = pathlib.Path(__file__).resolve().parent.parent / "maps"
XY = ("x", "y")
XYZ = ("x", "y", "z")


@pytest.fixture
def maps_dir():
    return MAPS


rationals = st.builds(
    lambda a, b: mpq(a, b),
    st.integers(-9, 9),
    st.integers(1, 4),
)


def polynomials(variables=XY, max_exp=3, max_terms=5):
    n = len(variables)
    monomial = st.tuples(*[st.integers(0, max_exp)] * n)
    return st.dictionaries(monomial, rationals, max_size=max_terms).map(lambda t: Polynomial(variables, t))


def nonzero_polynomials(variables=XY, max_exp=3, max_terms=5):
    return polynomials(variables, max_exp, max_terms).filter(lambda p: not p.is_zero())


def to_sympy(p):
    syms = sympy.symbols(p.vars)
    return sum(
        (sympy.Rational(int(c.numerator), int(c.denominator)) * sympy.Mul(*[s**k for s, k in zip(syms, m)])
         for m, c in p.terms.items()),
        sympy.Integer(0),
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria with runtime budgets")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    rows = {}
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if report.when != "call":
                continue
            props = dict(report.user_properties)
            if "criterion" not in props:
                continue
            label = props["criterion"]
            ok, seconds = rows.get(label, (True, 0.0))
            rows[label] = (ok and outcome == "passed", seconds + report.duration)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(rows, key=lambda s: int(s.split()[0])):
        ok, seconds = rows[label]
        terminalreporter.write_line(f"criterion {label}: {'PASS' if ok else 'FAIL'} ({seconds:.1f} s)")
