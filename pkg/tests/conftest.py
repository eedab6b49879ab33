from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from shiftmax.haar import StepFunction

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=12)
positive = st.fractions(min_value=Fraction(1, 64), max_value=16, max_denominator=64)


@st.composite
def step_functions(draw, min_level=0, max_level=4):
    n = draw(st.integers(min_level, max_level))
    vals = draw(st.lists(rationals, min_size=1 << n, max_size=1 << n))
    return StepFunction(n, tuple(vals))


binary_words = st.text(alphabet="01", max_size=8)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
