from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bfun.core.multipoly import MultiPoly

settings.register_profile(
    "exact", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("exact")

small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def multipolys(arity: int, max_deg: int = 3, max_terms: int = 5, ring: str = "Q"):
    width = arity + (ring != "Q")
    expo = st.tuples(*[st.integers(0, max_deg)] * width)
    return st.dictionaries(expo, small_fracs, max_size=max_terms).map(lambda d: MultiPoly(arity, d, ring))


# ---------------------------------------------------------------- acceptance summary

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    ok = rep.passed and not hasattr(rep, "wasxfail")
    detail = dict(item.user_properties).get("detail", "")
    if not ok and not detail:
        detail = (getattr(rep, "wasxfail", "") or rep.longreprtext.strip().splitlines()[-1:][0:1] or [""])
        detail = detail if isinstance(detail, str) else detail[0]
    entry = _CRITERIA.setdefault(number, {"title": title, "parts": []})
    detail = str(detail)
    if len(detail) > 160:
        detail = detail[:157] + "..."
    entry["parts"].append((item.name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        failed = [p for p in entry["parts"] if not p[1]]
        status = "FAIL" if failed else "PASS"
        tr.write_line(f"{status} criterion {number}: {entry['title']} ({len(entry['parts']) - len(failed)}/{len(entry['parts'])} checks)")
        for name, _, detail in failed:
            tr.write_line(f"    failing: {name}: {detail}")
