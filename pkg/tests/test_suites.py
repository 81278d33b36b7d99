import pytest

from corankvol.suites import SUITES, CheckResult

EXPECTED_SUITES = {"smallball", "tube", "moments", "selberg", "conefactor",
                   "pencil", "constants"}


def test_registry_names():
    assert set(SUITES) == EXPECTED_SUITES


@pytest.mark.parametrize("name,kwargs", [
    ("moments", {"samples": 60_000}),
    ("selberg", {"samples": 60_000}),
    ("conefactor", {"samples": 200_000}),
    ("tube", {"samples": 150_000}),
    ("smallball", {"samples": 150_000}),
    ("pencil", {"samples": 1_500}),
    ("constants", {"samples": 200_000}),
])
def test_suite_runs_and_passes(name, kwargs):
    rows = SUITES[name](seed=8, **kwargs)
    assert rows, name
    for row in rows:
        assert isinstance(row, CheckResult)
        d = row.as_dict()
        assert d["estimate_provenance"] == "monte-carlo"
        assert d["expected_provenance"] == "closed-form"
        assert row.passed, (name, d)
