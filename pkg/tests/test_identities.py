from __future__ import annotations

import math

import pytest

from qfrac.identities import IDENTITIES, VerificationReport, default_grid, run_identity_suite

REQUIRED = [
    "semigroup",
    "power-rule",
    "left-inverse",
    "lemma5",
    "lemma6",
    "p0-reduction",
    "q1-limit",
    "hadamard-kernel",
    "integer-consistency",
    "gamma-recurrence",
    "beta-crosscheck",
    "interchange",
    "by-parts",
    "prefactor-consistency",
]


def test_registry_names():
    assert set(REQUIRED) <= set(IDENTITIES)


@pytest.mark.parametrize("name", list(IDENTITIES))
def test_default_grid_passes(name):
    (report,) = run_identity_suite([name])
    assert report.identity_name == name
    assert report.passed == (report.max_rel_err <= report.threshold)
    assert report.passed, [c for c in report.cells if not c.ok or c.rel_err > report.threshold][:3]


def test_empty_inputs():
    assert run_identity_suite([]) == []
    assert run_identity_suite(["semigroup"], grids={"semigroup": []}) == []


def test_unknown_name():
    with pytest.raises(KeyError):
        run_identity_suite(["nosuch"])


def test_registry_order_is_deterministic():
    names = ["gamma-recurrence", "power-rule", "prefactor-consistency"]
    reports = run_identity_suite(list(reversed(names)))
    assert [r.identity_name for r in reports] == [n for n in IDENTITIES if n in names]


def test_failures_are_recorded_not_raised():
    grid = [dict(q=0.5, p=0.0, mu=1.5, alpha=0.5, beta=0.5)]
    (report,) = run_identity_suite(["lemma5"], grids={"lemma5": grid})
    assert not report.passed
    assert report.cells[0].error is not None
    assert math.isinf(report.max_rel_err)


def test_off_lattice_heine_cell_fails():
    grid = [dict(q=0.5, p=0.0, mu=0.3, alpha=1.5, beta=0.5)]
    (report,) = run_identity_suite(["lemma5"], grids={"lemma5": grid})
    assert not report.passed
    assert report.cells[0].error is None


def test_threshold_override():
    grid = default_grid("power-rule")[:2]
    (report,) = run_identity_suite(["power-rule"], grids={"power-rule": grid}, thresholds={"power-rule": 0.0})
    assert report.threshold == 0.0
    assert isinstance(report, VerificationReport)


def test_grids_follow_suite_parameters():
    grid = default_grid("semigroup", q=0.3, p=2.0)
    assert all(c["q"] == 0.3 and c["p"] == 2.0 for c in grid)
    assert any(c["f"] == "t^3.0" for c in grid)
