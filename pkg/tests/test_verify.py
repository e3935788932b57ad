import pytest

from cpdist.serialize import dumps
from cpdist.verify import FAMILIES, TOLERANCE_DEFAULTS, run_batch, run_instance


def test_families_cover_all_certificates():
    assert set(FAMILIES) == {
        "continuity", "triangle", "monotonicity",
        "consistency", "mixture", "reflection",
    }


def test_run_instance_each_family_passes():
    for family in sorted(FAMILIES):
        rec = run_instance(family, d=2, n=2, m=None, seed=2026)
        assert rec["passed"], (family, rec)
        assert rec["family"] == family
        assert rec["seed"] == 2026
        assert rec["worst_slack"] >= 0.0
        assert "details" in rec


def test_run_instance_is_deterministic():
    a = run_instance("continuity", d=2, n=2, m=2, seed=5)
    b = run_instance("continuity", d=2, n=2, m=2, seed=5)
    assert a == b


def test_run_instance_rejects_unknown_inputs():
    with pytest.raises(ValueError):
        run_instance("entropy", d=2, n=2, m=None, seed=0)
    with pytest.raises(ValueError):
        run_instance("continuity", d=2, n=2, m=None, seed=0,
                     tolerances={"wat": 1e-5})


def test_impossible_tolerance_fails_with_margins():
    rec = run_instance("continuity", d=2, n=2, m=2, seed=3,
                       tolerances={"witness": 1e-12})
    # a 1e-12 witness gate is below the solver's accuracy: must fail honestly
    assert not rec["passed"]
    assert rec["worst_slack"] < 0.0
    assert rec["details"]["margins"]["witness"] < 0.0


def test_run_batch_aggregates():
    families = ["mixture", "reflection"]
    summary = run_batch(families, d=2, n=2, m=None, seed=40, count=3)
    assert summary["passed"] == 6
    assert summary["failed"] == 0
    assert summary["config"]["seed"] == 40
    assert summary["config"]["tolerances"] == TOLERANCE_DEFAULTS
    for fam in families:
        rec = summary["families"][fam]
        assert rec["passed"] == 3 and rec["failed"] == 0
        seeds = [inst["seed"] for inst in rec["instances"]]
        assert seeds == [40, 41, 42]
        assert rec["worst_slack"] >= 0.0
    with pytest.raises(ValueError):
        run_batch(families, d=2, n=2, m=None, seed=0, count=0)


def test_batch_summaries_are_serializable():
    summary = run_batch(["consistency"], d=2, n=2, m=2, seed=9, count=2)
    text = dumps(summary)
    assert '"consistency"' in text


def test_rectangular_instances_pass():
    # non-square case: maps from 3x3 into 2x2 matrices
    for family in ("continuity", "triangle", "consistency"):
        rec = run_instance(family, d=3, n=2, m=2, seed=77)
        assert rec["passed"], (family, rec)
