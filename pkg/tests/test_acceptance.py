"""Acceptance suite: one test per criterion, with the stated runtime budgets."""

from cberlab import suite


def _run(fn, limit: float | None = None):
    r = fn()
    status = "PASS" if r.passed else "FAIL"
    print(f"criterion {r.number} [{r.name}]: {status} ({r.seconds:.1f}s) — {r.detail}")
    assert r.passed, r.detail
    if limit is not None:
        assert r.seconds < limit, f"{r.seconds:.1f}s exceeds {limit}s budget"


def test_criterion_1_link_soundness_1000_seeds():
    _run(suite.criterion_1, limit=10.0)


def test_criterion_2_link_vs_exhaustive_oracle():
    _run(suite.criterion_2)


def test_criterion_3_link_extension_chains():
    _run(suite.criterion_3)


def test_criterion_4_lift_axioms():
    _run(suite.criterion_4)


def test_criterion_5_cancellation():
    _run(suite.criterion_5)


def test_criterion_6_tiling_constants():
    _run(suite.criterion_6)


def test_criterion_7_quasi_tiling_bounds():
    # budget is per instance (two instances run inside the criterion)
    _run(suite.criterion_7, limit=120.0)


def test_criterion_8_covering_lemma():
    _run(suite.criterion_8)


def test_criterion_9_tower_bounds():
    _run(suite.criterion_9, limit=120.0)


def test_criterion_10_windowed_choice_link():
    _run(suite.criterion_10)


def test_criterion_11_micro_oracle_link_count():
    _run(suite.criterion_11)
