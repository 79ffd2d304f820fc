import re

import numpy as np
import pytest

from gmsphere import checks


def test_every_check_has_an_anchor_and_valid_kind():
    assert len(checks.REGISTRY) > 40
    for c in checks.REGISTRY.values():
        assert c.anchor and c.kind in checks.KINDS
        assert not re.search(r"§|\b(eq|equation|section|lemma|theorem)\b\.?\s*\d", c.anchor, re.I)


def test_ids_are_grouped_by_module():
    prefixes = {cid.split(".")[0] for cid in checks.REGISTRY}
    assert prefixes == {"algebra", "sp2", "brieskorn", "diffeo", "actions", "riemann", "quotients"}


def test_streams_depend_on_seed_and_id_only():
    a = checks.stream(42, "diffeo.round_trip").standard_normal(4)
    b = checks.stream(42, "diffeo.round_trip").standard_normal(4)
    c = checks.stream(42, "diffeo.span").standard_normal(4)
    d = checks.stream(43, "diffeo.round_trip").standard_normal(4)
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a, c) and not np.allclose(a, d)


def test_runs_are_deterministic():
    check = checks.REGISTRY["actions.cocycle"]
    r1 = checks.run(check, seed=7, samples=20)
    r2 = checks.run(check, seed=7, samples=20)
    assert r1.outcome == r2.outcome


def test_select():
    ids = [c.id for c in checks.select(["diffeo.*"])]
    assert ids and all(i.startswith("diffeo.") for i in ids)
    assert len(checks.select(None)) == len(checks.REGISTRY)
    with pytest.raises(KeyError):
        checks.select(["nothing.*"])


def test_tolerance_override_changes_verdict():
    check = checks.REGISTRY["diffeo.span"]
    assert checks.run(check, samples=10).passed
    assert not checks.run(check, samples=10, tolerance=0.0).passed


def test_pass_rules():
    below = checks.REGISTRY["diffeo.span"]
    above = checks.REGISTRY["actions.nonlinear"]
    exact = checks.REGISTRY["quotients.phi_deck"]
    assert below.passes(0.5, 1.0) and not below.passes(1.0, 1.0)
    assert above.passes(2.0, 1.0) and not above.passes(1.0, 1.0)
    assert exact.passes(0.0, 0.0) and not exact.passes(1e-300, 0.0)
    assert not below.passes(float("nan"), 1.0) and not above.passes(float("inf"), 1.0)


def test_grid_override_reaches_the_check():
    r = checks.run(checks.REGISTRY["riemann.l3"], grid=[(1.0, 0.5)])
    assert r.passed and "(1,0.5)" in r.outcome.detail


@pytest.mark.parametrize("check_id", [c for c in checks.REGISTRY
                                      if c not in {"quotients.freeness", "riemann.sigma32_frontier",
                                                   "riemann.sigma32_ambient"}])
def test_each_check_passes_with_few_samples(check_id):
    check = checks.REGISTRY[check_id]
    samples = min(check.default_samples, 5)
    if check_id == "riemann.sigma32_extremes":
        samples = 12
    assert checks.run(check, seed=3, samples=samples).passed
