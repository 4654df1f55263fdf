from __future__ import annotations

import json

import numpy as np
import pytest

from conjtype.canonicalize import canonical_plane
from conjtype.forms import breadths, full_lambda2, quotient
from conjtype.harness import (
    TARGETS,
    VerificationError,
    VerificationReport,
    plane_orbit,
    quotient_breadth_scan,
    run_verification,
    verify_lemma4,
    verify_lemma7,
)
from conjtype.linalg import Subspace, all_vectors, enumerate_subspaces


@pytest.mark.parametrize("p,k", [(3, 1), (2, 2), (3, 2)])
def test_scan_matches_quotient_breadths(p, k):
    B = full_lambda2(4, p)
    subs = list(enumerate_subspaces(6, k, p))
    rng = np.random.default_rng(k)
    picked = [subs[i] for i in rng.choice(len(subs), size=40, replace=False)]
    lo, hi = quotient_breadth_scan(B, np.stack([U.basis for U in picked]))
    X = all_vectors(4, p)[1:]
    for U, a, b in zip(picked, lo, hi):
        br = breadths(quotient(B, U), X)
        assert (a, b) == (br.min(), br.max())


def test_lemma4_reports():
    rep = verify_lemma4(3, 4)
    assert rep.verdict == "verified" and rep.exit_code == 0
    counts = {r.anchor: r.counts for r in rep.records}
    assert counts["lemma4-accept-set"]["accepted_brute_force"] == 234
    assert counts["lemma4-decomposable"]["rejected"] == 130
    assert counts["lemma4-m-census"] == {"m=2": 234}
    rep = verify_lemma4(2, 5)
    assert rep.passed
    counts = {r.anchor: r.counts for r in rep.records}
    # 1023 lines, 155 of them decomposable
    assert counts["lemma4-m-census"] == {"m=2": 1023 - 155}


def test_json_is_byte_deterministic():
    a = run_verification("lemma4", p=2, n=4).to_json()
    b = run_verification("lemma4", p=2, n=4).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["verdict"] == "verified" and doc["params"] == {"p": 2, "n": 4}
    assert all("runtime_s" not in r for r in doc["records"])
    timed = json.loads(run_verification("lemma4", p=2, n=4).to_json(with_runtime=True))
    assert all("runtime_s" in r for r in timed["records"])


def test_small_budget_is_incomplete_not_failed():
    rep = verify_lemma7(3, budget=10)
    assert rep.verdict == "incomplete" and rep.exit_code == 2
    assert rep.records and rep.passed  # the family check still runs
    assert any("over the budget" in n for n in rep.notes)


def test_failed_verdict():
    rep = VerificationReport("lemma4", {"p": 3}, {})
    rep.record("a claim", "anchor-a", True)
    rep.record("another claim", "anchor-b", False, witness="1,0,0,0,0,0")
    assert rep.verdict == "failed" and rep.exit_code == 1
    text = rep.to_text()
    assert "[FAIL] anchor-b" in text and "witness: 1,0,0,0,0,0" in text


def test_plane_orbit_of_p2_normal_form():
    orbit = plane_orbit(canonical_plane(2))
    assert len(orbit) == 56
    assert canonical_plane(2) in orbit
    assert Subspace.from_rows([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]], 2) not in orbit


@pytest.mark.parametrize(
    "target,kw",
    [
        ("lemma5", {}),
        ("lemma4", {"p": 7}),
        ("lemma4", {"p": 3, "n": 3}),
        ("lemma7", {"p": 2}),
        ("lemma7", {"n": 4}),
        ("lemma10", {"p": 3}),
        ("theorem1", {"p": 2}),
        ("theorem2", {"p": 3}),
    ],
)
def test_bad_parameters(target, kw):
    with pytest.raises(VerificationError):
        run_verification(target, **kw)


def test_targets_listed():
    assert TARGETS == ("lemma4", "lemma7", "lemma10", "theorem1", "theorem2")
