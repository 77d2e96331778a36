"""Acceptance criteria 1-10, exact comparisons only.

Each test prints a single line ``criterion N: PASS|FAIL ...`` and asserts.
"""

import numpy as np
import pytest

from k3pencils import kernels
from k3pencils.cyclofield import ONE
from k3pencils.fixgeom import geometry
from k3pencils.groups import build_projective_group
from k3pencils.verify import run_scope

CRITERIA = {
    1: ("group orders", ["binary_order.", "group_order."]),
    2: ("ruling fix-lines and base locus", ["ruling.", "base_lines.", "base_s."]),
    3: ("off-quadric fix-line census", ["offquadric."]),
    4: ("base and line point singularities", ["base_points.", "base_lengths.", "base_singularity.", "base_trace.", "line_points.", "line_trace."]),
    5: ("node orbit census", ["nodes.", "ns.", "node_type.", "node_orbits_used."]),
    6: ("block discriminants and rank 19", ["blocks.", "rank.", "snf_consistent."]),
    7: ("glue extension and witnesses", ["glued.", "glue_checks.", "glued_even.", "glued_snf_consistent.", "witness."]),
    8: ("special discriminants and Dynkin components", ["special_det.", "special_rank.", "special_inertia.", "special_component."]),
    9: ("pencil arithmetic", ["ramification.", "ramification_consumed.", "swallow.", "swallowed_curves.", "lambda.", "cross_ratio.", "j.", "orbit_cross_ratio"]),
    10: ("property suites", ["sigma_homomorphism.", "sigma_kernel.", "projective_kernel.", "orbit_stabilizer.", "line_stabilizer_direct.", "glued_even.", "special_even.", "snf_consistent.", "glued_snf_consistent."]),
}


@pytest.fixture(scope="module")
def report():
    return run_scope("all")


def _orthogonal(kind):
    mats = build_projective_group(kind).numerators
    prod = kernels.matmul(np.swapaxes(mats, 1, 2), mats)
    eye = np.zeros_like(prod[0])
    for i in range(4):
        eye[i, i, 0] = 16
    return all(np.array_equal(p, eye) for p in prod)


def _alpha_beta(n):
    geo = geometry(n)
    for o in geo.off_quadric_orbits():
        for key in o.members:
            x = geo.line(key).span[0]
            k = next(i for i in range(4) if not x[i].is_zero())
            for e in geo.line_fixers[key]:
                img = geo.group.matrix(int(e)).apply(x)
                if img[k] / x[k] not in (ONE, -ONE):
                    return False
    return True


def _extra(number):
    if number != 10:
        return []
    out = [(f"orthogonal.{k}", _orthogonal(k)) for k in ("T", "O", "I")]
    out += [(f"alpha_beta.{n}", _alpha_beta(n)) for n in (6, 8, 12)]
    return out


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, report, capsys):
    title, prefixes = CRITERIA[number]
    entries = [e for e in report.entries if any(e.name.startswith(p) for p in prefixes)]
    assert entries, f"no entries for criterion {number}"
    results = [(e.name, e.passed, e.computed, e.expected) for e in entries]
    results += [(name, ok, str(ok), "True") for name, ok in _extra(number)]
    failed = [r for r in results if not r[1]]
    status = "PASS" if not failed else "FAIL"
    detail = f"{len(results) - len(failed)}/{len(results)} checks"
    if failed:
        detail += "; " + ", ".join(f"{name} got {got} want {want}" for name, _, got, want in failed)
    with capsys.disabled():
        print(f"\ncriterion {number}: {status} ({title}) {detail}")
    assert not failed
