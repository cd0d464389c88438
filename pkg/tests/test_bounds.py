import math

import numpy as np
import pytest

from eofbounds.bounds import (
    bound_report,
    difference_upper_bound,
    natural_bounds,
    noise_decomposition,
    searched_upper_bound,
    sigma_lower_bound,
)
from eofbounds.entanglement import entanglement_entropy, eof_symmetric
from eofbounds.errors import NonPhysicalStateError, NotPSDError
from eofbounds.geof import geof
from eofbounds.states import (
    CovMat,
    is_physical,
    random_local_symplectic,
    random_standard_form,
    reduced_symmetric,
)
from eofbounds.symplectic import loewner_ge

from conftest import random_psd

SQ02 = math.sqrt(0.2)


# ---------------------------------------------------------------------------
# noise_decomposition
# ---------------------------------------------------------------------------


def test_noise_decomposition_zero():
    v = CovMat.from_standard_form(1.3, 1.6, 0.4, -0.2)
    np.testing.assert_allclose(noise_decomposition(v, v).delta, np.zeros((4, 4)))


def test_noise_decomposition_natural_structure(rng):
    # V_AB = V_AA + 0 (+) (B - A): the A-side state differs by a pure
    # B-block noise term.
    sf = random_standard_form(rng, entangled=True)
    a, b = min(sf.a, sf.b), max(sf.a, sf.b)
    v = CovMat.from_standard_form(a, b, sf.c1, sf.c2)
    target = CovMat.from_standard_form(a, a, sf.c1, sf.c2)
    delta = noise_decomposition(v, target).delta
    np.testing.assert_allclose(delta[:2, :2], np.zeros((2, 2)), atol=1e-14)
    np.testing.assert_allclose(delta[2:, 2:], (b - a) * np.eye(2), atol=1e-14)


def test_noise_decomposition_midpoint_structure(rng):
    # V_BB = sigma + (B - M) (+) (B - M) with M = (A + B)/2.
    sf = random_standard_form(rng)
    a, b = min(sf.a, sf.b), max(sf.a, sf.b)
    m = (a + b) / 2
    v_bb = CovMat.from_standard_form(b, b, sf.c1, sf.c2)
    sigma = CovMat.from_standard_form(m, m, sf.c1, sf.c2)
    delta = noise_decomposition(v_bb, sigma).delta
    np.testing.assert_allclose(delta, (b - m) * np.eye(4), atol=1e-14)


def test_noise_decomposition_rejects_indefinite():
    v = CovMat.from_standard_form(1.2, 1.2, 0.1, 0.0)
    target = CovMat.from_standard_form(1.0, 1.5, 0.1, 0.0)
    with pytest.raises(NotPSDError):
        noise_decomposition(v, target)


# ---------------------------------------------------------------------------
# natural bounds
# ---------------------------------------------------------------------------


def test_natural_bounds_symmetric_collapse(rng):
    v = random_standard_form(rng, symmetric=True).to_covmat()
    nb = natural_bounds(v)
    expected = eof_symmetric(v)
    assert nb.lower == pytest.approx(expected, abs=1e-12)
    assert nb.upper == pytest.approx(expected, abs=1e-12)


def test_natural_bounds_product_state_zero():
    nb = natural_bounds(CovMat.from_standard_form(1.4, 2.0, 0.0, 0.0))
    assert nb.lower == 0.0 and nb.upper == 0.0


def test_natural_bounds_worked_example():
    # a=1.2, b=1.5, c1=-c2=sqrt(0.2): lower state has nu-tilde
    # 1.5-sqrt(0.2) >= 1 (bound 0), upper state 1.2-sqrt(0.2).
    v = CovMat.from_standard_form(1.2, 1.5, SQ02, -SQ02)
    nb = natural_bounds(v)
    assert nb.big_side == "b" and nb.orientation == "raw"
    assert nb.lower == pytest.approx(entanglement_entropy(1.5 - SQ02), abs=1e-12)
    assert nb.lower == 0.0
    assert nb.upper == pytest.approx(entanglement_entropy(1.2 - SQ02), abs=1e-12)
    assert nb.lower <= nb.upper


def test_natural_bounds_unphysical_upper_absent(rng):
    found = False
    for _ in range(3000):
        sf = random_standard_form(rng, entangled=True, min_asymmetry=0.1)
        v = sf.to_covmat()
        nb = natural_bounds(v)
        small = min(sf.a, sf.b)
        upper_state = CovMat.from_standard_form(small, small, sf.c1, sf.c2)
        if not is_physical(upper_state):
            assert nb.upper is None and not nb.upper_physical
            found = True
            break
        assert nb.upper is not None
    assert found


def test_natural_bounds_incomparable_raw_blocks_fall_back(rng):
    # Conjugate so the raw blocks are Loewner incomparable; the standard
    # form still orders the sides.
    found = False
    for _ in range(200):
        sf = random_standard_form(rng, min_asymmetry=0.2)
        v = sf.to_covmat().conjugate(random_local_symplectic(rng))
        a, b = v.block_a, v.block_b
        if not loewner_ge(a, b) and not loewner_ge(b, a):
            nb = natural_bounds(v)
            assert nb.orientation == "standard_form"
            assert nb.big_side == ("b" if sf.b >= sf.a else "a")
            found = True
            break
    assert found


def test_natural_bounds_rejects_unphysical():
    with pytest.raises(NonPhysicalStateError):
        natural_bounds(CovMat.from_standard_form(1.0, 1.0, 0.4, -0.4))


# ---------------------------------------------------------------------------
# sigma bound
# ---------------------------------------------------------------------------


def test_sigma_equals_eof_on_symmetric(rng):
    v = random_standard_form(rng, symmetric=True).to_covmat()
    assert sigma_lower_bound(v) == pytest.approx(eof_symmetric(v), abs=1e-12)


def test_sigma_worked_example():
    v = CovMat.from_standard_form(1.2, 1.5, SQ02, -SQ02)
    assert sigma_lower_bound(v) == pytest.approx(
        entanglement_entropy(1.35 - SQ02), abs=1e-12
    )


def test_sigma_dominates_natural_lower(rng):
    for _ in range(200):
        v = random_standard_form(rng).to_covmat()
        assert sigma_lower_bound(v) >= natural_bounds(v).lower - 1e-9


def test_sigma_state_always_physical(rng):
    for _ in range(500):
        v = random_standard_form(rng).to_covmat()
        assert is_physical(reduced_symmetric(v, "midpoint"))


# ---------------------------------------------------------------------------
# searched upper bound
# ---------------------------------------------------------------------------


def test_searched_upper_symmetric_reaches_eof(rng):
    # The state itself is in the family (m=a, t=1).
    for _ in range(20):
        v = random_standard_form(rng, symmetric=True, entangled=True).to_covmat()
        su = searched_upper_bound(v)
        assert su is not None
        assert su <= eof_symmetric(v) + 1e-12


def test_searched_upper_refinement_monotone(rng):
    for _ in range(20):
        v = random_standard_form(rng, entangled=True).to_covmat()
        s32 = searched_upper_bound(v, steps=32)
        s64 = searched_upper_bound(v, steps=64)
        if s32 is None:
            assert s64 is None or True  # finer grids may become feasible
            continue
        assert s64 is not None
        assert s64 <= s32 + 1e-9


def test_searched_upper_is_valid_upper_bound(rng):
    for _ in range(30):
        v = random_standard_form(rng, entangled=True).to_covmat()
        su = searched_upper_bound(v)
        if su is None:
            continue
        assert geof(v).value <= su + 1e-6


def test_searched_upper_covers_unphysical_natural(rng):
    # When the natural upper state is unphysical, a feasible family point
    # restores an upper bound for some states.
    restored = 0
    examined = 0
    for _ in range(5000):
        sf = random_standard_form(rng, entangled=True, min_asymmetry=0.05)
        v = sf.to_covmat()
        nb = natural_bounds(v)
        if nb.upper_physical:
            continue
        examined += 1
        su = searched_upper_bound(v)
        if su is not None:
            assert geof(v).value <= su + 1e-6
            restored += 1
        if examined >= 40:
            break
    assert examined > 0
    assert restored > 0


# ---------------------------------------------------------------------------
# difference-block diagnostic
# ---------------------------------------------------------------------------


def test_difference_upper_bound_applies():
    # B - A = 1.2 I <= A and the resulting symmetric state is physical.
    v = CovMat.from_standard_form(1.4, 2.6, 0.3, -0.25)
    value = difference_upper_bound(v)
    assert value is not None
    expected = eof_symmetric(CovMat.from_standard_form(1.2, 1.2, 0.3, -0.25))
    assert value == pytest.approx(expected, abs=1e-12)
    assert geof(v).value <= value + 1e-6


def test_difference_upper_bound_unavailable():
    # B - A = 0.4 I: the symmetric state built from it is unphysical.
    assert difference_upper_bound(CovMat.from_standard_form(1.4, 1.8, 0.5, -0.45)) is None
    # B - A not below A: 2.6 - 1.2 = 1.4 > 1.2.
    assert difference_upper_bound(CovMat.from_standard_form(1.2, 2.6, 0.2, -0.1)) is None


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


def test_report_separable_product_state():
    rep = bound_report(CovMat.from_standard_form(1.5, 2.0, 0.0, 0.0))
    assert not rep.entangled
    assert rep.lower_natural == 0.0
    assert rep.lower_sigma == 0.0
    assert rep.upper_natural == 0.0
    assert rep.eeof == 0.0
    assert rep.geof == 0.0
    assert rep.flags.hierarchy_ok


def test_report_symmetric_collapse(rng):
    v = random_standard_form(rng, symmetric=True, entangled=True).to_covmat()
    rep = bound_report(v)
    e = eof_symmetric(v)
    for value in (rep.lower_natural, rep.lower_sigma, rep.upper_natural, rep.eeof):
        assert value == pytest.approx(e, abs=1e-9)
    assert rep.geof == pytest.approx(e, abs=1e-6)
    assert rep.entangled
    assert rep.flags.hierarchy_ok


def test_report_hierarchy_random_states(rng):
    for _ in range(25):
        v = random_standard_form(
            rng, entangled=True, require_physical_upper=True, min_asymmetry=0.02
        ).to_covmat()
        rep = bound_report(v)
        assert rep.flags.hierarchy_ok, rep.flags.violations
        assert rep.lower_natural <= rep.lower_sigma + 1e-9
        assert rep.lower_sigma <= rep.geof + 1e-6
        assert rep.geof <= rep.upper_natural + 1e-6
        assert rep.lower_natural - 1e-9 <= rep.eeof <= rep.upper_natural + 1e-9


def test_report_monotone_under_noise(rng):
    for _ in range(15):
        v = random_standard_form(rng, entangled=True).to_covmat()
        noisy = CovMat(v.matrix + random_psd(rng, scale=0.2))
        r1 = bound_report(v, include_searched=False)
        r2 = bound_report(noisy, include_searched=False)
        assert r2.eeof <= r1.eeof + 1e-12
        assert r2.geof <= r1.geof + 2e-6


def test_geof_sandwiched_by_comparable_symmetric_states(rng):
    # For physical V_MM <= V_AB <= V_NN sharing the correlation block,
    # eof(NN) <= geof(V_AB) <= eof(MM) within the optimizer tolerance.
    count = 0
    while count < 25:
        sf = random_standard_form(rng, symmetric=True, entangled=True)
        m, c1, c2 = sf.a, sf.c1, sf.c2
        a = m + rng.uniform(0.0, 0.6)
        b = a + rng.uniform(0.0, 0.6)
        n = b + rng.uniform(0.0, 0.6)
        v_ab = CovMat.from_standard_form(a, b, c1, c2)
        upper = eof_symmetric(CovMat.from_standard_form(m, m, c1, c2))
        lower = eof_symmetric(CovMat.from_standard_form(n, n, c1, c2))
        g = geof(v_ab).value
        assert lower - 1e-9 <= g <= upper + 1e-6
        count += 1


def test_sigma_is_best_channel_lower_bound(rng):
    # Any symmetric block M' >= sigma's midpoint block cannot produce a
    # tighter channel-compatible lower bound: its symmetric state has
    # EoF <= the midpoint value (randomized counterexample search).
    eps = 1e-6
    for _ in range(100):
        sf = random_standard_form(rng, entangled=True)
        v = sf.to_covmat()
        mid = (v.block_a + v.block_b) / 2.0
        bump = random_psd(rng, n=2, scale=0.3)
        candidate = CovMat.from_blocks(
            mid + bump + eps * np.eye(2), mid + bump + eps * np.eye(2), v.block_c
        )
        delta_ok = loewner_ge(v.matrix, candidate.matrix)
        value_ok = eof_symmetric(candidate) <= sigma_lower_bound(v) + 1e-9
        assert (not delta_ok) or value_ok


def test_report_rejects_unphysical():
    with pytest.raises(NonPhysicalStateError):
        bound_report(CovMat.from_standard_form(1.0, 1.0, 0.4, -0.4))
