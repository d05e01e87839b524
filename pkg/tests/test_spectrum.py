import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnon_qrm import spectrum as sp
from magnon_qrm.errors import AmbiguityError, ConvergenceError, NotFoundError, ParameterError
from magnon_qrm.model import ModelParams, QubitParams

TWO_EXC_REFS = ("1,ggg", ("0,eeg", "0,ege", "0,gee"))


def distinct(omega0=3.0, n_max=8):
    qs = (QubitParams(0.95, 0.1, 0.05), QubitParams(1.0, 0.08, 0.1), QubitParams(1.1, 0.12, 0.07))
    return ModelParams(omega0, qs, n_max)


def test_uncoupled_levels_have_integer_slopes():
    p = ModelParams.identical(1.0, 0.0, 0.0, n_max=6)
    s = sp.sweep(p, (2.3, 2.7), 5, 30, check=False)
    # levels cross, so compare sorted sets of slopes against the sorted bare energies
    qubit = [0.5 * sum(2 * b - 1 for b in bits) for bits in itertools.product((0, 1), repeat=3)]
    E = np.sort([[n * w + e for n in range(7) for e in qubit] for w in s.omega0_grid], axis=1)
    assert s.levels == pytest.approx(E[:, :30], abs=1e-12)
    slopes = np.diff(s.levels, axis=0) / np.diff(s.omega0_grid)[:, None]
    assert np.allclose(slopes, np.round(slopes), atol=1e-9)


def test_continuity_bound():
    p = ModelParams.identical(1.0, 0.1, 0.1, n_max=8)
    s = sp.sweep(p, (0.5, 3.5), 301, 16, check=False)
    step = s.omega0_grid[1] - s.omega0_grid[0]
    # dE_k/domega0 = <a^dag a> <= n_max
    assert np.max(np.abs(np.diff(s.levels, axis=0))) <= p.n_max * step + 1e-12


def test_qubit_permutation_invariance():
    p = distinct()
    base = sp.eigvalsh_levels(p)
    for order in ((1, 0, 2), (2, 1, 0), (1, 2, 0)):
        assert sp.eigvalsh_levels(p.permuted(order)) == pytest.approx(base, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 5.0))
def test_energy_scale_covariance(lam):
    p = distinct(n_max=5)
    q = ModelParams(lam * p.omega0, tuple(QubitParams(lam * x.omega_q, lam * x.g_R, lam * x.g_CR)
                                          for x in p.qubits), p.n_max)
    assert sp.eigvalsh_levels(q) == pytest.approx(lam * sp.eigvalsh_levels(p), rel=1e-10, abs=1e-10 * lam)


def test_gap_invariant_under_qubit_relabelling():
    p = distinct(n_max=8)
    ref = sp.find_gap(p, (2.95, 3.1), check=False)
    perm = sp.find_gap(p.permuted((2, 0, 1)), (2.95, 3.1), check=False)
    assert perm.min_gap == pytest.approx(ref.min_gap, rel=1e-6)
    assert perm.omega0_star == pytest.approx(ref.omega0_star, abs=1e-8)


def test_two_excitation_intersection_is_a_crossing():
    p = ModelParams.identical(2.0, 0.1, 0.1)
    feat = sp.find_gap(p, (1.85, 2.05), refs=TWO_EXC_REFS)
    assert feat.kind == "crossing"
    assert feat.min_gap < sp.CROSSING_THRESHOLD


def test_three_excitation_intersection_is_an_anticrossing():
    p = ModelParams.identical(3.0, 0.1, 0.1)
    feat = sp.find_gap(p, (2.95, 3.02))
    assert feat.kind == "anticrossing"
    assert 2.97 < feat.omega0_star < 3.0
    assert feat.min_gap == pytest.approx(2 * 27 / 32 * 0.1**5, rel=0.05)


def test_without_counter_rotating_terms_the_levels_cross():
    p = ModelParams.identical(3.0, 0.1, 0.0)
    feat = sp.find_gap(p, (2.95, 3.02))
    assert feat.kind == "crossing"
    with pytest.raises(ParameterError):
        sp.extract_geff(p)


def test_gap_linear_in_small_counter_rotating_coupling():
    g1, _ = sp.extract_geff(ModelParams.identical(3.0, 0.1, 0.02))
    g2, _ = sp.extract_geff(ModelParams.identical(3.0, 0.1, 0.04))
    assert 1.9 <= g2 / g1 <= 2.1


def test_zero_tuning_suppresses_coupling():
    equal, _ = sp.extract_geff(ModelParams.identical(3.0, 0.05, 0.05))
    tuned, _ = sp.extract_geff(ModelParams.identical(3.0, 0.05, 0.1))
    assert equal / tuned >= 10


def test_rabi_pair_sign_matches_extraction(equal_coupling):
    p, geff = equal_coupling
    signed, E, V, (a, b) = sp.rabi_pair(p)
    assert abs(signed) == pytest.approx(geff, rel=1e-6)
    assert signed > 0


def test_not_found():
    with pytest.raises(NotFoundError):
        sp.find_gap(ModelParams.identical(3.0, 0.1, 0.1), (2.5, 2.7))


def test_ambiguous_window():
    # sorted levels 4 and 5 approach each other twice in this window
    p = ModelParams.identical(3.0, 0.1, 0.1, n_max=6)
    with pytest.raises(AmbiguityError, match="2 intersections"):
        sp.find_gap(p, (0.5, 3.5), level_pair=(4, 5), n_scan=301, check=False)


def test_truncation_too_small_is_reported():
    p = ModelParams.identical(1.0, 0.3, 0.3, n_max=2)
    with pytest.raises(ConvergenceError, match="n_max"):
        sp.sweep(p, (0.5, 3.5), 5, 16)


def test_sweep_validation():
    p = ModelParams.identical(1.0, 0.1, 0.1, n_max=4)
    with pytest.raises(ParameterError):
        sp.sweep(p, (2.0, 1.0), 5, 4)
    with pytest.raises(ParameterError):
        sp.sweep(p, (1.0, 2.0), 5, 10_000)


def test_csv_format():
    p = ModelParams.identical(1.0, 0.1, 0.1, n_max=4)
    s = sp.sweep(p, (1.0, 2.0), 3, 4, check=False)
    lines = s.to_csv().splitlines()
    assert lines[0] == "omega0,E_0,E_1,E_2,E_3"
    assert len(lines) == 4
    assert float(lines[2].split(",")[0]) == 1.5
    assert [float(x) for x in lines[1].split(",")[1:]] == list(s.levels[0])


def test_fit_needs_enough_points():
    p = ModelParams.identical(3.0, 0.1, 0.1)
    with pytest.raises(ParameterError):
        sp.fit_geff_surface(p, [0.1, 0.2], [0.1])
    with pytest.raises(ParameterError):
        sp.fit_geff_surface(p, [0.08, 0.1], [0.1])
