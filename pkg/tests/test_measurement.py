import math

import numpy as np
import pytest

from spinphoton import measurement as meas
from spinphoton import qstate as qs

SQ = 1.0 / math.sqrt(2.0)


def bell_pol_state():
    regs = (qs.polarization(1), qs.polarization(2))
    return qs.StateVector(regs, np.array([0, SQ, SQ, 0]))  # (RL + LR)/√2


def rec(*photons, spin=None):
    return meas.OutcomeRecord(
        photons=tuple((i + 1, p) for i, p in enumerate(photons)), spin=spin
    )


def pol(name):
    return meas.PhotonOutcome(pol=name)


def test_enumerate_circular_basis():
    dist = meas.enumerate_outcomes(
        bell_pol_state(), meas.MeasurementBases(pol={1: "RL", 2: "RL"})
    )
    assert dist[rec(pol("R"), pol("L"))] == pytest.approx(0.5)
    assert dist[rec(pol("L"), pol("R"))] == pytest.approx(0.5)
    assert len(dist) == 2
    assert dist.total() == pytest.approx(1.0)


def test_enumerate_linear_basis():
    # (RL+LR)/√2 = (HH+VV)/√2: perfectly correlated H/V clicks
    dist = meas.enumerate_outcomes(
        bell_pol_state(), meas.MeasurementBases(pol={1: "HV", 2: "HV"})
    )
    assert dist[rec(pol("H"), pol("H"))] == pytest.approx(0.5)
    assert dist[rec(pol("V"), pol("V"))] == pytest.approx(0.5)
    assert len(dist) == 2


def test_unmeasured_registers_are_traced_out():
    dist = meas.enumerate_outcomes(bell_pol_state(), meas.MeasurementBases(pol={1: "RL"}))
    assert dist[rec(pol("R"))] == pytest.approx(0.5)
    assert dist[rec(pol("L"))] == pytest.approx(0.5)


def test_spin_and_port_outcomes():
    regs = (qs.spin(), qs.polarization(1), qs.path(1, ("C", "D")))
    s = qs.StateVector(regs, np.array([SQ, 0, 0, 0, 0, 0, 0, SQ]))  # ↑R@C + ↓L@D
    bases = meas.MeasurementBases(pol={1: "RL"}, ports={1}, spin="UpDown")
    dist = meas.enumerate_outcomes(s, bases)
    up = meas.OutcomeRecord(((1, meas.PhotonOutcome(port="C", pol="R")),), spin="Up")
    assert dist[up] == pytest.approx(0.5)


def test_lost_photons_aggregate():
    regs = (qs.polarization(1), qs.path(1, ("C", "D")), qs.loss_flag(1))
    # alive R@C with weight 1/2; lost amplitude spread over two microstates
    amps = np.zeros(8, dtype=complex)
    amps[0] = SQ  # R, C, Alive
    amps[1] = 0.5  # R, C, Lost
    amps[7] = 0.5  # L, D, Lost
    s = qs.StateVector(regs, amps)
    dist = meas.enumerate_outcomes(s, meas.MeasurementBases(pol={1: "RL"}, ports={1}))
    lost = meas.OutcomeRecord(((1, meas.PhotonOutcome(lost=True)),))
    assert dist[lost] == pytest.approx(0.5)
    assert len(dist) == 2


def test_lost_outcome_forbids_port():
    with pytest.raises(ValueError):
        meas.PhotonOutcome(port="C", lost=True)


def test_sample_is_deterministic_and_complete():
    s = bell_pol_state()
    bases = meas.MeasurementBases(pol={1: "RL", 2: "RL"})
    counts = meas.sample(s, bases, 1000, seed=7)
    again = meas.sample(s, bases, 1000, seed=7)
    assert counts == again
    assert sum(counts.values()) == 1000
    other = meas.sample(s, bases, 1000, seed=8)
    assert other != counts


def test_sample_rejects_subnormalized_states():
    regs = (qs.polarization(1),)
    s = qs.StateVector(regs, np.array([0.5, 0.0]))
    with pytest.raises(ValueError, match="unit-norm"):
        meas.sample(s, meas.MeasurementBases(pol={1: "RL"}), 10, seed=0)


def test_sampled_frequencies_approach_born_weights():
    s = bell_pol_state()
    bases = meas.MeasurementBases(pol={1: "HV", 2: "HV"})
    n = 200_000
    counts = meas.sample(s, bases, n, seed=123)
    empirical = {k: v / n for k, v in counts.items()}
    exact = meas.enumerate_outcomes(s, bases)
    assert meas.total_variation(empirical, dict(exact)) < 0.01


def test_total_variation_bounds():
    a = {rec(pol("H")): 1.0}
    b = {rec(pol("V")): 1.0}
    assert meas.total_variation(a, a) == 0.0
    assert meas.total_variation(a, b) == pytest.approx(1.0)


def test_shard_rng_streams():
    s0 = meas.shard_rng(42, 0).random(5)
    s0_again = meas.shard_rng(42, 0).random(5)
    s1 = meas.shard_rng(42, 1).random(5)
    assert np.array_equal(s0, s0_again)
    assert not np.array_equal(s0, s1)


def test_bases_validate_names():
    with pytest.raises(ValueError):
        meas.MeasurementBases(pol={1: "XY"})
    with pytest.raises(ValueError):
        meas.MeasurementBases(spin="Sideways")
