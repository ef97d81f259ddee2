import math

import numpy as np
import pytest

from spinphoton import optics as opt
from spinphoton import qstate as qs

SQ = 1.0 / math.sqrt(2.0)
PORTS = ("P", "Q", "S", "T")


def photon_state(pol_name, port):
    regs = [qs.polarization(1), qs.path(1, PORTS)]
    return qs.basis_state(regs, [pol_name, port])


def test_cpbs_routes_by_handedness():
    s = photon_state("R", "P")
    out = opt.apply_cpbs(s, photon=1, in_path="P", r_out="Q", l_out="S")
    assert out.amplitude("R", "Q") == 1.0
    out = opt.apply_cpbs(photon_state("L", "P"), photon=1, in_path="P", r_out="Q", l_out="S")
    assert out.amplitude("L", "S") == 1.0


def test_cpbs_pass_through_port():
    # r_out may coincide with the input: R goes straight on
    out = opt.apply_cpbs(photon_state("R", "P"), photon=1, in_path="P", r_out="P", l_out="Q")
    assert out.amplitude("R", "P") == 1.0


def test_cpbs_is_bidirectional():
    s = photon_state("R", "Q")
    out = opt.apply_cpbs(s, photon=1, in_path="P", r_out="Q", l_out="S")
    assert out.amplitude("R", "P") == 1.0


def test_cpbs4_rank_and_cross():
    kw = dict(photon=1, in_paths=("P", "T"), out_paths=("S", "Q"))
    assert opt.apply_cpbs4(photon_state("R", "P"), **kw).amplitude("R", "S") == 1.0
    assert opt.apply_cpbs4(photon_state("R", "T"), **kw).amplitude("R", "Q") == 1.0
    assert opt.apply_cpbs4(photon_state("L", "P"), **kw).amplitude("L", "Q") == 1.0
    assert opt.apply_cpbs4(photon_state("L", "T"), **kw).amplitude("L", "S") == 1.0


def test_bs_splits_with_i_on_cross_port():
    out = opt.apply_bs(photon_state("R", "P"), photon=1, in_a="P", in_b="Q", out_c="S", out_d="T")
    assert out.amplitude("R", "S") == pytest.approx(SQ)
    assert out.amplitude("R", "T") == pytest.approx(1j * SQ)
    out = opt.apply_bs(photon_state("R", "Q"), photon=1, in_a="P", in_b="Q", out_c="S", out_d="T")
    assert out.amplitude("R", "S") == pytest.approx(1j * SQ)
    assert out.amplitude("R", "T") == pytest.approx(SQ)


def test_bs_in_place_form():
    out = opt.apply_bs(photon_state("L", "P"), photon=1, in_a="P", in_b="Q", out_c="P", out_d="Q")
    assert out.amplitude("L", "P") == pytest.approx(SQ)
    assert out.amplitude("L", "Q") == pytest.approx(1j * SQ)


def test_mach_zehnder_balanced_exits_one_port():
    # BS → BS with no relative phase: photon leaves deterministically on the
    # cross port (the two i factors add up on one side).
    s = photon_state("R", "P")
    s = opt.apply_bs(s, photon=1, in_a="P", in_b="Q", out_c="P", out_d="Q")
    s = opt.apply_bs(s, photon=1, in_a="P", in_b="Q", out_c="P", out_d="Q")
    assert abs(s.amplitude("R", "Q")) == pytest.approx(1.0)
    assert abs(s.amplitude("R", "P")) == pytest.approx(0.0)


def test_mach_zehnder_pi_phase_restores_input_port():
    s = photon_state("R", "P")
    s = opt.apply_bs(s, photon=1, in_a="P", in_b="Q", out_c="P", out_d="Q")
    s = opt.apply_phase(s, photon=1, at="Q", phi=math.pi)
    s = opt.apply_bs(s, photon=1, in_a="P", in_b="Q", out_c="P", out_d="Q")
    assert abs(s.amplitude("R", "P")) == pytest.approx(1.0)


def test_mirror_swaps_handedness_only_at_its_port():
    s = qs.StateVector(
        (qs.polarization(1), qs.path(1, PORTS)),
        np.array([SQ, 0, 0, 0, 0, SQ, 0, 0]),  # R@P + L@Q
    )
    out = opt.apply_mirror(s, photon=1, at="P")
    assert out.amplitude("L", "P") == pytest.approx(SQ)
    assert out.amplitude("L", "Q") == pytest.approx(SQ)


def test_hwp_at_zero_swaps_r_and_l():
    out = opt.apply_hwp(photon_state("R", "P"), photon=1, at="P")
    assert out.amplitude("L", "P") == pytest.approx(1.0)


def test_hwp_angle_phases():
    th = 0.31
    out = opt.apply_hwp(photon_state("R", "P"), photon=1, at="P", theta=th)
    assert out.amplitude("L", "P") == pytest.approx(np.exp(-2j * th))


def test_phase_applies_to_both_polarizations():
    s = qs.StateVector(
        (qs.polarization(1), qs.path(1, PORTS)),
        np.array([SQ, 0, 0, 0, SQ, 0, 0, 0]),  # (R+L)@P
    )
    out = opt.apply_phase(s, photon=1, at="P", phi=math.pi / 2)
    assert out.amplitude("R", "P") == pytest.approx(1j * SQ)
    assert out.amplitude("L", "P") == pytest.approx(1j * SQ)


@pytest.mark.parametrize(
    "build",
    [
        lambda pol, path: opt.cpbs_operator(pol, path, in_path="P", r_out="Q", l_out="S"),
        lambda pol, path: opt.cpbs4_operator(
            pol, path, in_paths=("P", "T"), out_paths=("S", "Q")
        ),
        lambda pol, path: opt.bs_operator(path, in_a="P", in_b="Q", out_c="S", out_d="T"),
        lambda pol, path: opt.bs_operator(path, in_a="P", in_b="Q", out_c="P", out_d="Q"),
        lambda pol, path: opt.mirror_operator(pol, path, at="S"),
        lambda pol, path: opt.hwp_operator(pol, path, at="Q", theta=0.7),
        lambda pol, path: opt.phase_operator(path, at="T", phi=1.234),
    ],
    ids=["cpbs", "cpbs4", "bs", "bs-inplace", "mirror", "hwp", "phase"],
)
def test_every_element_is_unitary(build):
    pol, path = qs.polarization(1), qs.path(1, PORTS)
    assert build(pol, path).is_unitary(atol=1e-12)


def test_elements_preserve_norm_on_random_states():
    rng = np.random.default_rng(99)
    regs = (qs.polarization(1), qs.path(1, PORTS))
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    amps /= np.linalg.norm(amps)
    s = qs.StateVector(regs, amps)
    s = opt.apply_cpbs4(s, photon=1, in_paths=("P", "T"), out_paths=("S", "Q"))
    s = opt.apply_bs(s, photon=1, in_a="P", in_b="Q", out_c="P", out_d="Q")
    s = opt.apply_mirror(s, photon=1, at="S")
    s = opt.apply_phase(s, photon=1, at="P", phi=0.4)
    assert s.norm_sq() == pytest.approx(1.0, abs=1e-12)
