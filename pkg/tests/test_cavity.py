import math

import numpy as np
import pytest

from spinphoton import cavity as cav
from spinphoton import qstate as qs


# ---------------------------------------------------------------------------
# scattering coefficients
# ---------------------------------------------------------------------------


def test_gamma_rate():
    p = cav.CavityParams(delta_omega=0.0, delta=0.0, kappa=8.0, g=2.0)
    assert p.gamma == pytest.approx(1.0)


def test_empty_resonant_cavity_transmits_with_pi_phase():
    p = cav.CavityParams(delta_omega=0.0, delta=0.0, kappa=1.0, g=0.0)
    c = cav.scatter_coefficients(p)
    assert c.xi == 0
    assert c.r == pytest.approx(0.0)
    assert c.t == pytest.approx(-1.0)


def test_coupled_resonant_cavity_reflects_perfectly():
    p = cav.CavityParams(delta_omega=0.0, delta=0.0, kappa=1.0, g=0.3)
    c = cav.scatter_coefficients(p)
    assert c.xi_infinite
    assert c.r == pytest.approx(1.0)
    assert c.t == pytest.approx(0.0)


def test_unit_xi_point():
    # Δω = κ, δ = 0, g = 0 puts the dimensionless detuning at exactly 1.
    p = cav.CavityParams(delta_omega=2.5, delta=0.0, kappa=2.5, g=0.0)
    c = cav.scatter_coefficients(p)
    assert c.xi == pytest.approx(1.0)
    assert c.r == pytest.approx((1.0 + 1.0j) / 2.0)
    assert c.t == pytest.approx(-(1.0 - 1.0j) / 2.0)


@pytest.mark.parametrize("delta_omega", [-3.0, -0.7, 0.01, 0.4, 1.0, 5.0])
@pytest.mark.parametrize("g", [0.0, 0.2, 1.1])
def test_reflection_is_one_plus_transmission(delta_omega, g):
    p = cav.CavityParams(delta_omega=delta_omega, delta=0.13, kappa=0.9, g=g)
    c = cav.scatter_coefficients(p)
    assert c.r == pytest.approx(1.0 + c.t, abs=1e-12)
    # |r|² + |t|² ≤ 1 with equality only at the lossless points
    assert abs(c.r) ** 2 + abs(c.t) ** 2 <= 1.0 + 1e-12


def test_kappa_must_be_positive():
    with pytest.raises(ValueError):
        cav.CavityParams(delta_omega=0.0, delta=0.0, kappa=0.0, g=0.1)


# ---------------------------------------------------------------------------
# transmission contrast
# ---------------------------------------------------------------------------


def test_quality_ratio_from_measured_losses():
    # mirror 13.9 /cm against 1.7 /cm scattering and 0.0017 /cm radiation
    q2 = cav.quality_ratio_from_losses(13.9, 1.7, 0.0017)
    assert q2 == pytest.approx(0.79375, abs=5e-5)


def test_contrast_at_operating_point():
    c = cav.ContrastParams(q_ratio_sq=0.8, purcell=6.0)
    # 0.8 · (1 − 1/49) = 38.4/49
    assert cav.transmission_contrast(c) == pytest.approx(38.4 / 49.0, abs=1e-12)


def test_contrast_grows_with_purcell():
    deltas = [
        cav.transmission_contrast(cav.ContrastParams(q_ratio_sq=0.8, purcell=fp))
        for fp in (0.5, 1.0, 2.0, 6.0, 20.0)
    ]
    assert deltas == sorted(deltas)
    assert deltas[-1] < 0.8  # bounded by (Q/Q₀)²


def test_model_contrast_matches_figure_of_merit():
    c = cav.ContrastParams(q_ratio_sq=0.8, purcell=6.0)
    model = cav.InteractionModel.from_contrast(c)
    assert model.contrast == pytest.approx(cav.transmission_contrast(c), abs=1e-12)


# ---------------------------------------------------------------------------
# interaction models
# ---------------------------------------------------------------------------


def test_ideal_model_amplitudes():
    m = cav.InteractionModel.ideal()
    assert (
        m.coupled_reflect_amp,
        m.coupled_transmit_amp,
        m.uncoupled_transmit_amp,
        m.uncoupled_reflect_amp,
    ) == (1.0, 0.0, 1.0, 0.0)
    assert m.is_lossless


def test_from_contrast_reduces_to_ideal_in_the_perfect_limit():
    m = cav.InteractionModel.from_contrast(
        cav.ContrastParams(q_ratio_sq=1.0, purcell=1e9)
    )
    assert m.coupled_reflect_amp == pytest.approx(1.0, abs=1e-8)
    assert m.uncoupled_transmit_amp == pytest.approx(1.0)
    assert m.uncoupled_reflect_amp == pytest.approx(0.0)


def test_overcomplete_branch_rejected():
    with pytest.raises(ValueError, match="exceeds 1"):
        cav.InteractionModel(cav.InteractionMode.LOSSY, 0.9, 0.3, 1.0, 0.0)


def test_interpolation_endpoints_and_midpoint():
    lossy = cav.InteractionModel.from_contrast(cav.ContrastParams(0.8, 6.0))
    start = cav.interpolate_models(cav.InteractionModel.ideal(), lossy, 0.0)
    assert start.mode is cav.InteractionMode.IDEAL
    end = cav.interpolate_models(cav.InteractionModel.ideal(), lossy, 1.0)
    assert end.coupled_transmit_amp == pytest.approx(lossy.coupled_transmit_amp)
    mid = cav.interpolate_models(cav.InteractionModel.ideal(), lossy, 0.5)
    assert mid.uncoupled_transmit_amp == pytest.approx(
        (1.0 + lossy.uncoupled_transmit_amp) / 2.0
    )


# ---------------------------------------------------------------------------
# one-sided scattering rules
# ---------------------------------------------------------------------------

PATHS = ("In", "Refl", "Trans")


def scatter_input(pol, spin_name, arrive_from):
    regs = [qs.spin(), qs.polarization(1), qs.path(1, PATHS)]
    state = qs.basis_state(regs, [spin_name, pol, "In"])
    return cav.ideal_scatter(
        state,
        photon=1,
        in_path="In",
        reflect_path="Refl",
        transmit_path="Trans",
        arrive_from=arrive_from,
    )


# (arrive_from, pol, spin) -> (out_pol, out_port, sign): the eight selection rules.
RULES = [
    ("below", "R", "Up", "L", "Refl", +1),
    ("below", "R", "Down", "R", "Trans", -1),
    ("below", "L", "Up", "L", "Trans", -1),
    ("below", "L", "Down", "R", "Refl", +1),
    ("above", "R", "Up", "R", "Trans", -1),
    ("above", "R", "Down", "L", "Refl", +1),
    ("above", "L", "Up", "R", "Refl", +1),
    ("above", "L", "Down", "L", "Trans", -1),
]


@pytest.mark.parametrize("arrive_from,pol,spin_name,out_pol,out_port,sign", RULES)
def test_selection_rules(arrive_from, pol, spin_name, out_pol, out_port, sign):
    out = scatter_input(pol, spin_name, arrive_from)
    assert out.amplitude(spin_name, out_pol, out_port) == pytest.approx(sign)
    assert out.norm_sq() == pytest.approx(1.0)


def test_superposed_spin_entangles_with_photon():
    # |L, from above⟩ ⊗ (|↑⟩+|↓⟩)/√2 → (|R,Refl,↑⟩ − |L,Trans,↓⟩)/√2
    regs = [qs.spin(), qs.polarization(1), qs.path(1, PATHS)]
    sq = 1.0 / math.sqrt(2.0)
    state = qs.tensor(
        qs.from_amplitudes(qs.spin(), [sq, sq]),
        qs.basis_state(regs[1:], ["L", "In"]),
    )
    out = cav.ideal_scatter(
        state,
        photon=1,
        in_path="In",
        reflect_path="Refl",
        transmit_path="Trans",
        arrive_from="above",
    )
    assert out.amplitude("Up", "R", "Refl") == pytest.approx(sq)
    assert out.amplitude("Down", "L", "Trans") == pytest.approx(-sq)


def test_ideal_scatter_is_unitary_on_random_states():
    rng = np.random.default_rng(42)
    regs = (qs.spin(), qs.polarization(1), qs.path(1, PATHS))
    op = cav.one_sided_operator(
        cav.InteractionModel.ideal(),
        pol=regs[1],
        path=regs[2],
        spin=regs[0],
        in_path="In",
        reflect_path="Refl",
        transmit_path="Trans",
    )
    assert op.is_unitary()
    for _ in range(25):
        amps = rng.normal(size=12) + 1j * rng.normal(size=12)
        amps /= np.linalg.norm(amps)
        s = qs.StateVector(regs, amps)
        assert qs.apply(op, s).norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_scatter_twice_is_identity():
    rng = np.random.default_rng(5)
    regs = (qs.spin(), qs.polarization(1), qs.path(1, PATHS))
    amps = rng.normal(size=12) + 1j * rng.normal(size=12)
    amps /= np.linalg.norm(amps)
    s = qs.StateVector(regs, amps)
    kw = dict(photon=1, in_path="In", reflect_path="Refl", transmit_path="Trans")
    back = cav.ideal_scatter(cav.ideal_scatter(s, **kw), **kw)
    assert np.allclose(back.amps, s.amps, atol=1e-12)


# ---------------------------------------------------------------------------
# lossy scattering
# ---------------------------------------------------------------------------


@pytest.fixture
def lossy_model():
    return cav.InteractionModel.from_contrast(cav.ContrastParams(0.8, 6.0))


def test_lossy_branch_probabilities(lossy_model):
    regs = [qs.spin(), qs.polarization(1), qs.path(1, PATHS), qs.loss_flag(1)]
    state = qs.basis_state(regs, ["Up", "R", "In", "Alive"])  # coupled branch
    out = cav.lossy_scatter(
        state,
        lossy_model,
        photon=1,
        in_path="In",
        reflect_path="Refl",
        transmit_path="Trans",
    )
    cr, ct = lossy_model.coupled_reflect_amp, lossy_model.coupled_transmit_amp
    assert out.amplitude("Up", "L", "Refl", "Alive") == pytest.approx(cr)
    assert out.amplitude("Up", "R", "Trans", "Alive") == pytest.approx(-ct)
    _, lost_p = qs.project(out, (qs.RegisterKind.LOSS_FLAG, 1), "Lost")
    assert lost_p == pytest.approx(1.0 - cr * cr - ct * ct, abs=1e-12)
    assert out.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_lossy_operator_is_exactly_unitary(lossy_model):
    regs = (qs.spin(), qs.polarization(1), qs.path(1, PATHS), qs.loss_flag(1))
    op = cav.one_sided_operator(
        lossy_model,
        pol=regs[1],
        path=regs[2],
        spin=regs[0],
        flag=regs[3],
        in_path="In",
        reflect_path="Refl",
        transmit_path="Trans",
    )
    assert op.is_unitary(atol=1e-12)
    # the reflection construction makes even the lossy pass an involution
    assert np.allclose(op.matrix @ op.matrix, np.eye(op.dim), atol=1e-12)


def test_lossy_model_without_flag_register_is_an_error(lossy_model):
    regs = [qs.spin(), qs.polarization(1), qs.path(1, PATHS)]
    state = qs.basis_state(regs, ["Up", "R", "In"])
    with pytest.raises(KeyError):
        cav.lossy_scatter(
            state,
            lossy_model,
            photon=1,
            in_path="In",
            reflect_path="Refl",
            transmit_path="Trans",
        )


# ---------------------------------------------------------------------------
# two-arm (interferometer) pass
# ---------------------------------------------------------------------------

ARMS = ("A", "B", "C", "D")


def test_ideal_two_sided_reflects_in_place():
    regs = [qs.spin(), qs.polarization(1), qs.path(1, ARMS)]
    state = qs.basis_state(regs, ["Up", "R", "B"])  # lower arm, coupled
    out = cav.scatter_two_sided(
        state, cav.InteractionModel.ideal(), photon=1, lower_path="B", upper_path="C"
    )
    assert out.amplitude("Up", "L", "B") == pytest.approx(1.0)

    state = qs.basis_state(regs, ["Up", "L", "B"])  # lower arm, uncoupled
    out = cav.scatter_two_sided(
        state, cav.InteractionModel.ideal(), photon=1, lower_path="B", upper_path="C"
    )
    assert out.amplitude("Up", "L", "C") == pytest.approx(-1.0)


def test_ideal_two_sided_leaves_other_arms_alone():
    regs = [qs.spin(), qs.polarization(1), qs.path(1, ARMS)]
    state = qs.basis_state(regs, ["Down", "R", "A"])
    out = cav.scatter_two_sided(
        state, cav.InteractionModel.ideal(), photon=1, lower_path="B", upper_path="C"
    )
    assert out.amplitude("Down", "R", "A") == pytest.approx(1.0)


def test_lossy_two_sided_is_unitary_with_flag(lossy_model):
    regs = (qs.spin(), qs.polarization(1), qs.path(1, ARMS), qs.loss_flag(1))
    op = cav.two_sided_operator(
        lossy_model,
        pol=regs[1],
        path=regs[2],
        spin=regs[0],
        flag=regs[3],
        lower_path="B",
        upper_path="C",
    )
    assert op.is_unitary(atol=1e-12)


def test_lossy_two_sided_sheds_probability_coherently(lossy_model):
    # (R,B) and (L,C) form the coupled pair for spin Up.  Their symmetric
    # combination sees amplitude r−t and loses 1−(r−t)² = 4t(1−t) when
    # r+t = 1; the antisymmetric combination sees r+t = 1 and loses nothing.
    sq = 1.0 / math.sqrt(2.0)
    regs = (qs.spin(), qs.polarization(1), qs.path(1, ARMS), qs.loss_flag(1))
    a = qs.basis_state(regs, ["Up", "R", "B", "Alive"])
    b = qs.basis_state(regs, ["Up", "L", "C", "Alive"])
    cr, ct = lossy_model.coupled_reflect_amp, lossy_model.coupled_transmit_amp

    sym = qs.StateVector(regs, (a.amps + b.amps) * sq)
    out = cav.scatter_two_sided(sym, lossy_model, photon=1, lower_path="B", upper_path="C")
    assert out.norm_sq() == pytest.approx(1.0, abs=1e-12)
    _, lost_p = qs.project(out, (qs.RegisterKind.LOSS_FLAG, 1), "Lost")
    assert lost_p == pytest.approx(1.0 - (cr - ct) ** 2, abs=1e-12)
    assert lost_p == pytest.approx(4.0 * ct * (1.0 - ct), abs=1e-12)

    anti = qs.StateVector(regs, (a.amps - b.amps) * sq)
    out = cav.scatter_two_sided(anti, lossy_model, photon=1, lower_path="B", upper_path="C")
    _, lost_p = qs.project(out, (qs.RegisterKind.LOSS_FLAG, 1), "Lost")
    assert lost_p == pytest.approx(0.0, abs=1e-12)
    # and it comes out as the matching uncoupled-pair combination, unattenuated
    out_b = out.amplitude("Up", "L", "B", "Alive")
    out_c = out.amplitude("Up", "R", "C", "Alive")
    assert out_b == pytest.approx(sq, abs=1e-12)
    assert out_c == pytest.approx(-sq, abs=1e-12)
