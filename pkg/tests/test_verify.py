import numpy as np
import pytest

from frachardy.fraclap import LineFunction
from frachardy.params import FracParams, ParameterError
from frachardy.testfns import DomainBall, bump, combo
from frachardy.verify import (
    PohozaevSpec,
    check_cordoba,
    check_fs_hardy_1d,
    check_hardy_rellich,
    check_hardy_rellich_p1,
    check_pohozaev_id,
    check_remainder_1d,
    gagliardo_1d,
    verdict,
)

ZERO = bump(2, 1).scaled(0.0)


def test_verdict_rule():
    assert verdict(1.0, 2.0, 0.1) == "holds"
    assert verdict(1.95, 2.0, 0.1) == "holds_within_margin"
    assert verdict(2.05, 2.0, 0.1) == "holds_within_margin"
    assert verdict(2.5, 2.0, 0.1) == "violated"
    assert verdict(0.0, 0.0, 0.0) == "holds_within_margin"


def test_hardy_rellich_zero_profile():
    rep = check_hardy_rellich(FracParams(3, 0.5, 0.5, 2), ZERO)
    assert rep.lhs == 0.0 and rep.rhs == 0.0
    assert rep.verdict == "holds_within_margin"


def test_hardy_rellich_example():
    rep = check_hardy_rellich(FracParams(3, 0.5, 0.5, 2), bump(2, 1), DomainBall(1.0))
    assert rep.verdict == "holds" and rep.ratio >= 1.0 and rep.converged
    d = rep.as_dict()
    for key in ("name", "params", "lhs", "rhs", "constant", "ratio", "margin", "verdict", "evals", "wall_ms"):
        assert key in d
    assert set(d["params"]) == {"N", "s", "theta", "p", "t"}


def test_hardy_rellich_homogeneity():
    params = FracParams(2, 0.3, 0.4, 3)
    a = check_hardy_rellich(params, bump(2.5, 0.8), rel_tol=1e-8)
    b = check_hardy_rellich(params, bump(2.5, 0.8).scaled(10.0), rel_tol=1e-8)
    assert b.lhs == pytest.approx(1e3 * a.lhs, rel=1e-7)
    assert b.rhs == pytest.approx(1e3 * a.rhs, rel=1e-7)
    assert a.verdict == b.verdict == "holds"


def test_hardy_rellich_rejects_bad_input():
    with pytest.raises(ParameterError):
        check_hardy_rellich(FracParams(3, 0.5, 2.5, 2), bump(2, 1))
    with pytest.raises(ParameterError):
        check_hardy_rellich(FracParams(3, 0.5, 0.5, 2), bump(2, 1.2), DomainBall(1.0))
    with pytest.raises(ParameterError):
        check_hardy_rellich(FracParams(3, 0.5, 0.5, 1), bump(2, 1))


def test_p1_examples():
    rep = check_hardy_rellich_p1(FracParams(3, 0.5, 0.5, 1), bump(2, 1))
    assert rep.verdict == "holds"
    zero = check_hardy_rellich_p1(FracParams(3, 0.5, 0.5, 1), ZERO)
    assert zero.lhs == 0.0 and zero.rhs == 0.0
    flat = check_hardy_rellich_p1(FracParams(3, 0.5, 0.0, 1), bump(2, 1))
    assert flat.lhs == 0.0 and flat.rhs >= -flat.margin


def test_p1_requires_nonnegative_profile():
    with pytest.raises(ParameterError):
        check_hardy_rellich_p1(FracParams(3, 0.5, 0.5, 1), combo([1.0, -3.0], [2.0, 3.0], 1.0))


def test_pohozaev_full_space_closes():
    rep = check_pohozaev_id(FracParams(3, 0.5, 1.0, 2), bump(2, 0.8), 0.1)
    assert rep.residual <= 1e-6 and rep.passes and rep.converged
    assert rep.residual == rep.residual_factor_2


def test_pohozaev_omega_mode_equals_defect():
    full = check_pohozaev_id(FracParams(3, 0.5, 1.0, 2), bump(2, 0.8), 0.1)
    om = check_pohozaev_id(FracParams(3, 0.5, 1.0, 2), bump(2, 0.8), 0.1, PohozaevSpec(integration_domain_for_B="omega"))
    assert om.B == om.B_omega and full.B == full.B_full
    assert om.exterior_defect > 0.0
    # b A matches B_full, so the omega residual measures the exterior defect
    assert abs(om.b * om.A - om.B) == pytest.approx(om.exterior_defect, abs=om.margin + full.margin)
    assert om.residual == pytest.approx(om.exterior_defect / abs(om.B_omega), rel=1e-6)


def test_pohozaev_theta_zero():
    rep = check_pohozaev_id(FracParams(3, 0.5, 0.0, 2), bump(2, 0.8), 0.1)
    assert rep.b == 0.0
    assert abs(rep.B) <= rep.margin + 1e-10
    assert rep.passes


def test_pohozaev_factor_one_reported():
    rep = check_pohozaev_id(FracParams(4, 0.5, 0.7, 2), bump(2, 0.8), 0.2, PohozaevSpec(operator_normalization="factor_1"))
    assert rep.residual == rep.residual_factor_1
    assert rep.residual_factor_2 <= 1e-6


def test_pohozaev_spec_validation():
    with pytest.raises(ParameterError):
        PohozaevSpec(vector_field="rotation")
    with pytest.raises(ParameterError):
        PohozaevSpec(operator_normalization="factor_3")
    with pytest.raises(ParameterError):
        check_pohozaev_id(FracParams(3, 0.5, 1.0, 2), bump(2, 0.8), 0.0)


def test_cordoba_examples():
    z = check_cordoba(ZERO, 3, 0.5, 0.2, 3, [0.0, 0.5])
    assert z.min_margin == 0.0 and z.passes
    rep = check_cordoba(bump(2, 1), 3, 0.5, 0.2, 3, [0.0, 0.25, 0.5, 0.75, 0.9])
    assert rep.passes and rep.min_normalized >= -1e-8


def test_cordoba_p2_margin_is_squared_difference():
    from frachardy.fraclap import squared_difference_radial

    u = bump(2, 1)
    radii = [0.0, 0.3, 0.7, 1.3]
    rep = check_cordoba(u, 3, 0.5, 0.4, 2, radii)
    for r, m in zip(radii, rep.margins):
        assert m == pytest.approx(squared_difference_radial(u, 3, 0.5, r).value, rel=1e-9)


def test_gagliardo_examples():
    assert gagliardo_1d(ZERO, 0.3).value == 0.0
    a = gagliardo_1d(bump(2, 1), 0.3)
    b = gagliardo_1d(bump(2, 1), 0.3)
    assert a == b and a.value > 0 and a.converged
    dil = gagliardo_1d(bump(2, 2), 0.3)
    assert dil.value == pytest.approx(2 ** (1 - 0.6) * a.value, rel=1e-6)


def test_gagliardo_against_fourier_identity():
    # int |(-Delta)^(s/2) u|^2 = (c_{1,s}/2) [u]^2, checked through the operator identity
    # int u (-Delta)^s u = (c_{1,s}/2) [u]^2
    from frachardy.fraclap import fraclap_line
    from frachardy.quad import integrate_singular
    from frachardy.specfun import c_ns

    u = bump(2, 1)
    s = 0.3
    q = integrate_singular(lambda x: np.array([u.value(np.array([abs(v)]))[0] * fraclap_line(u, s, v) for v in x]), 0.0, 1.0)
    ref = 0.5 * c_ns(1, s) * gagliardo_1d(u, s).value
    assert 2 * q.value == pytest.approx(ref, rel=1e-8)


def test_fs_hardy_examples():
    z = check_fs_hardy_1d(ZERO, 0.3, 2)
    assert z.lhs == 0.0 and z.rhs == 0.0 and z.verdict == "holds_within_margin"
    assert check_fs_hardy_1d(bump(2, 1), 0.3, 2).verdict == "holds"
    assert check_fs_hardy_1d(bump(3, 0.5), 0.2, 3).verdict == "holds"
    with pytest.raises(ParameterError):
        check_fs_hardy_1d(bump(2, 1), 0.5, 2)


def test_remainder_zero_and_symmetry():
    z = check_remainder_1d(0.2, ZERO)
    assert z.L1 == 0.0 and z.M == 0.0 and z.Rg == 0.0
    rep = check_remainder_1d(0.2, bump(2, 0.9))
    assert rep.T_symmetric
    assert rep.verdict_L1_M == "holds"
    # the exact exterior coefficient reproduces M
    assert abs(rep.M - rep.Rg_exact) <= rep.margin_M_Rg + 1e-12
    with pytest.raises(ParameterError):
        check_remainder_1d(0.3, bump(2, 0.9))
    with pytest.raises(ParameterError):
        check_remainder_1d(0.2, bump(2, 1.0))


def test_remainder_accepts_line_functions():
    u = bump(2.5, 0.5)
    shifted = LineFunction(value=lambda x: u.value(np.abs(x - 0.2)), support=0.7, kinks=(-0.3, 0.7))
    rep = check_remainder_1d(0.1, shifted, rel_tol=1e-8)
    assert rep.T_symmetric is None
    assert rep.T_plus != pytest.approx(rep.T_minus, rel=1e-3)
    assert abs(rep.M - rep.Rg_exact) <= rep.margin_M_Rg + 1e-9 * rep.M


def test_sign_change_split_matches_plain_integral():
    from frachardy.fraclap import RadialFracLap
    from frachardy.verify import _power_pair, radial_outer, sign_changes

    u = bump(2.0, 1.0)
    F = RadialFracLap(u, 2, 0.3, 1e-11)
    roots = sign_changes(F, 0.0, 1.0, u.kinks)
    assert len(roots) == 1
    assert abs(float(F(roots[0]))) < 1e-12
    t, ds = _power_pair(3.0)
    split = radial_outer(F, t, ds, -0.8, 0.0, 1.0, 1e-8, u.kinks, split_at_zeros=True)
    plain = radial_outer(F, t, ds, -0.8, 0.0, 1.0, 1e-8, u.kinks)
    assert abs(split.value - plain.value) <= split.abs_err + plain.abs_err + 1e-12
    assert split.evals < plain.evals
