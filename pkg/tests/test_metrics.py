import numpy as np
import pytest

from cpdist.dilations import Contraction, minimal_dilation
from cpdist.linalg import operator_norm, trace_norm
from cpdist.maps import (
    CpMap,
    difference,
    identity_channel,
    random_channel,
    random_density,
    unitary_channel,
)
from cpdist.metrics import (
    bures,
    bures_extension,
    bures_fixed_pair,
    bures_states,
    cb_norm,
    continuity_certificate,
    cp_cb_norm,
    fidelity,
    mixture_certificate,
    monotonicity_certificate,
    radon_nikodym_operator,
    reflection_certificate,
)

from oracles import (
    bures_states_from_product_spectrum,
    fidelity_from_product_spectrum,
    unitary_pair_values,
)


def haar_unitary(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


# ---------------------------------------------------------------- functionals


def test_fidelity_against_spectral_oracle():
    rng = np.random.default_rng(101)
    for dim, rank in [(2, None), (3, None), (4, 2), (3, 1)]:
        rho0 = random_density(dim, rng)
        rho1 = random_density(dim, rng, rank=rank)
        want = fidelity_from_product_spectrum(rho0, rho1)
        assert abs(fidelity(rho0, rho1) - want) < 1e-8
        assert abs(fidelity(rho0, rho1) - fidelity(rho1, rho0)) < 1e-10
    rho = random_density(3, rng)
    assert abs(fidelity(rho, rho) - 1.0) < 1e-10


def test_bures_states_against_spectral_oracle():
    rng = np.random.default_rng(102)
    for _ in range(6):
        rho0 = random_density(3, rng)
        rho1 = random_density(3, rng)
        want = bures_states_from_product_spectrum(rho0, rho1)
        assert abs(bures_states(rho0, rho1) - want) < 1e-10
    rho = random_density(4, rng)
    assert bures_states(rho, rho) < 1e-7
    # triangle inequality on functionals
    a, b, c = (random_density(3, rng) for _ in range(3))
    assert bures_states(a, c) <= bures_states(a, b) + bures_states(b, c) + 1e-10


def test_bures_states_accepts_subnormalized():
    rng = np.random.default_rng(103)
    rho0 = 0.7 * random_density(3, rng)
    rho1 = 0.4 * random_density(3, rng)
    val = bures_states(rho0, rho1)
    want = bures_states_from_product_spectrum(rho0, rho1)
    assert abs(val - want) < 1e-10


def test_radon_nikodym_solves_h_rho_h():
    rng = np.random.default_rng(104)
    for dim in (2, 3, 4):
        rho0 = random_density(dim, rng)           # full rank a.s.
        rho1 = random_density(dim, rng, rank=max(1, dim - 1))
        h = radon_nikodym_operator(rho0, rho1)
        assert np.abs(h @ rho0 @ h - rho1).max() < 1e-9
        assert np.linalg.eigvalsh(h)[0] > -1e-10


def test_radon_nikodym_rejects_undominated():
    rho0 = np.diag([1.0, 0.0])
    rho1 = np.diag([0.5, 0.5])
    with pytest.raises(ValueError):
        radon_nikodym_operator(rho0, rho1)


def test_reflection_certificate_chain():
    rng = np.random.default_rng(105)
    for _ in range(6):
        dim = int(rng.integers(2, 5))
        rho0 = random_density(dim, rng)
        rho1 = random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))
        cert = reflection_certificate(rho0, rho1)
        assert cert.passed
        assert cert.rn_defect <= 1e-9
        # beta^2 <= reflection value <= trace-norm distance
        assert cert.beta_squared <= cert.reflection_value + 1e-8
        assert cert.reflection_value <= cert.norm_diff + 1e-8
        assert cert.beta <= np.sqrt(cert.norm_diff) + 1e-8


def test_mixture_certificate_bound():
    rng = np.random.default_rng(106)
    rho0 = random_density(3, rng)
    rho1 = random_density(3, rng)
    cert = mixture_certificate(rho0, rho1)
    assert cert.passed
    assert len(cert.distances) == len(cert.s_grid) == 9
    assert cert.worst_slack >= -1e-8
    # distance to the far endpoint shrinks to zero as s -> 1
    assert cert.distances[-1] < cert.distances[0]
    with pytest.raises(ValueError):
        mixture_certificate(rho0, rho1, s_grid=(0.5, 1.5))


# ------------------------------------------------------------------- cb norm


def test_cp_cb_norm_values():
    assert abs(cp_cb_norm(identity_channel(3)) - 1.0) < 1e-12
    t = random_channel(2, 3, 2, seed=107)
    assert abs(cp_cb_norm(t) - 1.0) < 1e-10          # unital
    assert abs(cp_cb_norm(t.rescaled(0.3)) - 0.3) < 1e-10


def test_cb_norm_of_cp_map_is_norm_at_identity():
    t = random_channel(2, 2, 2, seed=108)
    res = cb_norm(t)
    assert abs(res.value - cp_cb_norm(t)) < 1e-6
    assert res.sdp_gap < 1e-6
    assert res.value - res.ascent_value <= 1e-4
    assert res.ascent_value <= res.value + 1e-6


def test_cb_norm_zero_map():
    t = random_channel(2, 2, 2, seed=109)
    res = cb_norm(difference(t, t))
    assert res.value == 0.0
    assert res.ascent_value == 0.0


def test_cb_norm_unitary_pair_oracle():
    rng = np.random.default_rng(110)
    for d in (2, 3):
        u1, u2 = haar_unitary(rng, d), haar_unitary(rng, d)
        want_beta, want_cb = unitary_pair_values(u1, u2)
        res = cb_norm(difference(unitary_channel(u1), unitary_channel(u2)))
        assert abs(res.value - want_cb) < 1e-6
        assert res.value - res.ascent_value <= 1e-4


def test_cb_norm_rejects_other_input():
    with pytest.raises(ValueError):
        cb_norm(np.eye(4))


# ------------------------------------------------------------ Bures distance


def test_bures_unitary_pairs_match_eigenphase_oracle():
    rng = np.random.default_rng(111)
    for d in (2, 3):
        for _ in range(3):
            u1, u2 = haar_unitary(rng, d), haar_unitary(rng, d)
            want_beta, _ = unitary_pair_values(u1, u2)
            res = bures(unitary_channel(u1), unitary_channel(u2), ascent=False)
            assert abs(res.value - want_beta) < 1e-6
            assert res.witness_gap < 1e-5


def test_bures_antipodal_unitaries():
    # eigenvalues 1 and -1: the hull contains 0, so beta^2 = 2 exactly
    t1 = identity_channel(2)
    t2 = unitary_channel(np.diag([1.0, -1.0]))
    res = bures(t1, t2)
    assert abs(res.value - np.sqrt(2.0)) < 1e-6
    assert res.witness_gap < 1e-5
    assert res.ascent_gap < 1e-4
    cbr = cb_norm(difference(t1, t2))
    assert abs(cbr.value - 2.0) < 1e-6


def test_bures_quarter_turn_phase_pair():
    # eigenvalues 1 and i of U1†U2: hull distance cos(pi/4), so
    # beta^2 = 2 - sqrt(2) and cb = 2 sin(pi/4) = sqrt(2)
    t1 = identity_channel(2)
    t2 = unitary_channel(np.diag([1.0, 1.0j]))
    res = bures(t1, t2, ascent=False)
    assert abs(res.value ** 2 - (2.0 - np.sqrt(2.0))) < 1e-5
    want_beta, want_cb = unitary_pair_values(np.eye(2), np.diag([1.0, 1.0j]))
    assert abs(res.value - want_beta) < 1e-6
    cbr = cb_norm(difference(t1, t2))
    assert abs(cbr.value - want_cb) < 1e-6


def test_bures_self_distance_and_symmetry():
    t1 = random_channel(2, 2, 2, seed=112)
    t2 = random_channel(2, 2, 3, seed=113)
    assert bures(t1, t1, ascent=False).value < 1e-6
    a = bures(t1, t2, ascent=False).value
    b = bures(t2, t1, ascent=False).value
    assert abs(a - b) < 1e-6


def test_bures_result_certificates():
    t1 = random_channel(2, 2, 2, seed=114)
    t2 = random_channel(2, 2, 2, seed=115)
    res = bures(t1, t2)
    # optimizer is a genuine state
    assert abs(np.trace(res.rho).real - 1.0) < 1e-10
    assert np.linalg.eigvalsh(res.rho)[0] > -1e-12
    # steering contraction is a genuine contraction
    assert operator_norm(res.contraction.w) <= 1.0 + 1e-10
    # witness pair attains the distance in a common representation
    assert abs(bures_fixed_pair(*res.pair) - res.witness) < 1e-12
    assert res.witness_gap < 1e-5
    assert res.sdp_gap < 1e-6
    # independent ascent brackets the squared value
    assert abs(res.beta_squared - res.ascent_value) < 1e-4
    assert res.ascent_gap < 1e-4
    assert res.ascent_value <= res.beta_squared + 1e-6


def test_bures_one_sided_zero_map():
    t = random_channel(2, 2, 2, seed=116)
    zero = CpMap(2, 2, [])
    res = bures(t, zero)
    # distance to the zero map is the norm of the dilation: sqrt(||T(1)||)
    assert abs(res.value - 1.0) < 1e-10
    assert res.witness_gap < 1e-8
    with pytest.raises(ValueError):
        bures(zero, CpMap(2, 2, []))


def test_bures_scalar_output_reduces_to_states():
    # maps into 1x1 matrices are positive functionals: a ↦ tr(a rho_T)
    rng = np.random.default_rng(117)
    t1 = random_channel(3, 1, 2, seed=118)
    t2 = random_channel(3, 1, 2, seed=119)
    rho_t1 = sum(k @ k.conj().T for k in t1.kraus)
    rho_t2 = sum(k @ k.conj().T for k in t2.kraus)
    res = bures(t1, t2)
    want = bures_states(rho_t1, rho_t2)
    assert abs(res.value - want) < 1e-8


def test_bures_dimension_mismatch():
    with pytest.raises(ValueError):
        bures(random_channel(2, 2, 2, seed=120), random_channel(3, 2, 2, seed=121))


def test_bures_fixed_pair_requires_common_representation():
    t1 = random_channel(2, 2, 2, seed=122)
    t2 = random_channel(2, 2, 3, seed=123)
    with pytest.raises(ValueError):
        bures_fixed_pair(minimal_dilation(t1), minimal_dilation(t2))


def test_bures_monotone_in_contraction_choice():
    # the attained witness norm can only improve on arbitrary contractions
    rng = np.random.default_rng(124)
    t1 = random_channel(2, 2, 2, seed=125)
    t2 = random_channel(2, 2, 2, seed=126)
    res = bures(t1, t2, ascent=False)
    from cpdist.dilations import common_pair_from_contraction

    for _ in range(5):
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        g /= max(operator_norm(g), 1.0)
        pair = common_pair_from_contraction(t1, t2, Contraction(g))
        assert bures_fixed_pair(*pair) >= res.value - 1e-8


# ------------------------------------------------------------- 2x2 extension


def test_extension_agrees_with_dilation_route():
    for seed in (127, 128, 129):
        t1 = random_channel(2, 2, 2, seed=seed)
        t2 = random_channel(2, 2, 2, seed=seed + 1000)
        ext = bures_extension(t1, t2)
        res = bures(t1, t2, ascent=False)
        assert abs(ext.value - res.value) < 1e-4
        assert ext.sdp_gap < 1e-6


def test_extension_structure():
    t1 = random_channel(2, 2, 2, seed=130)
    t2 = random_channel(2, 2, 3, seed=131)
    ext = bures_extension(t1, t2)
    # diagonal corners are pinned to the two maps
    assert np.allclose(ext.block_choi(0, 0), t1.choi, atol=1e-12)
    assert np.allclose(ext.block_choi(1, 1), t2.choi, atol=1e-12)
    # the extension is completely positive
    assert np.linalg.eigvalsh(ext.choi)[0] > -1e-7
    # defect consistency: lambda_max equals the squared value
    want = ext.block_at_identity(0, 0) + ext.block_at_identity(1, 1) \
        - ext.block_at_identity(0, 1) - ext.block_at_identity(1, 0)
    assert np.allclose(want, ext.defect, atol=1e-10)
    assert abs(np.linalg.eigvalsh(ext.defect)[-1] - ext.value_squared) < 1e-10


def test_extension_zero_map_branch():
    t = random_channel(2, 2, 2, seed=132)
    ext = bures_extension(t, CpMap(2, 2, []))
    assert abs(ext.value - 1.0) < 1e-10
    with pytest.raises(ValueError):
        bures_extension(CpMap(2, 2, []), CpMap(2, 2, []))


# ------------------------------------------------------------- certificates


def test_continuity_certificate_sandwich():
    t1 = random_channel(2, 2, 2, seed=133)
    t2 = random_channel(2, 2, 2, seed=134)
    rep = continuity_certificate(t1, t2, seed=7, include_extension=True)
    assert rep.passed
    assert rep.lower <= rep.beta + 1e-5
    assert rep.beta <= rep.upper + 1e-5
    assert rep.beta_ext is not None
    assert abs(rep.beta_ext - rep.beta) < 1e-4
    # cross-check the endpoints against the raw routes
    cbr = cb_norm(difference(t1, t2))
    denom = np.sqrt(cp_cb_norm(t1)) + np.sqrt(cp_cb_norm(t2))
    assert abs(rep.cb_diff - cbr.value) < 1e-9
    assert abs(rep.lower - cbr.value / denom) < 1e-9
    assert abs(rep.upper - np.sqrt(cbr.value)) < 1e-9
    assert rep.seed == 7
    assert rep.dims == {"d": 2, "n": 2, "m1": 2, "m2": 2}
    for key in ("lower", "upper", "witness_gap", "dilation_residual",
                "beta_sdp_gap", "cb_sdp_gap", "cb_ascent_agreement",
                "beta_ascent_agreement", "extension_agreement"):
        assert key in rep.slacks
    assert rep.slacks["dilation_residual"] <= 1e-8
    assert rep.slacks["witness_gap"] <= 1e-5


def test_continuity_certificate_without_ascent():
    t1 = random_channel(2, 2, 2, seed=135)
    t2 = random_channel(2, 2, 2, seed=136)
    rep = continuity_certificate(t1, t2, ascent=False)
    assert rep.passed
    assert rep.beta_ext is None
    assert "beta_ascent_agreement" not in rep.slacks
    assert "cb_ascent_agreement" in rep.slacks
    doc = rep.to_dict()
    for key in ("beta", "beta_ext", "cb_diff", "lower", "upper",
                "witness_gap", "slacks", "seed", "dims"):
        assert key in doc


def test_monotonicity_certificate_both_sides():
    t1 = random_channel(2, 2, 2, seed=137)
    t2 = random_channel(2, 2, 2, seed=138)
    post = monotonicity_certificate(random_channel(2, 3, 2, seed=139), t1, t2,
                                    side="post")
    assert post.passed and post.side == "post"
    assert post.after <= np.sqrt(post.norm_s) * post.before + 1e-5
    pre = monotonicity_certificate(random_channel(3, 2, 2, seed=140), t1, t2,
                                   side="pre")
    assert pre.passed and pre.side == "pre"
    with pytest.raises(ValueError):
        monotonicity_certificate(t1, t1, t2, side="sideways")
