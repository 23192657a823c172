import numpy as np
import pytest
from scipy import stats

from groupsynch.errors import InvalidParameterError
from groupsynch.groups import build_catalog, build_cyclic, build_quaternion8
from groupsynch.models import (Model, cyclic_group_model, indicator_to_canonical,
                               sample_gsynch_circle, sample_gsynch_cyclic,
                               sample_gsynch_group, sample_indicator,
                               sample_signal)
from groupsynch.detect import top_eigenvalue


def test_signal_uniformity_cyclic():
    sv = sample_signal(("cyclic", 3), 10 ** 5, seed=1)
    freqs = np.bincount(sv.values, minlength=3) / 10 ** 5
    assert np.abs(freqs - 1 / 3).max() < 0.01


def test_signal_circle_rotation_symmetry():
    sv = sample_signal("circle", 10 ** 5, seed=2)
    assert abs(sv.values.mean().real) < 0.02
    assert abs(sv.values.mean().imag) < 0.02
    assert np.abs(np.abs(sv.values) - 1.0).max() < 1e-12


def test_signal_haar_uniformity_chi2():
    group, _ = build_quaternion8()
    sv = sample_signal(("haar", group), 8 * 10 ** 4, seed=3)
    counts = np.bincount(sv.values, minlength=8)
    p = stats.chisquare(counts).pvalue
    assert p > 0.01


def test_circle_null_is_pure_noise():
    obs = sample_gsynch_circle(2, 0.0, 40, seed=4)
    for f in obs.freqs:
        assert f.snr == 0.0
        # mean entry magnitude matches GUE/sqrt(n) scaling
        off = f.matrix[np.triu_indices(40, 1)]
        assert np.mean(np.abs(off) ** 2) == pytest.approx(1 / 40, rel=0.2)


def test_circle_n1_single_frequency():
    vals = [sample_gsynch_circle(1, 1.0, 1, seed=s).freqs[0].matrix[0, 0]
            for s in range(3000)]
    vals = np.array(vals)
    assert np.abs(vals.imag).max() == 0.0  # x x* = 1 plus real diagonal noise
    assert vals.real.mean() == pytest.approx(1.0, abs=0.1)
    assert vals.real.var() == pytest.approx(1.0, rel=0.15)


def test_circle_bbp_eigenvalue():
    tops = [top_eigenvalue(sample_gsynch_circle(1, 2.0, 1000, seed=s).freqs[0].matrix)
            for s in range(20)]
    assert np.mean(tops) == pytest.approx(2.5, abs=0.1)


def test_cyclic_l2_real_symmetric_pm1():
    obs = sample_gsynch_cyclic(2, 1.0, 30, seed=5)
    assert len(obs.freqs) == 1
    y = obs.freqs[0].matrix
    assert y.dtype == np.float64
    sig = sample_signal(("cyclic", 2), 30, seed=5)
    x = np.where(sig.values == 0, 1.0, -1.0)
    signal_part = np.outer(x, x) / 30
    # the planted part has +-1/n entries
    assert np.allclose(np.abs(signal_part), 1 / 30)


def test_cyclic_l4_top_frequency_real():
    obs = sample_gsynch_cyclic(4, 1.0, 25, seed=6)
    assert [f.type_tag for f in obs.freqs] == ["complex", "real"]
    assert np.isrealobj(obs.freqs[1].matrix)


def test_cyclic_l3_entries_are_root_ratios():
    obs = sample_gsynch_cyclic(3, 1.0, 12, seed=7)
    assert len(obs.freqs) == 1
    sig = sample_signal(("cyclic", 3), 12, seed=7)
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    x = roots[sig.values]
    outer = np.outer(x, x.conj())
    ratios = np.unique(np.round(outer.reshape(-1), 9))
    assert len(ratios) <= 3  # cube roots of unity only


def test_frequency_count_floor_l_over_2():
    for L in range(2, 9):
        obs = sample_gsynch_cyclic(L, 1.0, 6, seed=1)
        assert len(obs.freqs) == L // 2
        real_tags = [f.type_tag == "real" for f in obs.freqs]
        assert sum(real_tags) == (1 if L % 2 == 0 else 0)


def test_group_sampler_matches_cyclic_bitwise():
    for L in (3, 4, 5):
        via_cyclic = sample_gsynch_cyclic(L, 0.8, 15, seed=11)
        via_group = cyclic_group_model(L, 0.8).sample(15, seed=11)
        assert len(via_cyclic.freqs) == len(via_group.freqs)
        for a, b in zip(via_cyclic.freqs, via_group.freqs):
            assert np.array_equal(np.asarray(a.matrix, dtype=complex),
                                  np.asarray(b.matrix, dtype=complex))


def test_group_sampler_n1_identity_block():
    group, full = build_catalog("dihedral(3)")
    obs = sample_gsynch_group(group, full.nonredundant(), [0.0, 1.0], 1, seed=8)
    two_dim = obs.freqs[1]
    # signal block of the 2-dim channel is rho(u) rho(u)* = I; check via mean
    # over draws that the diagonal concentrates at 1
    diags = []
    for s in range(400):
        o = sample_gsynch_group(group, full.nonredundant(), [0.0, 1.0], 1, seed=s)
        diags.append(np.asarray(o.freqs[1].matrix).diagonal().real)
    assert np.mean(diags) == pytest.approx(1.0, abs=0.1)
    assert two_dim.matrix.shape == (2, 2)


def test_group_sampler_quaternionic_channel_shape():
    group, full = build_quaternion8()
    obs = sample_gsynch_group(group, full.nonredundant(), 0.5, 4, seed=9)
    quat = obs.freqs[-1]
    assert quat.type_tag == "quaternionic"
    assert quat.dim == 1
    assert quat.matrix.shape == (8, 8)  # 2 n d x 2 n d with n=4, d=1
    ev = np.linalg.eigvalsh(quat.matrix)
    assert np.abs(ev[0::2] - ev[1::2]).max() < 1e-8


def test_observations_hermitian_exact():
    obs = sample_gsynch_circle(3, [0.5, 1.0, 2.0], 20, seed=10)
    for f in obs.freqs:
        m = np.asarray(f.matrix)
        assert np.array_equal(m, m.conj().T)
    group, full = build_catalog("dihedral(4)")
    obs = sample_gsynch_group(group, full.nonredundant(), 0.7, 5, seed=11)
    for f in obs.freqs:
        m = np.asarray(f.matrix, dtype=complex)
        assert np.array_equal(m, m.conj().T)


def test_offdiagonal_entry_mean_vanishes():
    # nontrivial channel, k != j: E Y_kj = (snr/n) E rho(u_k) rho(u_j)^* = 0
    acc = np.zeros((), dtype=complex)
    for s in range(300):
        obs = sample_gsynch_cyclic(3, 1.0, 8, seed=s)
        acc += obs.freqs[0].matrix[0, 1]
    assert abs(acc / 300) < 0.05


def test_snr_validation():
    with pytest.raises(InvalidParameterError):
        sample_gsynch_circle(2, [-0.5, 1.0], 10, seed=0)
    with pytest.raises(InvalidParameterError):
        sample_gsynch_circle(2, [1.0, 1.0, 1.0], 10, seed=0)
    group, full = build_cyclic(4)
    with pytest.raises(InvalidParameterError):
        sample_gsynch_group(group, full, 1.0, 10, seed=0)  # full list rejected


# ---------------------------------------------------------------------------
# Noisy indicator observations
# ---------------------------------------------------------------------------

def test_indicator_null_moments():
    group, _ = build_cyclic(3)
    obs = sample_indicator(group, 6, 0.0, seed=12)
    z = obs.scores.reshape(-1)
    assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, rel=0.1)
    assert abs(z.mean()) < 0.05


def test_indicator_self_pair_mean():
    group, _ = build_cyclic(3)
    vals = [sample_indicator(group, 2, 4.0, seed=s).scores[0, 0, group.identity]
            for s in range(500)]
    assert np.mean(np.real(vals)) == pytest.approx(4.0, abs=0.2)


def test_indicator_argmax_recovery():
    group, _ = build_cyclic(4)
    hits = 0
    trials = 400
    for s in range(trials):
        obs = sample_indicator(group, 2, 10.0, seed=s)
        rel = group.mul[obs.signal[0], group.inverse[obs.signal[1]]]
        hits += int(np.argmax(obs.scores[0, 1].real) == rel)
    assert hits / trials >= 0.99


@pytest.mark.parametrize("name", ["cyclic(3)", "cyclic(4)", "dihedral(3)"])
def test_indicator_to_canonical_zero_noise(name):
    group, full = build_catalog(name)
    L = group.order
    n = 7
    snr = 0.9
    gamma = snr * np.sqrt(L / n)
    signal = sample_signal(("haar", group), n, seed=13)
    scores = np.zeros((n, n, L), dtype=complex)
    for k in range(n):
        for j in range(n):
            rel = group.mul[signal.values[k], group.inverse[signal.values[j]]]
            scores[k, j, rel] = gamma
    from groupsynch.models import IndicatorObservation
    clean = IndicatorObservation(scores, gamma, signal.values, n, 13)
    canon = indicator_to_canonical(clean, group, full)
    nontrivial = [r for r in full if not r.is_trivial]
    assert len(canon.freqs) == len(nontrivial)
    for freq, irrep in zip(canon.freqs, nontrivial):
        assert freq.snr == pytest.approx(snr, abs=1e-12)
        d = irrep.dim
        for a in range(n):
            for b in range(n):
                blk = freq.matrix[a * d:(a + 1) * d, b * d:(b + 1) * d]
                want = (snr / n) * irrep.matrices[signal.values[a]] @ \
                    irrep.matrices[group.inverse[signal.values[b]]]
                assert np.abs(blk - want).max() < 1e-10


def test_indicator_cross_irrep_blocks_carry_no_signal():
    group, full = build_catalog("dihedral(3)")
    from groupsynch.groups import regular_rep_unitary
    U = regular_rep_unitary(group, full)
    gamma = 1.3
    rel = group.product(2, group.inv(5))
    ytilde = np.zeros((6, 6), dtype=complex)
    ts_inv = group.mul[:, group.inverse]
    z = np.zeros(6, dtype=complex)
    z[rel] = gamma
    ytilde = z[ts_inv]
    M = U @ ytilde @ U.conj().T
    # zero outside the block-diagonal structure of the regular representation
    off = 0
    for irrep in full:
        d = irrep.dim
        for _ in range(d):
            M[off:off + d, off:off + d] = 0
            off += d
    assert np.abs(M).max() < 1e-10


def test_indicator_to_canonical_is_linear():
    group, full = build_cyclic(3)
    a = sample_indicator(group, 4, 0.0, seed=1)
    b = sample_indicator(group, 4, 0.0, seed=2)
    from groupsynch.models import IndicatorObservation
    summed = IndicatorObservation(a.scores + b.scores, 0.0, a.signal, 4, None)
    ca = indicator_to_canonical(a, group, full)
    cb = indicator_to_canonical(b, group, full)
    cs = indicator_to_canonical(summed, group, full)
    for fa, fb, fs in zip(ca.freqs, cb.freqs, cs.freqs):
        assert np.abs((fa.matrix + fb.matrix) - fs.matrix).max() < 1e-12


def test_indicator_null_block_variance():
    group, full = build_cyclic(3)
    n = 30
    sq = []
    for s in range(6):
        obs = sample_indicator(group, n, 0.0, seed=s)
        canon = indicator_to_canonical(obs, group, full)
        f = canon.freqs[0]
        iu = np.triu_indices(n, 1)
        blocks = f.matrix.reshape(n, 1, n, 1).transpose(0, 2, 1, 3)
        sq.append(np.abs(blocks[iu]) ** 2)
    mean_sq = float(np.mean(np.concatenate(sq)))
    assert mean_sq == pytest.approx(1.0 / n, rel=0.05)


def test_model_wrapper():
    m = Model("cyclic", L=4, snr=0.5)
    obs = m.sample(10, seed=3)
    assert obs.n == 10 and len(obs.freqs) == 2
    assert m.null().snr == 0.0
    with pytest.raises(InvalidParameterError):
        Model("cyclic", L=1)
    with pytest.raises(InvalidParameterError):
        Model("group")
