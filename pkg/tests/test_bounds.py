import math

import numpy as np
import pytest

from multiprobe.bounds import (
    BoundReport,
    FidelityTable,
    bounds_brute_force,
    bounds_by_counting,
    bounds_from_table,
    bounds_tmsv_pairs,
    bounds_tmsv_pairs_odd,
    classical_benchmark,
    counting_census,
    fidelity_table_counting,
    guaranteed_advantage,
    per_channel_classical_fidelity,
    tmsv_subfidelity,
)
from multiprobe.channels import ChannelFamily
from multiprobe.closedform import coherent_loss_fidelity, vacuum_additive_fidelity
from multiprobe.errors import (
    ComparabilityError,
    PartitionError,
    UnsupportedBenchmarkError,
)
from multiprobe.imagespace import (
    ImageSpace,
    bcpf_space,
    cpf_space,
    full_space,
    pair_degeneracy_census,
)
from multiprobe.probes import (
    HYBRID_COHERENT,
    SINGLE_IDLER,
    ProbeSpec,
    full_idler_partition,
    odd_m_disjoint_spec,
    pair_partition,
)

LOSS = ChannelFamily.pure_loss(0.99, 0.97)
ADD = ChannelFamily.additive(0.02, 0.01)


def classed_table(counts, fids, n):
    logf = np.array([math.log(f) if f > 0 else -math.inf for f in fids])
    return FidelityTable(n, class_counts=np.array(counts, float), class_logf=logf)


def test_perfect_discrimination_gives_zero_bounds():
    table = classed_table([6], [0.0], 3)
    rep = bounds_from_table(table, 4)
    assert rep.upper_raw == 0.0
    assert rep.lower_raw == 0.0


def test_two_pattern_space_bounds():
    # |U| = 2, single fidelity f: UB = f^M, LB = f^(2M)/4
    f, m_copies = 0.9, 3
    table = classed_table([2], [f], 2)
    rep = bounds_from_table(table, m_copies)
    assert rep.upper_raw == pytest.approx(f**m_copies, rel=1e-14)
    assert rep.lower_raw == pytest.approx(f ** (2 * m_copies) / 4.0, rel=1e-14)


def test_report_clipping_and_invariants():
    table = classed_table([20], [0.999], 4)
    rep = bounds_from_table(table, 1)
    assert rep.upper_raw > 1.0
    assert rep.upper == 1.0
    assert 0.0 <= rep.lower <= rep.upper
    with pytest.raises(ValueError):
        bounds_from_table(table, 0.5)


def test_single_pattern_space_is_trivial():
    spec = ProbeSpec(2, 20.5, blocks=((0, 1),))
    rep = bounds_by_counting(cpf_space(2, 2), spec, LOSS, 5)
    assert rep.upper_raw == 0.0
    assert rep.lower_raw == 0.0


def test_one_cpf_ghz_closed_form():
    # single GHZ probe on 1-CPF: UB = (m-1) F^M, LB = (m-1)/(2m) F^(2M)
    m, copies = 5, 3
    spec = ProbeSpec(m, 20.5, blocks=(tuple(range(m)),))
    space = cpf_space(m, 1)
    rep = bounds_by_counting(space, spec, ADD, copies)
    table = fidelity_table_counting(space, spec, ADD)
    assert len(table.class_counts) == 1  # all 1-CPF pairs are one class
    fid = math.exp(table.class_logf[0])
    assert rep.upper_raw == pytest.approx((m - 1) * fid**copies, rel=1e-12)
    assert rep.lower_raw == pytest.approx(
        (m - 1) / (2 * m) * fid ** (2 * copies), rel=1e-12
    )


@pytest.mark.parametrize("seed", range(6))
def test_counting_census_totals_random_configs(seed):
    # ordered off-diagonal pair count must equal |U|^2 - |U| for any block
    # tiling and any admissible-target-count set
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 8))
    sizes = []
    left = m
    while left:
        s = int(rng.integers(1, left + 1))
        sizes.append(s)
        left -= s
    ks = sorted(rng.choice(range(m + 1), size=rng.integers(1, m + 1), replace=False))
    census = counting_census(m, sizes, ks)
    n_patterns = sum(math.comb(m, k) for k in ks)
    assert sum(census.values()) == n_patterns**2 - n_patterns


def test_counting_census_equals_enumeration_m6_three_blocks():
    spec = ProbeSpec(6, 20.5, blocks=((0, 1, 2), (3, 4, 5)))
    for space in (full_space(6), cpf_space(6, 2), bcpf_space(6, (1, 2))):
        enum = pair_degeneracy_census(space, spec.census_blocks)
        count = counting_census(6, [3, 3], space.target_counts)
        assert enum == count


def test_hybrid_coherent_block_additive_equals_vacuum_benchmark():
    # displacements cancel for additive noise, so the hybrid remainder's
    # fidelity is the vacuum benchmark regardless of amplitude
    from multiprobe.bounds import block_subfidelity
    from multiprobe.probes import BlockDescriptor

    desc = BlockDescriptor("coherent", (0,), alpha=np.sqrt(20.0))
    got = block_subfidelity(desc, ADD, 0, 1, 1)
    assert got == pytest.approx(vacuum_additive_fidelity(0.02, 0.01), rel=1e-13)


@pytest.mark.parametrize("family", [LOSS, ADD], ids=["loss", "additive"])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_counting_census_equals_enumeration(family, m):
    for spec in (
        ProbeSpec(m, 20.5, blocks=(tuple(range(m)),)),
        odd_m_disjoint_spec(m, 20.5, SINGLE_IDLER) if m % 2 else ProbeSpec.from_partition(pair_partition(m), 20.5),
    ):
        for space in (full_space(m), cpf_space(m, 1), bcpf_space(m, (1, 2))):
            blocks = spec.census_blocks
            enum = pair_degeneracy_census(space, blocks)
            count = counting_census(m, [len(b) for b in blocks], space.target_counts)
            assert enum == count


@pytest.mark.parametrize("family", [LOSS, ADD], ids=["loss", "additive"])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_counting_matches_brute_force(family, m):
    specs = [ProbeSpec(m, 20.5, blocks=(tuple(range(m)),))]
    if m % 2 == 0:
        specs.append(ProbeSpec.from_partition(pair_partition(m), 20.5))
    else:
        specs.append(odd_m_disjoint_spec(m, 20.5, SINGLE_IDLER))
    for spec in specs:
        for space in (full_space(m), cpf_space(m, 1), bcpf_space(m, (1, 2))):
            for copies in (1, 10):
                brute = bounds_brute_force(space, spec, family, copies)
                fast = bounds_by_counting(space, spec, family, copies)
                assert fast.method == "counting"
                assert fast.upper_raw == pytest.approx(brute.upper_raw, rel=1e-10, abs=1e-300)
                assert fast.lower_raw == pytest.approx(brute.lower_raw, rel=1e-10, abs=1e-300)


def test_counting_falls_back_for_nonuniform_priors():
    m = 3
    space = full_space(m)
    pri = np.linspace(1, 2, len(space))
    skew = ImageSpace(m, space.patterns, pri / pri.sum())
    spec = odd_m_disjoint_spec(m, 20.5, SINGLE_IDLER)
    rep = bounds_by_counting(skew, spec, ADD, 2)
    assert rep.method == "blocks"
    brute = bounds_brute_force(skew, spec, ADD, 2)
    assert rep.upper_raw == pytest.approx(brute.upper_raw, rel=1e-10)
    assert rep.lower_raw == pytest.approx(brute.lower_raw, rel=1e-10)


def test_tmsv_pairs_m2_single_block_formula():
    # m=2, M=1: UB = f01 + f12 + (f11 + f02)/2
    for family in (LOSS, ADD):
        f01 = tmsv_subfidelity(family, 20.5, 0, 1, 1)
        f02 = tmsv_subfidelity(family, 20.5, 0, 2, 2)
        f11 = tmsv_subfidelity(family, 20.5, 1, 1, 2)
        f12 = tmsv_subfidelity(family, 20.5, 1, 2, 1)
        rep = bounds_tmsv_pairs(family, 20.5, 1, 2)
        assert rep.upper_raw == pytest.approx(f01 + f12 + (f11 + f02) / 2, rel=1e-14)


def test_tmsv_pairs_vanish_as_fidelities_die():
    # all sub-fidelities < 1, so the pair sum tends to 1 and both bounds
    # tend to zero as the copy number grows
    for family in (LOSS, ADD):
        rep = bounds_tmsv_pairs(family, 20.5, 1e6, 4)
        assert rep.upper_raw < 1e-6
        assert rep.lower_raw < 1e-12


def test_tmsv_pairs_odd_unit_remainder_reduces_to_even():
    # a remainder factor with fidelity ~1 doubles the even-case pair sum:
    # D_odd[M] = 2 (D_even[M] + 1) - 1 when the remainder cannot be told apart
    family = ChannelFamily.additive(0.02, 0.02 + 1e-12)
    m, copies = 5, 3
    odd = bounds_tmsv_pairs_odd(family, 20.5, copies, m, SINGLE_IDLER)
    even = bounds_tmsv_pairs(family, 20.5, copies, m - 1)
    assert odd.upper_raw == pytest.approx(2 * (even.upper_raw + 1) - 1, rel=1e-6)


def test_additive_f11_equal_noise_is_unity():
    # identical channels on both positions: theta - sqrt(xi- xi+) collapses
    # to 1 and the patterns are indistinguishable at any energy
    from multiprobe.closedform import tmsv_additive_f11

    for mu in (0.6, 5.0, 500.0):
        assert tmsv_additive_f11(mu, 0.03, 0.03) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("family", [LOSS, ADD], ids=["loss", "additive"])
def test_tmsv_pairs_even_matches_brute(family):
    # class representatives carry ~1e-12 numerical degeneracy spread that
    # the copy powers amplify; 1e-10 is the contract tolerance
    m, copies = 4, 10
    spec = ProbeSpec.from_partition(pair_partition(m), 20.5)
    brute = bounds_brute_force(full_space(m), spec, family, copies)
    closed = bounds_tmsv_pairs(family, 20.5, copies, m)
    assert closed.upper_raw == pytest.approx(brute.upper_raw, rel=1e-10)
    assert closed.lower_raw == pytest.approx(brute.lower_raw, rel=1e-10)


@pytest.mark.parametrize("strategy", [SINGLE_IDLER, HYBRID_COHERENT])
@pytest.mark.parametrize("family", [LOSS, ADD], ids=["loss", "additive"])
def test_tmsv_pairs_odd_matches_brute(strategy, family):
    m, copies = 3, 4
    spec = odd_m_disjoint_spec(m, 20.5, strategy)
    brute = bounds_brute_force(full_space(m), spec, family, copies)
    closed = bounds_tmsv_pairs_odd(family, 20.5, copies, m, strategy)
    assert closed.upper_raw == pytest.approx(brute.upper_raw, rel=1e-10)
    assert closed.lower_raw == pytest.approx(brute.lower_raw, rel=1e-10)


def test_tmsv_pairs_rejects_odd_m():
    with pytest.raises(PartitionError):
        bounds_tmsv_pairs(LOSS, 20.5, 1, 3)
    with pytest.raises(PartitionError):
        bounds_tmsv_pairs_odd(LOSS, 20.5, 1, 4, SINGLE_IDLER)


def test_idler_single_strategy_beats_hybrid_for_loss():
    # the coherent remainder loses the entanglement advantage, so the
    # idler-assisted variant must not be worse at Fig-4-style parameters
    for copies in (1, 10, 100):
        idler = bounds_tmsv_pairs_odd(LOSS, 20.5, copies, 9, SINGLE_IDLER)
        hybrid = bounds_tmsv_pairs_odd(LOSS, 20.5, copies, 9, HYBRID_COHERENT)
        assert idler.upper_raw <= hybrid.upper_raw


def test_classical_benchmark_pure_loss_value():
    # per-channel coherent fidelity at energy N_S, pairs at distance d
    # contribute f^(d M)
    m, ns, copies = 3, 20.0, 4
    space = cpf_space(m, 1)
    rep = classical_benchmark(space, LOSS, ns, copies)
    f = coherent_loss_fidelity(0.99, 0.97, ns)
    want_ub = (m - 1) * f ** (2 * copies)  # 1-CPF pairs differ at 2 positions
    assert rep.upper_raw == pytest.approx(want_ub, rel=1e-12)
    assert rep.m_bar == copies


def test_classical_benchmark_additive_vacuum():
    space = full_space(2)
    rep = classical_benchmark(space, ADD, 123.0, 1)  # energy is ignored by vacuum
    f = vacuum_additive_fidelity(0.02, 0.01)
    want = (8 * f + 4 * f**2) / 4  # 8 ordered pairs at distance 1, 4 at distance 2
    assert rep.upper_raw == pytest.approx(want, rel=1e-12)


def test_classical_benchmark_counting_equals_dense():
    space = full_space(4)
    custom = ImageSpace(4, space.patterns, space.priors)  # kind custom, same priors
    a = classical_benchmark(space, LOSS, 20.0, 3)
    b = classical_benchmark(custom, LOSS, 20.0, 3)
    assert a.upper_raw == pytest.approx(b.upper_raw, rel=1e-12)
    assert a.lower_raw == pytest.approx(b.lower_raw, rel=1e-12)


def test_classical_benchmark_rejects_thermal():
    thermal = ChannelFamily.thermal(0.8, 1.0, 0.8, 1.5)
    with pytest.raises(UnsupportedBenchmarkError):
        classical_benchmark(full_space(2), thermal, 5.0, 1)


def test_classical_near_degenerate_channels():
    # as the channels coincide the per-channel fidelity tends to 1 and the
    # raw upper bound approaches |U| - 1 (the prior-only value)
    space = full_space(3)
    for family in (
        ChannelFamily.pure_loss(0.99, 0.99 - 1e-9),
        ChannelFamily.additive(0.02, 0.02 + 1e-12),
    ):
        rep = classical_benchmark(space, family, 20.0, 1)
        assert rep.upper_raw == pytest.approx(len(space) - 1, rel=1e-6)
        assert rep.upper == 1.0


def test_bound_monotonic_in_copies():
    spec = ProbeSpec(4, 20.5, blocks=((0, 1, 2, 3),))
    space = full_space(4)
    table = fidelity_table_counting(space, spec, LOSS)
    prev = None
    for copies in (1, 2, 4, 8, 32, 128):
        rep = bounds_from_table(table, copies)
        if prev is not None:
            assert rep.upper <= prev.upper + 1e-15
            assert rep.lower <= prev.lower + 1e-15
        prev = rep


def test_guaranteed_advantage():
    cl = BoundReport(0.3, 0.8, 10, 10.0, "classical")
    q = BoundReport(0.0, 0.1, 10, 10.0, "counting")
    assert guaranteed_advantage(cl, q) == pytest.approx(0.2)
    assert guaranteed_advantage(cl, cl) <= 0
    other = BoundReport(0.0, 0.1, 10, 20.0, "mutual")
    with pytest.raises(ComparabilityError):
        guaranteed_advantage(cl, other)


def test_quantum_upper_zero_gives_full_classical_lower():
    cl = BoundReport(0.25, 0.9, 5, 5.0, "classical")
    q = BoundReport(0.0, 0.0, 5, 5.0, "counting")
    assert guaranteed_advantage(cl, q) == pytest.approx(0.25)


def test_per_channel_classical_fidelity_dispatch():
    assert per_channel_classical_fidelity(LOSS, 20.0) == coherent_loss_fidelity(0.99, 0.97, 20.0)
    assert per_channel_classical_fidelity(ADD, 20.0) == vacuum_additive_fidelity(0.02, 0.01)


def test_idler_full_equals_choi_powers():
    # per-channel idler-assisted blocks: pattern pairs at distance d have
    # fidelity F_choi^d
    from multiprobe.bounds import block_subfidelity
    from multiprobe.probes import BlockDescriptor

    m, copies = 3, 5
    spec = ProbeSpec.from_partition(full_idler_partition(m), 20.5)
    space = cpf_space(m, 1)
    rep = bounds_by_counting(space, spec, LOSS, copies)
    f_choi = block_subfidelity(BlockDescriptor("ghz", (0,), 1, mu=20.5), LOSS, 0, 1, 1)
    assert rep.upper_raw == pytest.approx((m - 1) * f_choi ** (2 * copies), rel=1e-12)


def test_idler_assisted_m9_golden_values():
    """Frozen oracle data for the m=9 idler-assisted 1-CPF regime.

    The literals were computed by the exhaustive brute-force path (full
    18-mode output fidelities, no degeneracy grouping); the counting path
    must reproduce them.  Class-representative noise grows linearly with
    the copy power, hence the graded tolerances.
    """
    spec = ProbeSpec.from_partition(full_idler_partition(9), 20.5)
    space = cpf_space(9, 1)
    table = fidelity_table_counting(space, spec, LOSS)
    golden = {
        1.0: (7.192932616117448, 0.35929360847226527, 1e-10),
        10.0: (2.762167654357331, 0.05298312604706858, 1e-9),
        100.0: (0.0001926151617599882, 2.576430593043502e-10, 1e-8),
    }
    prev_ub = None
    for copies, (ub, lb, tol) in golden.items():
        rep = bounds_from_table(table, copies)
        assert rep.upper_raw == pytest.approx(ub, rel=tol)
        assert rep.lower_raw == pytest.approx(lb, rel=2 * tol)
        if prev_ub is not None:
            assert rep.upper_raw < prev_ub
        prev_ub = rep.upper_raw


def test_lemma_degeneracy_spread_small():
    # all pattern pairs in one (v, u, d) class share their fidelity
    from multiprobe.gaussian import gaussian_fidelity
    from multiprobe.imagespace import pair_class_key
    from multiprobe.probes import assemble_probe

    m = 4
    spec = ProbeSpec(m, 20.5, blocks=(tuple(range(m)),))
    probe = assemble_probe(spec)
    space = full_space(m)
    outs = [probe.output(LOSS, p) for p in space.patterns]
    groups = {}
    for i, pa in enumerate(space.patterns):
        for j, pb in enumerate(space.patterns):
            if i < j:
                key = pair_class_key(pa, pb, spec.census_blocks)
                groups.setdefault(key, []).append(gaussian_fidelity(outs[i], outs[j]))
    for vals in groups.values():
        assert max(vals) - min(vals) < 1e-10
