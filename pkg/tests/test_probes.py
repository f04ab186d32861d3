from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiprobe.errors import CapacityError, EnergyError, PartitionError
from multiprobe.gaussian import ghz_cm, symplectic_spectrum
from multiprobe.imagespace import full_space
from multiprobe.probes import (
    HYBRID_COHERENT,
    SINGLE_IDLER,
    DisjointPartition,
    IdlerPartition,
    NonDisjointPartition,
    ProbeSpec,
    assemble_probe,
    average_channel_use,
    decompose_rounds,
    extend_for_mutual_probing,
    format_partition,
    full_idler_partition,
    iter_disjoint_partitions,
    iter_nondisjoint_partitions,
    nn_partition,
    odd_m_disjoint_spec,
    pair_partition,
    parse_partition,
)

# ---------------------------------------------------------------------------
# grammar


def test_parse_disjoint():
    p = parse_partition("12|34")
    assert isinstance(p, DisjointPartition)
    assert p.blocks == ((0, 1), (2, 3))
    assert p.m == 4


def test_parse_idler():
    p = parse_partition("1*|23")
    assert isinstance(p, IdlerPartition)
    assert p.blocks == ((0,), (1, 2))
    assert p.idlers == (1, 0)


def test_parse_nondisjoint():
    p = parse_partition("12|23|31")
    assert isinstance(p, NonDisjointPartition)
    assert p.l_overlap == 3


def test_parse_multi_digit():
    p = parse_partition("1,2|3,4,5|6,7|8,9,10")
    assert p.m == 10
    assert p.blocks[3] == (7, 8, 9)
    with pytest.raises(PartitionError):
        parse_partition("1,2|3,10", m=10)  # channels 4..9 uncovered


def test_parse_rejects_bare_single():
    with pytest.raises(PartitionError):
        parse_partition("1|23")
    with pytest.raises(PartitionError):
        parse_partition("12|23*")  # idlers on overlapping blocks


def test_format_round_trip_examples():
    for text in ("12|34", "12|23|31", "1*|23", "123|45", "1,2|3,4,5|6,7|8,9,10"):
        p = parse_partition(text)
        assert format_partition(p) == text
        q = parse_partition(format_partition(p), p.m)
        assert q == p


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_format_parse_round_trip_random(data):
    m = data.draw(st.integers(4, 12))
    order = data.draw(st.permutations(range(m)))
    blocks, at = [], 0
    while at < m:
        size = data.draw(st.integers(2, min(3, m - at)))
        if m - at - size == 1:
            size += 1  # avoid leaving a bare single channel
        blocks.append(tuple(sorted(order[at : at + size])))
        at += size
    p = DisjointPartition(m, tuple(blocks))
    assert parse_partition(format_partition(p), m) == p


# ---------------------------------------------------------------------------
# constructions and rounds


def test_nn_partition_m3():
    assert nn_partition(3).blocks == ((0, 1), (1, 2), (2, 0))


def test_nn_partition_m9():
    p = nn_partition(9)
    assert len(p.blocks) == 9
    assert p.l_overlap == 9
    assert average_channel_use(p, 100) == 200


def test_nn_requires_ring():
    with pytest.raises(PartitionError):
        nn_partition(2)


def test_decompose_rounds_disjoint_is_single():
    p = NonDisjointPartition(4, ((0, 1), (2, 3)))
    assert len(decompose_rounds(p)) == 1


def test_decompose_rounds_nn_even_is_two():
    rounds = decompose_rounds(nn_partition(4))
    assert len(rounds) == 2
    for rnd in rounds:
        flat = [c for blk in rnd for c in blk]
        assert len(flat) == len(set(flat))


def test_decompose_rounds_nn_odd_is_three():
    # odd rings are odd cycles in the conflict graph: three rounds exactly
    for m in (3, 5, 7):
        assert len(decompose_rounds(nn_partition(m))) == 3


def test_decompose_rounds_three_round_example():
    blocks = ((0, 1), (2, 5), (3, 4), (0, 3), (1, 2), (4, 5), (0, 4), (1, 5))
    p = NonDisjointPartition(6, blocks)
    rounds = decompose_rounds(p)
    assert len(rounds) == 3
    all_blocks = sorted(blk for rnd in rounds for blk in rnd)
    assert all_blocks == sorted(blocks)


def test_average_channel_use_examples():
    assert average_channel_use(DisjointPartition(4, ((0, 1), (2, 3))), 100) == 100
    # all-pairs set on m=4: l = 2 C(4,2) - 4 = 8, so (4+8)/4 * 1 = 3
    all_pairs = NonDisjointPartition(
        4, tuple((i, j) for i in range(4) for j in range(i + 1, 4))
    )
    assert average_channel_use(all_pairs, 1) == Fraction(3)
    assert average_channel_use(nn_partition(3), 2.0) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        average_channel_use(all_pairs, 0)


# ---------------------------------------------------------------------------
# extension


def test_extension_all_pairs_m3():
    # {12|23|13} relabels onto {12|34|56}; patterns map to
    # (i1 i2, i2 i3, i1 i3)
    part = NonDisjointPartition(3, ((0, 1), (1, 2), (0, 2)))
    space = full_space(3)
    ext_part, ext_space = extend_for_mutual_probing(part, space)
    assert ext_part.blocks == ((0, 1), (2, 3), (4, 5))
    assert ext_part.m == 6
    i = space.patterns.index((1, 0, 1))
    assert ext_space.extended[i] == (1, 0, 0, 1, 1, 1)
    assert len(ext_space.extended) == len(space)


def test_extension_identity_for_disjoint():
    part = NonDisjointPartition(4, ((0, 1), (2, 3)))
    space = full_space(4)
    ext_part, ext_space = extend_for_mutual_probing(part, space)
    assert part.l_overlap == 0
    assert ext_part.m == 4
    assert ext_space.extended == space.patterns


def test_extension_nn_m4_preserves_cardinality():
    part = nn_partition(4)
    space = full_space(4)
    _, ext_space = extend_for_mutual_probing(part, space)
    assert len(set(ext_space.extended)) == 16


# ---------------------------------------------------------------------------
# probe specs and assembly


def test_spec_single_ghz_block_is_ghz_cm():
    spec = ProbeSpec(4, 3.5, blocks=((0, 1, 2, 3),))
    probe = assemble_probe(spec)
    assert np.allclose(probe.cm.data, ghz_cm(4, 3.5).data, atol=0)


def test_spec_pair_blocks():
    spec = ProbeSpec.from_partition(pair_partition(4), 20.5)
    probe = assemble_probe(spec)
    want = ghz_cm(2, 20.5).data
    assert np.allclose(probe.cm.data[:4, :4], want, atol=0)
    assert np.allclose(probe.cm.data[4:, 4:], want, atol=0)
    assert np.all(probe.cm.data[:4, 4:] == 0)


def test_classical_vacuum_spec():
    spec = ProbeSpec.classical(3, 0.0)
    probe = assemble_probe(spec)
    assert np.allclose(probe.cm.data, 0.5 * np.eye(6), atol=0)
    assert np.all(probe.cm.mean == 0)


def test_spec_requires_energy_for_blocks():
    with pytest.raises(EnergyError):
        ProbeSpec(2, None, blocks=((0, 1),))
    with pytest.raises(EnergyError):
        ProbeSpec(2, 0.3, blocks=((0, 1),))


def test_spec_rejects_uncovered_channels():
    with pytest.raises(PartitionError):
        ProbeSpec(3, 2.0, blocks=((0, 1),))


def test_odd_spec_single_idler():
    spec = odd_m_disjoint_spec(3, 20.5, SINGLE_IDLER)
    assert spec.blocks == ((0, 1), (2,))
    assert spec.idlers == (0, 1)
    probe = assemble_probe(spec)
    assert probe.cm.n_modes == 4
    assert probe.layout.mode_channels() == [0, 1, None, 2]


def test_odd_spec_hybrid():
    spec = odd_m_disjoint_spec(9, 20.5, HYBRID_COHERENT)
    assert len(spec.blocks) == 4
    assert spec.coherent == ((8, pytest.approx(np.sqrt(20.0))),)
    probe = assemble_probe(spec)
    assert probe.cm.n_modes == 9
    assert probe.cm.mean[16] == pytest.approx(np.sqrt(2.0 * 20.0))


def test_odd_spec_rejects_even():
    with pytest.raises(PartitionError):
        odd_m_disjoint_spec(4, 2.0, SINGLE_IDLER)


def test_three_block_odd_partition_literal():
    # odd m handled with one wider block: {12|34|56|789}
    p = parse_partition("12|34|56|789")
    assert isinstance(p, DisjointPartition)
    assert sorted(len(b) for b in p.blocks) == [2, 2, 2, 3]
    spec = ProbeSpec.from_partition(p, 20.5)
    probe = assemble_probe(spec)
    assert probe.cm.n_modes == 9


def test_assembled_probes_are_bona_fide_and_saturated():
    for spec in (
        ProbeSpec(4, 20.5, blocks=((0, 1, 2, 3),)),
        ProbeSpec.from_partition(pair_partition(6), 7.0),
        odd_m_disjoint_spec(5, 3.0, SINGLE_IDLER),
        ProbeSpec.from_partition(full_idler_partition(3), 12.0),
    ):
        probe = assemble_probe(spec)
        spectrum = symplectic_spectrum(probe.cm)
        assert spectrum[0] >= 0.5 - 1e-9
        # saturated correlations pin the smallest eigenvalue at 1/2
        assert spectrum[0] == pytest.approx(0.5, abs=1e-10)


# ---------------------------------------------------------------------------
# family iterators


def test_iter_disjoint_partitions_m4():
    parts = list(iter_disjoint_partitions(4))
    assert len(parts) == 4  # {1234} and the three pairings
    pairs = list(iter_disjoint_partitions(4, n_blocks=2))
    assert sorted(p.blocks for p in pairs) == [
        ((0, 1), (2, 3)),
        ((0, 2), (1, 3)),
        ((0, 3), (1, 2)),
    ]


def test_iter_disjoint_capacity_guard():
    with pytest.raises(CapacityError):
        next(iter_disjoint_partitions(11))


def test_iter_nondisjoint_contains_nn():
    found = list(iter_nondisjoint_partitions(3, 3))
    target = sorted(tuple(sorted(b)) for b in nn_partition(3).blocks)
    assert any(sorted(tuple(sorted(b)) for b in p.blocks) == target for p in found)
    with pytest.raises(CapacityError):
        next(iter_nondisjoint_partitions(11, 2))
