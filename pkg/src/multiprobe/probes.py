"""Partition sets over channel patterns and probe-state assembly.

Partitions distribute entangled blocks over the m channels of a pattern.
Disjoint partitions tile the channels, idler partitions attach protected
modes to blocks, and non-disjoint partitions let blocks overlap; overlaps
are realised by extending the pattern with copy-channels.

Text grammar (1-based channel labels): blocks are separated by ``|``.  A
block containing a comma lists channels as comma-separated integers
("1,2|3,10"); otherwise every character is a single-digit channel.  Each
``*`` in a block adds one idler mode to it ("1*|23").  Overlapping blocks
form a non-disjoint partition, in which idlers are not supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .channels import BlockLayout, IdlerLayout, apply_pattern_with_idlers
from .errors import CapacityError, EnergyError, PartitionError
from .gaussian import CovMatrix, coherent_cm, ghz_cm, tensor
from .imagespace import ExtendedImageSpace, ImageSpace, Pattern

Block = tuple[int, ...]

HYBRID_COHERENT = "hybrid-coherent"
SINGLE_IDLER = "single-idler"

ENUMERATION_MAX_M = 10


def _check_cover(blocks, m: int, *, disjoint: bool) -> None:
    seen: list[int] = []
    for blk in blocks:
        if len(set(blk)) != len(blk):
            raise PartitionError(f"block {blk} repeats a channel")
        if any(not 0 <= c < m for c in blk):
            raise PartitionError(f"block {blk} outside channel range 0..{m - 1}")
        seen.extend(blk)
    if disjoint and len(set(seen)) != len(seen):
        raise PartitionError("blocks overlap in a disjoint partition")
    if set(seen) != set(range(m)):
        missing = sorted(set(range(m)) - set(seen))
        raise PartitionError(f"channels {missing} not covered by any block")


@dataclass(frozen=True)
class DisjointPartition:
    """Pairwise-disjoint blocks of size >= 2 tiling the m channels."""

    m: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        _check_cover(self.blocks, self.m, disjoint=True)
        for blk in self.blocks:
            if len(blk) < 2:
                raise PartitionError(f"unassisted block {blk} needs at least 2 channels")

    @property
    def l_overlap(self) -> int:
        return 0


@dataclass(frozen=True)
class IdlerPartition:
    """Disjoint blocks of size >= 1 plus a per-block idler count."""

    m: int
    blocks: tuple[Block, ...]
    idlers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        object.__setattr__(self, "idlers", tuple(int(i) for i in self.idlers))
        if len(self.idlers) != len(self.blocks):
            raise PartitionError("need one idler count per block")
        _check_cover(self.blocks, self.m, disjoint=True)
        for blk, q in zip(self.blocks, self.idlers):
            if q < 0:
                raise PartitionError("idler counts must be >= 0")
            if len(blk) + q < 2:
                raise PartitionError(f"block {blk} with {q} idlers is a bare single mode")

    @property
    def l_overlap(self) -> int:
        return 0

    @property
    def total_modes(self) -> int:
        return self.m + sum(self.idlers)


@dataclass(frozen=True)
class NonDisjointPartition:
    """Blocks of size >= 2 that may overlap; every channel covered at least once."""

    m: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        _check_cover(self.blocks, self.m, disjoint=False)
        for blk in self.blocks:
            if len(blk) < 2:
                raise PartitionError(f"unassisted block {blk} needs at least 2 channels")

    @property
    def l_overlap(self) -> int:
        return sum(len(b) for b in self.blocks) - self.m


Partition = DisjointPartition | IdlerPartition | NonDisjointPartition


# ---------------------------------------------------------------------------
# text grammar


def parse_partition(text: str, m: int | None = None) -> Partition:
    """Parse the compact partition grammar (see module docstring)."""
    blocks: list[Block] = []
    idlers: list[int] = []
    for chunk in text.strip().split("|"):
        chunk = chunk.strip()
        if not chunk:
            raise PartitionError(f"empty block in partition literal {text!r}")
        stars = chunk.count("*")
        body = chunk.replace("*", "")
        if "," in body:
            labels = [int(tok) for tok in body.split(",") if tok]
        else:
            labels = [int(ch) for ch in body]
        if any(lab < 1 for lab in labels):
            raise PartitionError("channel labels are 1-based")
        blocks.append(tuple(lab - 1 for lab in labels))
        idlers.append(stars)
    if m is None:
        m = max(c for blk in blocks for c in blk) + 1
    flat = [c for blk in blocks for c in blk]
    overlapping = len(flat) != len(set(flat))
    if overlapping:
        if any(idlers):
            raise PartitionError("idlers are not supported on non-disjoint partitions")
        return NonDisjointPartition(m, tuple(blocks))
    if any(idlers):
        return IdlerPartition(m, tuple(blocks), tuple(idlers))
    return DisjointPartition(m, tuple(blocks))


def format_partition(partition: Partition) -> str:
    """Inverse of parse_partition (round-trips for every valid partition)."""
    idlers = getattr(partition, "idlers", (0,) * len(partition.blocks))
    multi = partition.m > 9
    parts = []
    for blk, q in zip(partition.blocks, idlers):
        labels = [c + 1 for c in blk]
        body = ",".join(str(x) for x in labels) if multi else "".join(str(x) for x in labels)
        parts.append(body + "*" * q)
    return "|".join(parts)


# ---------------------------------------------------------------------------
# standard constructions


def nn_partition(m: int) -> NonDisjointPartition:
    """Nearest-neighbour ring: blocks (k, k+1) on a closed 1-d lattice."""
    if m < 3:
        raise PartitionError(f"nearest-neighbour ring needs m >= 3, got {m}")
    blocks = tuple((k, (k + 1) % m) for k in range(m))
    return NonDisjointPartition(m, blocks)


def pair_partition(m: int) -> DisjointPartition:
    """Adjacent disjoint pairs (12)(34)... for even m."""
    if m % 2:
        raise PartitionError(f"pair tiling needs even m, got {m}")
    return DisjointPartition(m, tuple((2 * k, 2 * k + 1) for k in range(m // 2)))


def full_idler_partition(m: int) -> IdlerPartition:
    """Every channel probed by its own two-mode block with one idler."""
    return IdlerPartition(m, tuple((k,) for k in range(m)), (1,) * m)


def average_channel_use(partition: Partition, copies):
    """Average probings per channel: (m + l) / m * M.

    Returns an exact Fraction for integral M, a float otherwise.
    """
    if copies < 1:
        raise ValueError(f"copy number must be >= 1, got {copies}")
    m, l = partition.m, partition.l_overlap
    if isinstance(copies, (int, np.integer)) or (
        isinstance(copies, Fraction) and copies.denominator == 1
    ):
        return Fraction((m + l) * int(copies), m)
    return (m + l) / m * float(copies)


# ---------------------------------------------------------------------------
# disjoint-round decomposition


def _conflicts(blocks) -> list[set[int]]:
    n = len(blocks)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if set(blocks[i]) & set(blocks[j]):
                adj[i].add(j)
                adj[j].add(i)
    return adj


def _greedy_coloring(adj) -> list[int]:
    colors = [-1] * len(adj)
    for i in range(len(adj)):
        used = {colors[j] for j in adj[i] if colors[j] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    return colors


def _exact_coloring(adj, k: int) -> list[int] | None:
    """Backtracking k-coloring; None if impossible."""
    n = len(adj)
    order = sorted(range(n), key=lambda i: -len(adj[i]))
    colors = [-1] * n

    def place(pos: int, max_used: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        used = {colors[j] for j in adj[i] if colors[j] >= 0}
        # fresh colors beyond max_used + 1 are symmetric, skip them
        for c in range(min(k, max_used + 2)):
            if c in used:
                continue
            colors[i] = c
            if place(pos + 1, max(max_used, c)):
                return True
            colors[i] = -1
        return False

    return colors if place(0, -1) else None


def decompose_rounds(partition: NonDisjointPartition) -> tuple[tuple[Block, ...], ...]:
    """Split the blocks into a minimal number of internally disjoint rounds.

    Rounds need not cover every channel, only the union over rounds does.
    Minimality is exact for up to 12 blocks (backtracking on the conflict
    graph), greedy first-fit beyond that.
    """
    blocks = partition.blocks
    adj = _conflicts(blocks)
    colors = _greedy_coloring(adj)
    n_colors = max(colors) + 1
    if len(blocks) <= 12:
        for k in range(1, n_colors):
            exact = _exact_coloring(adj, k)
            if exact is not None:
                colors, n_colors = exact, k
                break
    rounds: list[list[Block]] = [[] for _ in range(n_colors)]
    for blk, c in zip(blocks, colors):
        rounds[c].append(blk)
    return tuple(tuple(r) for r in rounds)


# ---------------------------------------------------------------------------
# copy-channel extension for mutual probing


def extend_for_mutual_probing(
    partition: NonDisjointPartition, space: ImageSpace
) -> tuple[DisjointPartition, ExtendedImageSpace]:
    """Relabel overlapping blocks onto m + l fresh channels.

    Every channel instance in block order gets a new label, so the blocks
    become consecutive disjoint groups; each extended pattern is the
    original pattern's bits read off per block.  The image-space size is
    unchanged because copy-channels are determined by their originals.
    """
    if space.m != partition.m:
        raise PartitionError(
            f"partition over m={partition.m} does not match space m={space.m}"
        )
    sizes = [len(b) for b in partition.blocks]
    bounds = np.cumsum([0] + sizes)
    new_blocks = tuple(
        tuple(range(bounds[j], bounds[j + 1])) for j in range(len(sizes))
    )
    m_ext = int(bounds[-1])
    extended = tuple(
        tuple(pat[c] for blk in partition.blocks for c in blk) for pat in space.patterns
    )
    ext_space = ExtendedImageSpace(space, extended, m_ext)
    return DisjointPartition(m_ext, new_blocks), ext_space


# ---------------------------------------------------------------------------
# probe specifications and assembly


@dataclass(frozen=True)
class BlockDescriptor:
    """One sub-state of a probe: an entangled block or a coherent mode."""

    kind: str  # "ghz" | "coherent"
    channels: Block
    idlers: int = 0
    mu: float | None = None
    alpha: float | None = None

    @property
    def n_modes(self) -> int:
        return self.idlers + len(self.channels)


@dataclass(frozen=True)
class ProbeSpec:
    """Declarative description of what to shine at an m-channel pattern.

    Entangled blocks (with optional idlers, all at squeezing mu) plus
    single-mode coherent probes must jointly cover every channel exactly
    once.  An all-coherent spec with amplitude 0 is the vacuum probe.
    """

    m: int
    mu: float | None
    blocks: tuple[Block, ...] = ()
    idlers: tuple[int, ...] = ()
    coherent: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))
        idlers = self.idlers or (0,) * len(self.blocks)
        object.__setattr__(self, "idlers", tuple(int(q) for q in idlers))
        object.__setattr__(
            self, "coherent", tuple((int(c), float(a)) for c, a in self.coherent)
        )
        if len(self.idlers) != len(self.blocks):
            raise PartitionError("need one idler count per entangled block")
        cover = list(self.blocks) + [(c,) for c, _ in self.coherent]
        _check_cover(cover, self.m, disjoint=True)
        for blk, q in zip(self.blocks, self.idlers):
            if len(blk) + q < 2:
                raise PartitionError(f"entangled block {blk} needs >= 2 modes (use an idler)")
        if self.blocks:
            if self.mu is None:
                raise EnergyError("entangled blocks need a squeezing energy mu")
            if self.mu < 0.5:
                raise EnergyError(f"squeezing mu must be >= 1/2, got {self.mu}")

    @classmethod
    def from_partition(cls, partition, mu: float) -> "ProbeSpec":
        if isinstance(partition, NonDisjointPartition):
            raise PartitionError(
                "non-disjoint partitions are probed via mutual probing, not directly"
            )
        if isinstance(partition, IdlerPartition):
            return cls(partition.m, mu, partition.blocks, partition.idlers)
        return cls(partition.m, mu, partition.blocks)

    @classmethod
    def classical(cls, m: int, alpha: float = 0.0) -> "ProbeSpec":
        """Per-channel coherent (or vacuum, alpha=0) probes."""
        return cls(m, None, coherent=tuple((c, alpha) for c in range(m)))

    def descriptors(self) -> tuple[BlockDescriptor, ...]:
        out = [
            BlockDescriptor("ghz", blk, q, mu=self.mu)
            for blk, q in zip(self.blocks, self.idlers)
        ]
        out.extend(
            BlockDescriptor("coherent", (c,), alpha=a) for c, a in self.coherent
        )
        return tuple(out)

    @property
    def census_blocks(self) -> tuple[Block, ...]:
        return tuple(d.channels for d in self.descriptors())

    @property
    def n_modes(self) -> int:
        return sum(d.n_modes for d in self.descriptors())


def odd_m_disjoint_spec(m: int, mu: float, strategy: str) -> ProbeSpec:
    """Two-mode blocks over m-1 channels plus a remainder-channel strategy.

    ``single-idler``: the remainder channel is probed by one arm of an
    extra two-mode block whose other arm is kept as an idler.
    ``hybrid-coherent``: the remainder channel gets a coherent probe of
    the same per-mode energy as the squeezed blocks.
    """
    if m % 2 == 0 or m < 3:
        raise PartitionError(f"odd-m strategies need odd m >= 3, got {m}")
    pairs = tuple((2 * k, 2 * k + 1) for k in range((m - 1) // 2))
    if strategy == SINGLE_IDLER:
        return ProbeSpec(m, mu, pairs + ((m - 1,),), (0,) * len(pairs) + (1,))
    if strategy == HYBRID_COHERENT:
        alpha = float(np.sqrt(mu - 0.5))
        return ProbeSpec(m, mu, pairs, coherent=((m - 1, alpha),))
    raise ValueError(f"unknown odd-m strategy {strategy!r}")


@dataclass(frozen=True)
class ProbeState:
    """Assembled probe: covariance matrix plus its mode-to-channel layout."""

    spec: ProbeSpec
    cm: CovMatrix
    layout: IdlerLayout

    def output(self, family, pattern) -> CovMatrix:
        return apply_pattern_with_idlers(self.cm, family, pattern, self.layout)


def assemble_probe(spec: ProbeSpec) -> ProbeState:
    """Build the block-diagonal probe CM in descriptor order.

    Entangled blocks become GHZ states over idlers + probe modes (idlers
    first); coherent entries become displaced vacuum modes.
    """
    parts = []
    layout_blocks = []
    for desc in spec.descriptors():
        if desc.kind == "ghz":
            parts.append(ghz_cm(desc.n_modes, desc.mu))
            layout_blocks.append(BlockLayout(desc.idlers, desc.channels))
        else:
            parts.append(coherent_cm([desc.alpha]))
            layout_blocks.append(BlockLayout(0, desc.channels))
    return ProbeState(spec, tensor(*parts), IdlerLayout(tuple(layout_blocks)))


# ---------------------------------------------------------------------------
# bounded family iterators (exploratory use only)


def iter_disjoint_partitions(m: int, n_blocks: int | None = None, min_block: int = 2):
    """Yield every disjoint partition of m channels into blocks >= min_block.

    Exploration helper; hard-capped at m <= 10 because the family grows
    super-exponentially.
    """
    if m > ENUMERATION_MAX_M:
        raise CapacityError(f"disjoint-partition enumeration capped at m={ENUMERATION_MAX_M}")

    def rec(remaining: tuple[int, ...], acc: tuple[Block, ...]):
        if not remaining:
            if n_blocks is None or len(acc) == n_blocks:
                yield DisjointPartition(m, acc)
            return
        if n_blocks is not None and len(acc) >= n_blocks:
            return
        anchor, rest = remaining[0], remaining[1:]
        for size in range(min_block, len(remaining) + 1):
            for extra in combinations(rest, size - 1):
                left = tuple(c for c in rest if c not in extra)
                yield from rec(left, acc + ((anchor,) + extra,))

    yield from rec(tuple(range(m)), ())


def iter_nondisjoint_partitions(m: int, n_blocks: int, min_block: int = 2):
    """Yield covering multisets of n (possibly overlapping) blocks.

    Exploration helper with hard caps (m <= 10, n_blocks <= 5): the family
    size explodes combinatorially.
    """
    if m > ENUMERATION_MAX_M or n_blocks > 5:
        raise CapacityError("non-disjoint enumeration capped at m<=10, n_blocks<=5")
    pool = [
        blk
        for size in range(min_block, m + 1)
        for blk in combinations(range(m), size)
    ]
    seen_all = set(range(m))
    from itertools import combinations_with_replacement

    for combo in combinations_with_replacement(pool, n_blocks):
        if set().union(*combo) == seen_all:
            yield NonDisjointPartition(m, tuple(combo))
