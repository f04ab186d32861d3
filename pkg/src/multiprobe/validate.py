"""Oracle-equivalence and invariant suites behind ``multiprobe validate``.

Each suite reports its maximum observed deviation against a fixed
tolerance.  The ``quick`` scale keeps pattern lengths at m <= 4 and runs in
well under a minute; ``full`` extends to m <= 6 and adds the mutual-probing
cross-checks.  ``smoke`` is a seconds-scale subset used by the CLI tests.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import closedform, gaussian
from .bounds import (
    FidelityTable,
    bounds_from_table,
    bounds_tmsv_pairs,
    bounds_tmsv_pairs_odd,
    fidelity_table_blocks,
    fidelity_table_bruteforce,
    fidelity_table_counting,
    tmsv_subfidelity,
)
from .channels import BlockLayout, ChannelFamily, IdlerLayout, apply_pattern_with_idlers
from .gaussian import gaussian_fidelity, ghz_cm, symplectic_spectrum, tensor
from .imagespace import bcpf_space, cpf_space, full_space, pair_class_key
from .probes import (
    SINGLE_IDLER,
    ProbeSpec,
    assemble_probe,
    extend_for_mutual_probing,
    nn_partition,
    odd_m_disjoint_spec,
    pair_partition,
)

SCALES = ("smoke", "quick", "full")


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    max_deviation: float
    tolerance: float
    cases: int

    def to_dict(self) -> dict:
        return asdict(self)


def _families() -> list[ChannelFamily]:
    return [
        ChannelFamily.pure_loss(0.99, 0.97),
        ChannelFamily.additive(0.02, 0.01),
    ]


def _random_family(rng) -> ChannelFamily:
    kind = rng.integers(0, 3)
    if kind == 0:
        eta = rng.uniform(0.3, 0.999, 2)
        return ChannelFamily.pure_loss(*eta)
    if kind == 1:
        nu = rng.uniform(0.002, 0.4, 2)
        return ChannelFamily.additive(*nu)
    tau = rng.uniform(0.3, 1.7, 2)
    eps = rng.uniform(0.5, 2.0, 2)
    return ChannelFamily.thermal(tau[0], eps[0], tau[1], eps[1])


def _random_spec(rng, m: int) -> ProbeSpec:
    mu = float(rng.uniform(0.6, 50.0))
    choice = rng.integers(0, 3)
    if choice == 0:
        return ProbeSpec(m, mu, blocks=(tuple(range(m)),))
    if choice == 1 and m % 2 == 0:
        return ProbeSpec.from_partition(pair_partition(m), mu)
    if m % 2:
        return odd_m_disjoint_spec(m, mu, SINGLE_IDLER)
    return ProbeSpec.from_partition(pair_partition(m), mu)


def _partitions_for(m: int) -> list[ProbeSpec]:
    mu = 20.5
    specs = [ProbeSpec(m, mu, blocks=(tuple(range(m)),))]
    if m % 2 == 0 and m > 2:
        specs.append(ProbeSpec.from_partition(pair_partition(m), mu))
    if m % 2 and m >= 3:
        specs.append(odd_m_disjoint_spec(m, mu, SINGLE_IDLER))
    if m == 6:
        specs.append(ProbeSpec(m, mu, blocks=((0, 1, 2), (3, 4, 5))))
    return specs


def _spaces_for(m: int):
    spaces = [full_space(m), cpf_space(m, 1)]
    if m >= 2:
        spaces.append(cpf_space(m, 2))
        spaces.append(bcpf_space(m, (1, 2)))
    return spaces


def suite_ghz_spectrum(scale: str) -> SuiteResult:
    """GHZ symplectic spectra match their closed form.

    The 1e-10 tolerance widens quadratically with mu: at saturation the
    stored double-precision CM itself shifts the critical eigenvalue by
    O(eps mu^2), so no algorithm can do better (deviation is reported as
    excess over the scale-aware slack).
    """
    tol = 1e-10
    mus = [0.5, 0.7, 2.5, 20.5, 317.0, 1e4]
    ms = range(2, 13)
    worst, cases = 0.0, 0
    for mu in mus:
        slack = gaussian._scale_tol(0.0, mu)
        for m in ms:
            got = symplectic_spectrum(ghz_cm(m, mu))
            want = gaussian.ghz_spectrum_closed_form(m, mu)
            dev = float(np.max(np.abs(got - want) / np.maximum(want, 1.0)))
            worst = max(worst, dev - slack)
            cases += 1
    return SuiteResult("ghz_spectrum", worst < tol, worst, tol, cases)


def suite_bona_fide(scale: str, seed: int = 0) -> SuiteResult:
    """Random probes through random physical channels stay bona fide."""
    tol = gaussian.BONA_FIDE_TOL
    rng = np.random.default_rng(seed)
    n_cases = {"smoke": 10, "quick": 60, "full": 200}[scale]
    worst = 0.0
    for _ in range(n_cases):
        m = int(rng.integers(2, 6))
        spec = _random_spec(rng, m)
        family = _random_family(rng)
        probe = assemble_probe(spec)
        pattern = tuple(int(b) for b in rng.integers(0, 2, m))
        out = probe.output(family, pattern)  # construction re-validates
        worst = max(worst, max(0.0, 0.5 - float(out.spectrum[0])))
    return SuiteResult("bona_fide_outputs", worst < tol, worst, tol, n_cases)


def suite_fidelity_symmetry(scale: str, seed: int = 1) -> SuiteResult:
    """F(a, b) == F(b, a) on random physical output pairs."""
    tol = 1e-12
    rng = np.random.default_rng(seed)
    n_cases = {"smoke": 10, "quick": 50, "full": 150}[scale]
    worst = 0.0
    for _ in range(n_cases):
        m = int(rng.integers(2, 5))
        spec = _random_spec(rng, m)
        family = _random_family(rng)
        probe = assemble_probe(spec)
        pa = tuple(int(b) for b in rng.integers(0, 2, m))
        pb = tuple(int(b) for b in rng.integers(0, 2, m))
        oa, ob = probe.output(family, pa), probe.output(family, pb)
        worst = max(worst, abs(gaussian_fidelity(oa, ob) - gaussian_fidelity(ob, oa)))
    return SuiteResult("fidelity_symmetry", worst < tol, worst, tol, n_cases)


def suite_closed_form_oracles(scale: str) -> SuiteResult:
    """Numeric two-mode sub-fidelities match the displayed closed forms."""
    tol = 1e-9
    worst, cases = 0.0, 0
    grid = [(0.02, 0.01), (0.05, 0.01), (0.1, 0.005)]
    mus = [0.6, 5.5, 20.5] if scale == "smoke" else [0.6, 1.5, 5.5, 20.5, 100.5]
    for nu_b, nu_t in grid:
        fam = ChannelFamily.additive(nu_b, nu_t)
        for mu in mus:
            want = closedform.tmsv_additive_f11(mu, nu_b, nu_t)
            got = tmsv_subfidelity(fam, mu, 1, 1, 2)
            worst = max(worst, abs(got - want) / want)
            cases += 1
    for eta_b, eta_t in [(0.99, 0.97), (0.9, 0.95), (0.999, 0.9)]:
        fam = ChannelFamily.pure_loss(eta_b, eta_t)
        for mu in mus:
            want = closedform.tmsv_loss_f02(mu, eta_b, eta_t)
            got = tmsv_subfidelity(fam, mu, 0, 2, 2)
            worst = max(worst, abs(got - want) / want)
            cases += 1
    return SuiteResult("closed_form_oracles", worst < tol, worst, tol, cases)


def _counting_configs(scale: str):
    ms = {"smoke": [2, 3], "quick": [2, 3, 4], "full": [2, 3, 4, 5, 6]}[scale]
    for m in ms:
        for spec in _partitions_for(m):
            for space in _spaces_for(m):
                for family in _families():
                    yield m, spec, space, family


def suite_counting_vs_bruteforce(scale: str) -> SuiteResult:
    """Occupancy-counting bounds equal exhaustive full-state evaluation."""
    tol = 1e-10
    worst, cases = 0.0, 0
    for _m, spec, space, family in _counting_configs(scale):
        table_b = fidelity_table_bruteforce(space.patterns, None, spec, family)
        table_c = fidelity_table_counting(space, spec, family)
        for copies in (1, 10):
            rb = bounds_from_table(table_b, copies)
            rc = bounds_from_table(table_c, copies)
            for raw_b, raw_c in ((rb.upper_raw, rc.upper_raw), (rb.lower_raw, rc.lower_raw)):
                if raw_b > 0:
                    worst = max(worst, abs(raw_b - raw_c) / raw_b)
            cases += 1
    return SuiteResult("counting_vs_bruteforce", worst < tol, worst, tol, cases)


def suite_tmsv_closed_form(scale: str) -> SuiteResult:
    """Paired-TMSV closed-form bounds equal the counting path."""
    tol = 1e-10
    worst, cases = 0.0, 0
    ms = {"smoke": [2, 3], "quick": [2, 3, 4], "full": [2, 3, 4, 5, 6]}[scale]
    mu = 20.5
    for m in ms:
        space = full_space(m)
        for family in _families():
            for copies in (1, 10):
                if m % 2 == 0:
                    spec = ProbeSpec.from_partition(pair_partition(m), mu) if m > 2 else ProbeSpec(
                        m, mu, blocks=((0, 1),)
                    )
                    closed = bounds_tmsv_pairs(family, mu, copies, m)
                else:
                    spec = odd_m_disjoint_spec(m, mu, SINGLE_IDLER)
                    closed = bounds_tmsv_pairs_odd(family, mu, copies, m, SINGLE_IDLER)
                counted = bounds_from_table(fidelity_table_counting(space, spec, family), copies)
                for a, b in ((closed.upper_raw, counted.upper_raw), (closed.lower_raw, counted.lower_raw)):
                    if b > 0:
                        worst = max(worst, abs(a - b) / b)
                cases += 1
    return SuiteResult("tmsv_closed_form", worst < tol, worst, tol, cases)


def suite_degeneracy_classes(scale: str) -> SuiteResult:
    """Fidelities are constant within per-block (v, u, d) classes.

    Checks a single GHZ probe (global classes) and a blocked probe
    (per-block classes) by exhausting all pattern pairs.
    """
    tol = 1e-10
    worst, cases = 0.0, 0
    ms = {"smoke": [3], "quick": [3, 4], "full": [3, 4, 5, 6]}[scale]
    mu = 20.5
    for m in ms:
        space = full_space(m)
        for family in _families():
            for spec in _partitions_for(m):
                probe = assemble_probe(spec)
                outputs = [probe.output(family, p) for p in space.patterns]
                seen: dict = {}
                for i, pa in enumerate(space.patterns):
                    for j in range(i + 1, len(space.patterns)):
                        key = pair_class_key(pa, space.patterns[j], spec.census_blocks)
                        fid = gaussian_fidelity(outputs[i], outputs[j])
                        seen.setdefault(key, []).append(fid)
                for vals in seen.values():
                    worst = max(worst, max(vals) - min(vals))
                cases += 1
    return SuiteResult("degeneracy_classes", worst < tol, worst, tol, cases)


def suite_multiplicativity(scale: str, seed: int = 2) -> SuiteResult:
    """F(A (+) A', B (+) B') = F(A, B) F(A', B') for block-diagonal states."""
    tol = 1e-10
    rng = np.random.default_rng(seed)
    n_cases = {"smoke": 10, "quick": 40, "full": 100}[scale]
    worst = 0.0
    for _ in range(n_cases):
        family = _random_family(rng)
        parts_a, parts_b = [], []
        for _ in range(int(rng.integers(2, 4))):
            mu = float(rng.uniform(0.6, 30.0))
            k = int(rng.integers(2, 4))
            block = ghz_cm(k, mu)
            pa = tuple(int(b) for b in rng.integers(0, 2, k))
            pb = tuple(int(b) for b in rng.integers(0, 2, k))
            lay = IdlerLayout((BlockLayout(0, tuple(range(k))),))
            parts_a.append(apply_pattern_with_idlers(block, family, pa, lay))
            parts_b.append(apply_pattern_with_idlers(block, family, pb, lay))
        joint = gaussian_fidelity(tensor(*parts_a), tensor(*parts_b))
        product = math.prod(gaussian_fidelity(a, b) for a, b in zip(parts_a, parts_b))
        worst = max(worst, abs(joint - product))
    return SuiteResult("block_multiplicativity", worst < tol, worst, tol, n_cases)


def suite_monotonicity(scale: str) -> SuiteResult:
    """Clipped bounds never increase with the copy number."""
    tol = 1e-12
    worst, cases = 0.0, 0
    ms = [3, 4] if scale != "full" else [3, 4, 5]
    for m in ms:
        space = full_space(m)
        for family in _families():
            spec = _partitions_for(m)[0]
            table = fidelity_table_counting(space, spec, family)
            prev = None
            for copies in (1, 2, 5, 10, 50, 200):
                rep = bounds_from_table(table, copies)
                if prev is not None:
                    worst = max(worst, rep.upper - prev.upper, rep.lower - prev.lower)
                prev = rep
                cases += 1
    return SuiteResult("bound_monotonicity", worst < tol, worst, tol, cases)


def suite_mutual_vs_bruteforce(scale: str) -> SuiteResult:
    """Mutual-probing bounds equal exhaustive evaluation on the extension."""
    tol = 1e-12
    worst, cases = 0.0, 0
    mu = 20.5
    ms = [3] if scale != "full" else [3, 4]
    for m in ms:
        partition = nn_partition(m)
        space = full_space(m)
        for family in _families():
            ext_part, ext_space = extend_for_mutual_probing(partition, space)
            spec = ProbeSpec(ext_part.m, mu, ext_part.blocks)
            # reference: per-pair product of per-block fidelities, no grouping
            probe_blocks = []
            for blk in ext_part.blocks:
                state = ghz_cm(len(blk), mu)
                lay = IdlerLayout((BlockLayout(0, tuple(range(len(blk)))),))
                probe_blocks.append((blk, state, lay))
            n = len(ext_space.extended)
            ref = np.ones((n, n))
            outs = []
            for pat in ext_space.extended:
                outs.append(
                    [
                        apply_pattern_with_idlers(st, family, tuple(pat[c] for c in blk), lay)
                        for blk, st, lay in probe_blocks
                    ]
                )
            for i in range(n):
                for j in range(i + 1, n):
                    val = math.prod(
                        gaussian_fidelity(a, b) for a, b in zip(outs[i], outs[j])
                    )
                    ref[i, j] = ref[j, i] = val
            fast = fidelity_table_blocks(ext_space.extended, None, spec.descriptors(), family)
            for copies in (1, 7):
                rb = bounds_from_table(FidelityTable(n, matrix=ref), copies)
                rc = bounds_from_table(fast, copies)
                for a, b in ((rb.upper_raw, rc.upper_raw), (rb.lower_raw, rc.lower_raw)):
                    if a > 0:
                        worst = max(worst, abs(a - b) / a)
                cases += 1
    return SuiteResult("mutual_vs_bruteforce", worst < tol, worst, tol, cases)


_SUITES = [
    suite_ghz_spectrum,
    suite_bona_fide,
    suite_fidelity_symmetry,
    suite_closed_form_oracles,
    suite_counting_vs_bruteforce,
    suite_tmsv_closed_form,
    suite_degeneracy_classes,
    suite_multiplicativity,
    suite_monotonicity,
]


def run_suites(scale: str = "quick") -> list[SuiteResult]:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
    results = [suite(scale) for suite in _SUITES]
    if scale == "full":
        results.append(suite_mutual_vs_bruteforce(scale))
    return results
