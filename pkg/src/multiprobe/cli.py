"""Command-line front end: bound sweeps, validation runs, censuses.

Exit codes: 0 success, 1 usage/config error, 2 validation failure,
3 numeric error.  Output is deterministic: identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    bounds_by_counting,
    bounds_mutual_probing,
    classical_benchmark,
    fidelity_table_blocks,
    fidelity_table_counting,
    guaranteed_advantage,
)
from .channels import ChannelFamily
from .errors import NumericError
from .imagespace import bcpf_space, cpf_space, full_space, read_space
from .presets import CLASSICAL, DISJOINT, MUTUAL, resolve_probe
from .probes import SINGLE_IDLER, extend_for_mutual_probing
from .validate import SCALES, run_suites

COLUMNS = [
    "family",
    "m",
    "space",
    "probe",
    "eta_b",
    "eta_t",
    "nu_b",
    "nu_t",
    "tau_b",
    "tau_t",
    "eps_b",
    "eps_t",
    "ns",
    "mu",
    "copies",
    "m_bar",
    "lower_raw",
    "lower",
    "upper_raw",
    "upper",
    "delta_perr",
    "method",
    "rounds",
]

HEADER_COMMENT = "# multiprobe bounds columns-v1"
CENSUS_COMMENT = "# multiprobe census columns-v1"

SWEEPABLE = (
    "eta-b",
    "eta-t",
    "nu-b",
    "nu-t",
    "tau-b",
    "tau-t",
    "eps-b",
    "eps-t",
    "ns",
    "mu",
    "copies",
    "mbar",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2)
        raise UsageError(message)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_grid(spec: str):
    """``param=start:stop:steps`` (linear) or ``param=log:start:stop:steps``."""
    try:
        name, rest = spec.split("=", 1)
        name = name.strip()
        parts = rest.split(":")
        log = False
        if parts[0] == "log":
            log = True
            parts = parts[1:]
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError) as exc:
        raise UsageError(f"bad grid spec {spec!r}; expected param=start:stop:steps") from exc
    if name not in SWEEPABLE:
        raise UsageError(f"cannot sweep {name!r}; sweepable: {', '.join(SWEEPABLE)}")
    if steps < 1:
        raise UsageError("grid needs at least one step")
    if steps == 1:
        values = [start]
    elif log:
        values = [float(x) for x in np.geomspace(start, stop, steps)]
    else:
        values = [float(x) for x in np.linspace(start, stop, steps)]
    return name, values


def build_space(text: str, m: int):
    """``full``, ``cpf:K``, ``bcpf:K1,K2``, or ``file:PATH``."""
    text = text.strip()
    if text == "full":
        return full_space(m)
    if text.startswith("cpf:"):
        return cpf_space(m, int(text[4:]))
    if text.startswith("bcpf:"):
        return bcpf_space(m, [int(tok) for tok in text[5:].split(",")])
    if text.startswith("file:"):
        with open(text[5:]) as fh:
            space = read_space(fh)
        if space.m != m:
            raise UsageError(f"space file has m={space.m}, expected {m}")
        return space
    raise UsageError(f"unknown space {text!r}; use full, cpf:K, bcpf:K1,K2 or file:PATH")


def build_family(payload: dict) -> ChannelFamily:
    kind = payload["family"]
    if kind == "pure-loss":
        if payload.get("eta-b") is None or payload.get("eta-t") is None:
            raise UsageError("pure-loss needs --eta-b and --eta-t")
        return ChannelFamily.pure_loss(payload["eta-b"], payload["eta-t"])
    if kind == "additive-noise":
        if payload.get("nu-b") is None or payload.get("nu-t") is None:
            raise UsageError("additive-noise needs --nu-b and --nu-t")
        return ChannelFamily.additive(payload["nu-b"], payload["nu-t"])
    if kind == "thermal":
        needed = ("tau-b", "eps-b", "tau-t", "eps-t")
        if any(payload.get(k) is None for k in needed):
            raise UsageError("thermal needs --tau-b, --eps-b, --tau-t, --eps-t")
        return ChannelFamily.thermal(*(payload[k] for k in needed))
    raise UsageError(f"unknown family {kind!r}")


def _energy(payload: dict):
    ns, mu = payload.get("ns"), payload.get("mu")
    if mu is None and ns is None:
        raise UsageError("need --ns or --mu (or a grid over one of them)")
    if mu is None:
        mu = ns + 0.5
    if ns is None:
        ns = mu - 0.5
    return float(ns), float(mu)


def _eval_point(payload: dict) -> dict:
    """Evaluate one grid point; also the worker-pool entry point."""
    family = build_family(payload)
    ns, mu = _energy(payload)
    m = payload["m"]
    space = build_space(payload["space"], m)
    plan = resolve_probe(payload["probe"], m, mu, payload["odd_strategy"])
    l_overlap = plan.partition.l_overlap if plan.route == MUTUAL else 0
    copies, mbar = payload.get("copies"), payload.get("mbar")
    if copies is None and mbar is None:
        raise UsageError("need --copies or --mbar (or a grid over one of them)")
    if copies is not None and mbar is not None:
        raise UsageError("--copies and --mbar are mutually exclusive")
    if copies is None:
        copies = mbar * m / (m + l_overlap)
    if plan.route == CLASSICAL:
        report = classical_benchmark(space, family, ns, copies)
    elif plan.route == MUTUAL:
        report = bounds_mutual_probing(space, plan.partition, family, mu, copies)
    else:
        report = bounds_by_counting(space, plan.spec, family, copies)
    delta = None
    if payload["against_classical"] and plan.route != CLASSICAL:
        comparator = classical_benchmark(space, family, ns, report.m_bar)
        delta = guaranteed_advantage(comparator, report)
        report.delta_perr = delta
    row = {c: None for c in COLUMNS}
    row.update(
        family=family.kind,
        m=m,
        space=payload["space"],
        probe=payload["probe"],
        ns=ns,
        mu=mu,
        copies=report.copies,
        m_bar=report.m_bar,
        lower_raw=report.lower_raw,
        lower=report.lower,
        upper_raw=report.upper_raw,
        upper=report.upper,
        delta_perr=delta,
        method=report.method,
        rounds=report.rounds,
    )
    for key in ("eta-b", "eta-t", "nu-b", "nu-t", "tau-b", "tau-t", "eps-b", "eps-t"):
        row[key.replace("-", "_")] = payload.get(key)
    return row


def _write_rows(rows, columns, fmt: str, out, comment: str) -> None:
    if fmt == "csv":
        out.write(comment + "\n")
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    else:
        for row in rows:
            out.write(json.dumps({c: row[c] for c in columns}) + "\n")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


# ---------------------------------------------------------------------------
# subcommands


@dataclass
class Sweep:
    scalars: dict
    grids: list = field(default_factory=list)  # [(name, values)]

    def payloads(self):
        def rec(idx, acc):
            if idx == len(self.grids):
                yield dict(acc)
                return
            name, values = self.grids[idx]
            for v in values:
                acc[name] = v
                yield from rec(idx + 1, acc)
            acc.pop(name, None)

        base = dict(self.scalars)
        yield from rec(0, base)


def _common_sweep(args) -> Sweep:
    scalars = {
        "family": args.family,
        "m": args.m,
        "space": args.space,
        "probe": args.probe,
        "odd_strategy": args.odd_strategy,
        "against_classical": getattr(args, "against_classical", False),
    }
    for name in SWEEPABLE:
        scalars[name] = getattr(args, name.replace("-", "_"))
    grids = []
    for spec in args.grid or []:
        name, values = parse_grid(spec)
        scalars.pop(name, None)
        grids.append((name, values))
    return Sweep(scalars, grids)


def cmd_bounds(args) -> int:
    sweep = _common_sweep(args)
    payloads = list(sweep.payloads())
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_eval_point, payloads))
    else:
        rows = [_eval_point(p) for p in payloads]
    out, close = _open_out(args.out)
    try:
        _write_rows(rows, COLUMNS, args.format, out, HEADER_COMMENT)
    finally:
        if close:
            out.close()
    return 0


def cmd_validate(args) -> int:
    results = run_suites(args.scale)
    for res in results:
        print(json.dumps(res.to_dict()))
    return 0 if all(r.passed for r in results) else 2


def _census_values(args):
    payload = {
        "family": args.family,
        "m": args.m,
        "space": args.space,
        "probe": args.probe,
        "odd_strategy": args.odd_strategy,
    }
    for name in ("eta-b", "eta-t", "nu-b", "nu-t", "tau-b", "tau-t", "eps-b", "eps-t"):
        payload[name] = getattr(args, name.replace("-", "_"))
    payload["ns"], payload["mu"] = args.ns, args.mu
    family = build_family(payload)
    ns, mu = _energy(payload)
    space = build_space(args.space, args.m)
    plan = resolve_probe(args.probe, args.m, mu, args.odd_strategy)
    copies = float(args.copies if args.copies is not None else 1.0)
    if plan.route == CLASSICAL:
        from .bounds import per_channel_classical_fidelity

        f = per_channel_classical_fidelity(family, ns)
        bits = np.array(space.patterns, dtype=np.uint8)
        dmat = (bits[:, None, :] != bits[None, :, :]).sum(axis=-1)
        values, counts = np.unique(dmat[~np.eye(len(space), dtype=bool)], return_counts=True)
        pairs = [(float(f ** (d * copies)), int(c)) for d, c in zip(values, counts)]
    elif plan.route == MUTUAL:
        ext_part, ext_space = extend_for_mutual_probing(plan.partition, space)
        from .probes import ProbeSpec

        spec = ProbeSpec(ext_part.m, mu, ext_part.blocks)
        table = fidelity_table_blocks(ext_space.extended, None, spec.descriptors(), family)
        off = ~np.eye(table.n_patterns, dtype=bool)
        vals = np.power(table.matrix[off], copies)
        uniq, counts = np.unique(np.round(vals, 12), return_counts=True)
        pairs = [(float(v), int(c)) for v, c in zip(uniq, counts)]
    else:
        try:
            table = fidelity_table_counting(space, plan.spec, family)
            with np.errstate(invalid="ignore"):
                vals = np.exp(copies * table.class_logf)
            uniq = {}
            for v, c in zip(np.round(vals, 12), table.class_counts):
                uniq[float(v)] = uniq.get(float(v), 0) + int(c)
            pairs = sorted(uniq.items())
        except ValueError:
            table = fidelity_table_blocks(space.patterns, None, plan.spec.descriptors(), family)
            off = ~np.eye(table.n_patterns, dtype=bool)
            vals = np.power(table.matrix[off], copies)
            uniq, counts = np.unique(np.round(vals, 12), return_counts=True)
            pairs = [(float(v), int(c)) for v, c in zip(uniq, counts)]
    return sorted(pairs)


def cmd_census(args) -> int:
    pairs = _census_values(args)
    rows = [{"fidelity": v, "multiplicity": c} for v, c in pairs]
    out, close = _open_out(args.out)
    try:
        _write_rows(rows, ["fidelity", "multiplicity"], args.format, out, CENSUS_COMMENT)
    finally:
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p: _Parser, with_copies: bool = True) -> None:
    p.add_argument("--family", choices=("pure-loss", "additive-noise", "thermal"), required=True)
    p.add_argument("--m", type=int, required=True, help="number of channels in the pattern")
    p.add_argument("--space", default="full", help="full | cpf:K | bcpf:K1,K2 | file:PATH")
    p.add_argument("--probe", default="classical", help="preset name or part:LITERAL")
    p.add_argument("--odd-strategy", default=SINGLE_IDLER,
                   choices=("single-idler", "hybrid-coherent"),
                   help="remainder handling for tmsv-disjoint with odd m")
    for name in ("eta-b", "eta-t", "nu-b", "nu-t", "tau-b", "tau-t", "eps-b", "eps-t"):
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--ns", type=float, default=None, help="mean photon number per mode")
    p.add_argument("--mu", type=float, default=None, help="squeezing energy, mu = ns + 1/2")
    if with_copies:
        p.add_argument("--copies", type=float, default=None, help="probe copies M")
        p.add_argument("--mbar", type=float, default=None, help="average channel use")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")


def build_parser() -> _Parser:
    parser = _Parser(prog="multiprobe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="error-probability bound sweeps")
    _add_common(p_bounds)
    p_bounds.add_argument("--grid", action="append", default=[],
                          metavar="PARAM=START:STOP:STEPS",
                          help="sweep a parameter (repeatable; log:START:STOP:STEPS for geometric)")
    p_bounds.add_argument("--against-classical", action="store_true",
                          help="emit the guaranteed advantage against the classical benchmark")
    p_bounds.add_argument("--workers", type=int, default=1)
    p_bounds.add_argument("--config", default=None, help="JSON config file (overrides flags)")
    p_bounds.set_defaults(func=cmd_bounds)

    p_val = sub.add_parser("validate", help="oracle-equivalence and invariant suites")
    p_val.add_argument("--scale", choices=SCALES, default="quick")
    p_val.set_defaults(func=cmd_validate)

    p_cen = sub.add_parser("census", help="fidelity degeneracy histogram")
    _add_common(p_cen, with_copies=False)
    p_cen.add_argument("--copies", type=float, default=1.0,
                       help="fidelities reported as F^copies")
    p_cen.set_defaults(func=cmd_census)
    return parser


def _apply_config(args) -> None:
    if getattr(args, "config", None) is None:
        return
    with open(args.config) as fh:
        data = json.load(fh)
    for key, value in data.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise UsageError(f"unknown config field {key!r}")
        current = getattr(args, dest)
        if current is not None and current != value and key not in ("config",):
            print(f"warning: config file overrides --{key}={current} with {value}", file=sys.stderr)
        setattr(args, dest, value)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
