"""Command-line front door: every pipeline, machine-readable output.

Subcommands map one-to-one onto the library layers:

    weights     closed-form / rank-classified / direct-tally distribution
    verify      oracle cross-checks, grouped into suites, mismatch -> exit 1
    count       solution counts of the named systems, optional brute oracle
    cosets      the three cyclotomic cosets and the code dimension
    dump-tables the variety block tables, verbatim

Exit codes: 0 success (all checks matched), 1 verification mismatch (the
first failing item is echoed as one-line JSON on stderr), 2 invalid input or
budget refusal.  All counts are serialized as decimal strings; progress goes
to stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import code as code_mod
from . import counting, expsum, identities
from .code import DEFAULT_BUDGET, WeightDistribution
from .counting import VARIETY_TABLES, SystemId, TableId
from .errors import (
    BudgetExceededError,
    ConfigurationError,
    IdentitySystemError,
    IntegrityError,
    InternalInconsistencyError,
    InvalidDistributionError,
)
from .gf import field_context

SUITES = ("moments", "expsum", "variety", "codewords", "dual", "all")

# the variety tables cross-checkable against brute force at interactive
# speed: Table I's oracle is the five-variable system, whose q^5 sweep is
# minutes-long already at m=4, so only the four-variable tables keep it
_VARIETY_PAIRS = {
    2: (TableId.TABLE_I, TableId.TABLE_II, TableId.TABLE_III),
    4: (TableId.TABLE_II, TableId.TABLE_III),
}
_TABLE_SYSTEM = {
    TableId.TABLE_I: SystemId.SYS5_HOM,
    TableId.TABLE_II: SystemId.DUAL_W4_ONEFLIP,
    TableId.TABLE_III: SystemId.DUAL_W4_TWOFLIP,
}


@dataclass
class RunConfig:
    """One parsed invocation; run() consumes nothing else."""

    command: str
    m: int = 0
    method: str = "closed"
    suite: str = "all"
    system: str = ""
    oracle: bool = False
    parallelism: int = 1
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    output: str = "-"
    format: str = "json"
    checkpoint_dir: str | None = None


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _eis_str(z: expsum.EisensteinInteger) -> str:
    if z.a1 == 0:
        return str(z.a0)
    return f"{z.a0}{z.a1:+d}*zeta"


def _dist_str(dist: WeightDistribution) -> str:
    return ";".join(f"{w}:{c}" for w, c in dist.counts)


def _check(suite: str, name: str, lhs: object, rhs: object) -> dict[str, object]:
    lhs_s, rhs_s = str(lhs), str(rhs)
    return {
        "suite": suite,
        "name": name,
        "lhs": lhs_s,
        "rhs": rhs_s,
        "match": lhs_s == rhs_s,
    }


# ---------------------------------------------------------------- subcommands


def _cmd_weights(cfg: RunConfig) -> tuple[dict[str, object], dict[str, object] | None]:
    if cfg.method == "closed":
        dist = identities.theorem_table(3, cfg.m)
    else:
        ctx = field_context(3, cfg.m)
        dist = code_mod.enumerate_distribution(
            ctx,
            method=cfg.method,
            budget=cfg.budget,
            parallelism=cfg.parallelism,
            checkpoint_dir=cfg.checkpoint_dir,
            progress=_progress,
        )
    payload = {
        "m": cfg.m,
        "l": dist.l,
        "method": cfg.method,
        "counts": {str(w): str(c) for w, c in dist.counts},
        "total": str(dist.total),
    }
    return payload, None


def _cmd_count(cfg: RunConfig) -> tuple[dict[str, object], dict[str, object] | None]:
    system_id = SystemId(cfg.system)
    try:
        closed: int | None = counting.closed_form_count(system_id, 3, cfg.m).count
    except ConfigurationError:
        closed = None
    payload: dict[str, object] = {"system": system_id.value, "m": cfg.m}
    mismatch = None
    if cfg.oracle:
        ctx = field_context(3, cfg.m)
        brute = counting.count_bruteforce(system_id, ctx, cfg.budget, cfg.parallelism).count
        payload["count"] = str(brute)
        payload["closed_form"] = None if closed is None else str(closed)
        payload["match"] = None if closed is None else brute == closed
        if closed is not None and brute != closed:
            mismatch = _check("count", system_id.value, brute, closed)
    else:
        if closed is None:
            raise ConfigurationError(
                f"{system_id.value} has no closed form; rerun with --oracle"
            )
        payload["count"] = str(closed)
        payload["closed_form"] = str(closed)
        payload["match"] = True
    return payload, mismatch


def _cmd_cosets(cfg: RunConfig) -> tuple[dict[str, object], dict[str, object] | None]:
    p, m = 3, cfg.m
    entries = []
    for s in (2, p + 1, p * p + 1):
        cs = code_mod.cyclotomic_coset(s, p, m)
        entries.append({"s": s, "size": cs.size, "elements": list(cs.elements)})
    payload = {
        "p": p,
        "m": m,
        "cosets": entries,
        "dimension": code_mod.code_dimension(p, m),
    }
    return payload, None


def _cmd_dump_tables(cfg: RunConfig) -> tuple[dict[str, object], dict[str, object] | None]:
    payload: dict[str, object] = {}
    for table_id in TableId:
        names, blocks = VARIETY_TABLES[table_id]
        payload[table_id.value] = {
            "variables": list(names),
            "blocks": [list(b) for b in blocks],
        }
    return payload, None


# ---------------------------------------------------------------- verify suites


def _suite_moments(cfg: RunConfig) -> list[dict[str, object]]:
    ctx = field_context(3, cfg.m)
    q = ctx.q
    cube = q**3
    closed_counts = {1: 1}
    for k, sid in (
        (2, SystemId.SYS2_HOM),
        (3, SystemId.SYS3_HOM),
        (4, SystemId.SYS4_HOM),
        (5, SystemId.SYS5_HOM),
    ):
        closed_counts[k] = counting.closed_form_count(sid, 3, cfg.m).count
    checks = []
    for k in range(1, 6):
        lhs = code_mod.moment_bruteforce(ctx, k, cfg.budget, cfg.parallelism)
        checks.append(
            _check("moments", f"moment-k{k}", _eis_str(lhs), closed_counts[k] * cube)
        )
    if cfg.m % 2 == 0:
        census = code_mod.classification_census(
            ctx, cfg.budget, cfg.parallelism, progress=_progress if cfg.m >= 6 else None
        )
        fc = identities.frequency_counts_from_census(census, cfg.m)
        pred = identities.sixth_moment_solution_count(fc, 3, cfg.m) * cube
        lhs6 = code_mod.moment_bruteforce(ctx, 6, cfg.budget, cfg.parallelism)
        checks.append(_check("moments", "moment-k6", _eis_str(lhs6), pred))
    return checks


def _suite_expsum(cfg: RunConfig) -> list[dict[str, object]]:
    from . import _kernels

    ctx = field_context(3, cfg.m)
    q, m = ctx.q, ctx.m
    _kernels.set_parallelism(cfg.parallelism)
    AH, BH, CH = _kernels.gram_tables(ctx)
    TRP, P2, P4, P10 = _kernels.tally_tables(ctx)
    POW3 = _kernels.pow3_table(2 * m)
    checks = []
    if m <= 4:
        required = q**4
        if required > cfg.budget:
            raise BudgetExceededError(required, cfg.budget, "exhaustive differential test")
        bad = 0
        for lo in range(0, q, max(1, 2**22 // (q * q))):
            hi = min(q, lo + max(1, 2**22 // (q * q)))
            bad += int(
                _kernels.differential_range(lo, hi, q, m, AH, BH, CH, TRP, P2, P4, P10, POW3)
            )
        checks.append(_check("expsum", "rank-vs-tally-exhaustive", bad, 0))
    else:
        n = 10**5
        required = n * q
        if required > cfg.budget:
            raise BudgetExceededError(required, cfg.budget, "sampled differential test")
        rng = np.random.default_rng(cfg.seed)
        A = rng.integers(0, q, size=n).astype(np.int64)
        B = rng.integers(0, q, size=n).astype(np.int64)
        C = rng.integers(0, q, size=n).astype(np.int64)
        bad = int(
            _kernels.differential_samples(A, B, C, q, m, AH, BH, CH, TRP, P2, P4, P10, POW3)
        )
        checks.append(_check("expsum", "rank-vs-tally-sampled", bad, 0))
    if m % 2 == 0 and m <= 4:
        census = code_mod.classification_census(ctx, cfg.budget, cfg.parallelism)
        for j in range(1, m, 2):
            checks.append(
                _check(
                    "expsum",
                    f"odd-j-sign-balance-j{j}",
                    census.get((1, j), 0),
                    census.get((-1, j), 0),
                )
            )
    return checks


def _suite_variety(cfg: RunConfig) -> list[dict[str, object]]:
    pairs = _VARIETY_PAIRS.get(cfg.m)
    if pairs is None:
        raise ConfigurationError(
            f"no in-budget variety cross-check at m={cfg.m} (m=2 or m=4 only)"
        )
    ctx = field_context(3, cfg.m)
    checks = []
    for table_id in pairs:
        lhs = counting.variety_count(table_id, ctx, cfg.budget).count
        rhs = counting.count_bruteforce(
            _TABLE_SYSTEM[table_id], ctx, cfg.budget, cfg.parallelism
        ).count
        checks.append(_check("variety", f"{table_id.value}-vs-brute", lhs, rhs))
    return checks


def _suite_codewords(cfg: RunConfig) -> list[dict[str, object]]:
    ctx = field_context(3, cfg.m)
    q, m = ctx.q, ctx.m
    checks = []

    checks.append(
        _check(
            "codewords",
            "generator-rank-vs-coset-union",
            code_mod.generator_rank(ctx),
            code_mod.code_dimension(3, m),
        )
    )

    rng = np.random.default_rng(cfg.seed)
    if m <= 2:
        triples = [(a, b, c) for a in range(q) for b in range(q) for c in range(q)]
        label = "weight-direct-vs-expsum-exhaustive"
    else:
        draws = rng.integers(0, q, size=(1000, 3))
        triples = [tuple(int(v) for v in row) for row in draws]
        label = "weight-direct-vs-expsum-sampled"
    bad = 0
    for a, b, c in triples:
        cw = code_mod.codeword(ctx, a, b, c)
        if code_mod.weight_direct(cw) != code_mod.weight_via_expsum(ctx, a, b, c):
            bad += 1
    checks.append(_check("codewords", label, bad, 0))

    bad = 0
    pi_sq = ctx.primitive_power(2)
    pi_p1 = ctx.primitive_power(ctx.p + 1)
    pi_pp1 = ctx.primitive_power(ctx.p**2 + 1)
    for _ in range(20):
        a, b, c = (int(v) for v in rng.integers(0, q, size=3))
        cw = code_mod.codeword(ctx, a, b, c).symbols
        shifted = cw[1:] + cw[:1]
        succ = code_mod.codeword(
            ctx, ctx.element(a) * pi_sq, ctx.element(b) * pi_p1, ctx.element(c) * pi_pp1
        ).symbols
        if shifted != succ:
            bad += 1
    checks.append(_check("codewords", "shift-closure", bad, 0))

    if m >= 6:
        dist = identities.theorem_table(3, m)
    else:
        dist = code_mod.enumerate_distribution(
            ctx, method="rank", budget=cfg.budget, parallelism=cfg.parallelism
        )
    base = 3 ** (m - 1) * 2
    weights = {w for w, _ in dist.counts if w}
    missing = sorted(w for w in weights if (2 * base - w) not in weights)
    checks.append(_check("codewords", "weight-symmetry-about-base", missing, []))
    return checks


def _suite_dual(cfg: RunConfig) -> list[dict[str, object]]:
    m = cfg.m
    if m > 6:
        raise ConfigurationError("dual cross-checks are defined for m <= 6")
    p = 3
    l = p**m - 1
    k_dim = code_mod.code_dimension(p, m)
    if m >= 6:
        dist = identities.theorem_table(p, m)
    else:
        ctx = field_context(p, m)
        triples = code_mod.enumerate_distribution(
            ctx, method="rank", budget=cfg.budget, parallelism=cfg.parallelism
        )
        dist = code_mod.collapse_to_codewords(triples, p, m)
    dual = identities.macwilliams_transform(dist, l, k_dim, p)
    dual_map = dual.as_dict()
    closed_low = identities.dual_low_weights_closed(p, m)
    checks = []
    for j in range(5):
        checks.append(
            _check("dual", f"dual-weight-{j}", dual_map.get(j, 0), closed_low[j])
        )
    for rec in identities.power_moments(dist, l, k_dim, closed_low[2], closed_low[4], p):
        checks.append(_check("dual", str(rec["name"]), rec["lhs"], rec["rhs"]))
    if m == 2:
        brute = code_mod.dual_distribution_bruteforce(field_context(p, m))
        checks.append(
            _check("dual", "dual-enumeration", _dist_str(dual), _dist_str(brute))
        )
    return checks


_SUITE_FNS = {
    "moments": _suite_moments,
    "expsum": _suite_expsum,
    "variety": _suite_variety,
    "codewords": _suite_codewords,
    "dual": _suite_dual,
}


def _cmd_verify(cfg: RunConfig) -> tuple[dict[str, object], dict[str, object] | None]:
    if cfg.suite == "all":
        names = ["moments", "expsum", "variety", "codewords", "dual"]
        if cfg.m not in _VARIETY_PAIRS:
            names.remove("variety")
    else:
        names = [cfg.suite]
    checks: list[dict[str, object]] = []
    for name in names:
        _progress(f"verify suite {name} (m={cfg.m})")
        checks.extend(_SUITE_FNS[name](cfg))
    failed = [c for c in checks if not c["match"]]
    payload = {
        "m": cfg.m,
        "suite": cfg.suite,
        "checks": checks,
        "passed": len(checks) - len(failed),
        "failed": len(failed),
    }
    return payload, (failed[0] if failed else None)


# ---------------------------------------------------------------- plumbing


def _render(payload: dict[str, object], cfg: RunConfig) -> str:
    if cfg.format == "json":
        return json.dumps(payload, sort_keys=True)
    if cfg.command == "weights":
        lines = ["weight,count"]
        counts = payload["counts"]
        assert isinstance(counts, dict)
        lines += [f"{w},{c}" for w, c in sorted(counts.items(), key=lambda t: int(t[0]))]
        return "\n".join(lines)
    if cfg.command == "verify":
        lines = ["suite,name,lhs,rhs,match"]
        for c in payload["checks"]:  # type: ignore[union-attr]
            lines.append(f"{c['suite']},{c['name']},{c['lhs']},{c['rhs']},{c['match']}")
        return "\n".join(lines)
    raise ConfigurationError(f"csv output is not defined for `{cfg.command}`")


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output in ("-", ""):
        sys.stdout.write(text + "\n")
    else:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _error_line(kind: str, exc: BaseException) -> None:
    print(json.dumps({"error": kind, "message": str(exc)}, sort_keys=True), file=sys.stderr)


_COMMANDS = {
    "weights": _cmd_weights,
    "verify": _cmd_verify,
    "count": _cmd_count,
    "cosets": _cmd_cosets,
    "dump-tables": _cmd_dump_tables,
}


def run(config: RunConfig) -> int:
    """Execute one parsed invocation; returns the process exit code."""
    try:
        payload, mismatch = _COMMANDS[config.command](config)
        text = _render(payload, config)
    except BudgetExceededError as exc:
        _error_line("budget-refused", exc)
        return 2
    except (ConfigurationError, ValueError) as exc:
        _error_line("invalid-input", exc)
        return 2
    except (
        IdentitySystemError,
        IntegrityError,
        InternalInconsistencyError,
        InvalidDistributionError,
    ) as exc:
        _error_line("verification-failed", exc)
        return 1
    _emit(text, config)
    if mismatch is not None:
        print(
            json.dumps({"error": "verification-mismatch", "item": mismatch}, sort_keys=True),
            file=sys.stderr,
        )
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--parallelism", type=int, default=1, help="worker count (>= 1)")
    shared.add_argument(
        "--budget", type=int, default=DEFAULT_BUDGET, help="max evaluations before refusal"
    )
    shared.add_argument("--seed", type=int, default=0, help="RNG seed for sampled checks")
    shared.add_argument("--output", default="-", help="output path, or - for stdout")
    shared.add_argument("--format", choices=("json", "csv"), default="json")

    ap = argparse.ArgumentParser(prog="tricyclic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weights", parents=[shared], help="weight distribution")
    w.add_argument("--m", type=int, required=True)
    w.add_argument("--method", choices=("closed", "rank", "direct"), default="closed")
    w.add_argument("--checkpoint-dir", default=None)

    v = sub.add_parser("verify", parents=[shared], help="oracle cross-check suites")
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--suite", choices=SUITES, default="all")

    c = sub.add_parser("count", parents=[shared], help="system solution counts")
    c.add_argument("--system", required=True, metavar="ID")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--oracle", action="store_true", help="also run the brute-force count")

    cs = sub.add_parser("cosets", parents=[shared], help="cyclotomic cosets and dimension")
    cs.add_argument("--m", type=int, required=True)

    sub.add_parser("dump-tables", parents=[shared], help="variety block tables")
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        if code != 0:
            print(
                json.dumps({"error": "invalid-input", "message": "argument parsing failed"}),
                file=sys.stderr,
            )
            return 2
        return 0
    if ns.parallelism < 1:
        _error_line("invalid-input", ValueError("--parallelism must be >= 1"))
        return 2
    if ns.budget < 1:
        _error_line("invalid-input", ValueError("--budget must be >= 1"))
        return 2
    cfg = RunConfig(
        command=ns.command,
        m=getattr(ns, "m", 0),
        method=getattr(ns, "method", "closed"),
        suite=getattr(ns, "suite", "all"),
        system=getattr(ns, "system", ""),
        oracle=getattr(ns, "oracle", False),
        parallelism=ns.parallelism,
        budget=ns.budget,
        seed=ns.seed,
        output=ns.output,
        format=ns.format,
        checkpoint_dir=getattr(ns, "checkpoint_dir", None),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
