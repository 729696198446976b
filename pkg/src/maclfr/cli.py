"""Command-line front end.

Three subcommands: ``curve`` writes memory-rate tradeoff points and their
lower convex envelopes, ``simulate`` runs one placement-delivery-decode
round and writes the transcript container, ``verify`` runs the exact
verification oracles and writes a JSON report.

Output files are pure functions of the arguments (wall-clock goes to
stdout only), so identical invocations produce byte-identical files.

Exit codes: 0 success, 1 a check or decode failed, 2 I/O failure,
3 resource cap exceeded, 4 bad arguments.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .analysis import (TradeoffCurve, curve, curves_to_json, format_fraction,
                       lower_convex_envelope, point, write_curves_csv)
from .errors import (DomainError, IntegrityError, MaclfrError,
                     ResourceLimitError, UsageError)
from .library import (DemandVector, exhaustive_demand_tuples, parse_demand_file,
                      random_demands)
from .presets import FIGURE_PRESETS, WORKED_CONFIGURATIONS
from .schemes import SchemeConfig, SchemeKind, derive_rng, simulate
from .topology import TopologySpec
from .transcript import simulation_to_bytes, simulation_to_json
from .verify import (DEFAULT_STATE_CAP, CorrectnessReport, PrivacyCheckResult,
                     SecurityCheckResult, SharePlacementReport,
                     check_correctness, check_privacy_exact,
                     check_security_exact, check_share_placement_secrecy,
                     privacy_suite, security_suite, tiny_config,
                     tiny_sweep_topologies)

# Kinds whose information-theoretic claims are expected to hold exactly;
# everything else serves as a negative control for the oracles.
SECURE_KINDS = frozenset((SchemeKind.SP_LFR, SchemeKind.S_LFR,
                          SchemeKind.IS_LFR))
PRIVATE_KINDS = frozenset((SchemeKind.SP_LFR, SchemeKind.P_LFR))


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="maclfr", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def topology_flags(p, need_t: bool):
        p.add_argument("--C", type=int, help="number of caches")
        p.add_argument("--r", type=int, help="caches accessed per user")
        p.add_argument("--t", type=int, required=False,
                       help="replication parameter"
                            + ("" if need_t else " (sweeps all if omitted)"))
        p.add_argument("--N", type=int, help="number of files")
        p.add_argument("--F", type=int, default=None,
                       help="file length in bits")

    pc = sub.add_parser("curve", help="emit memory-rate tradeoff curves")
    topology_flags(pc, need_t=False)
    pc.add_argument("--scheme", choices=[k.value for k in SchemeKind])
    pc.add_argument("--figure", type=int, choices=sorted(FIGURE_PRESETS),
                    help="preset parameterization")
    pc.add_argument("--out", default=".", help="output directory")

    ps = sub.add_parser("simulate", help="run place, deliver and decode once")
    topology_flags(ps, need_t=True)
    ps.add_argument("--scheme", choices=[k.value for k in SchemeKind],
                    required=True)
    ps.add_argument("--preset", choices=sorted(WORKED_CONFIGURATIONS),
                    help="use a worked configuration and its demands")
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--demands", default="random",
                    help="demand file path, 'random', or 'exhaustive'")
    ps.add_argument("--broadcast", action="store_true",
                    help="zero-cache broadcast mode (p-lfr only)")
    ps.add_argument("--out", default=".", help="output directory")

    pv = sub.add_parser("verify", help="run the exact verification oracles")
    topology_flags(pv, need_t=True)
    pv.add_argument("--scheme", choices=[k.value for k in SchemeKind])
    pv.add_argument("--suite",
                    choices=["correctness", "security", "privacy", "shares",
                             "all"],
                    required=True)
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--exhaustive", action="store_true",
                    help="correctness: run every demand tuple")
    pv.add_argument("--method", choices=["auto", "enumerate", "affine"],
                    default="auto")
    pv.add_argument("--cap", type=int, default=DEFAULT_STATE_CAP,
                    help="largest state space the oracles may walk")
    pv.add_argument("--jobs", type=int, default=1,
                    help="worker processes for enumeration")
    pv.add_argument("--out", default=".", help="output directory")
    return parser


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("MACLFR_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"MACLFR_SEED is not an integer: {env!r}") from exc
    return 0


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required flags: "
                         + " ".join(f"--{n}" for n in missing))


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _frac(f: Fraction) -> str:
    return format_fraction(f)


# ---- curve ----

def _single_point_curve(kind: SchemeKind, C: int, r: int, t: int, N: int,
                        F: int | None) -> TradeoffCurve:
    pts = (point(kind, C, r, t, N, F),)
    return TradeoffCurve(kind, C, r, N, F, pts, lower_convex_envelope(pts))


def cmd_curve(args) -> int:
    if args.figure is not None:
        preset = FIGURE_PRESETS[args.figure]
        C, r, N = preset.num_caches, preset.access_degree, preset.num_files
        kinds = preset.kinds
    else:
        _require(args, "C", "r", "N")
        C, r, N = args.C, args.r, args.N
        kinds = ((SchemeKind(args.scheme),) if args.scheme
                 else tuple(SchemeKind))
    if args.t is not None:
        curves = [_single_point_curve(kind, C, r, args.t, N, args.F)
                  for kind in kinds]
    else:
        curves = [curve(kind, C, r, N, args.F) for kind in kinds]
    out = _out_dir(args)
    csv_path = out / "curves.csv"
    buf = io.StringIO()
    write_curves_csv(curves, buf)
    csv_path.write_text(buf.getvalue())
    json_path = out / "envelopes.json"
    doc = {"format": "maclfr-curves", **curves_to_json(curves)}
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    for c in curves:
        env = ", ".join(f"({_frac(p.memory)}, {_frac(p.rate)})"
                        for p in c.envelope)
        print(f"{c.kind.value}: envelope {env}")
    print(f"wrote {csv_path} and {json_path}")
    return 0


# ---- simulate ----

def _simulate_config(args) -> tuple[SchemeConfig, Sequence[DemandVector] | None]:
    kind = SchemeKind(args.scheme)
    seed = _resolve_seed(args)
    if args.preset:
        worked = WORKED_CONFIGURATIONS[args.preset]
        cfg = replace(worked.config(kind, seed), broadcast=args.broadcast)
        return cfg, worked.demands()
    _require(args, "C", "r", "t", "N")
    topo = TopologySpec(args.C, args.r, args.t)
    F = args.F if args.F is not None else topo.num_subfile_indices
    cfg = SchemeConfig(topo, args.N, F, kind, seed=seed,
                       broadcast=args.broadcast)
    return cfg, None


def _demand_battery(cfg: SchemeConfig, source: str,
                    preset_demands) -> Sequence[DemandVector]:
    if preset_demands is not None and source == "random":
        return preset_demands
    if source == "random":
        return random_demands(cfg.topo, cfg.num_files,
                              derive_rng(cfg.seed, "demands"))
    text = Path(source).read_text()
    return parse_demand_file(text, cfg.topo, cfg.num_files)


def cmd_simulate(args) -> int:
    cfg, preset_demands = _simulate_config(args)
    if args.demands == "exhaustive":
        batteries = exhaustive_demand_tuples(cfg.topo, cfg.num_files)
        t0 = time.perf_counter()
        report = check_correctness(cfg, batteries, seeds=(cfg.seed,))
        dt = time.perf_counter() - t0
        print(f"exhaustive decode: {report.decodes - len(report.failures)}"
              f"/{report.decodes} pass over {report.batteries} demand tuples "
              f"({dt:.2f}s)")
        for f in report.failures[:10]:
            print(f"  FAIL user {f.user}: expected {f.expected}, "
                  f"decoded {f.decoded}")
        return 0 if report.ok else 1
    demands = _demand_battery(cfg, args.demands, preset_demands)
    t0 = time.perf_counter()
    result = simulate(cfg, demands=demands)
    dt = time.perf_counter() - t0
    out = _out_dir(args)
    (out / "transcript.bin").write_bytes(simulation_to_bytes(result))
    (out / "transcript.json").write_text(simulation_to_json(result))
    users = cfg.topo.users()
    passed = sum(result.decoded[g] == result.expected[g] for g in users)
    print(f"scheme {cfg.kind.value} C={cfg.topo.num_caches} "
          f"r={cfg.topo.access_degree} t={cfg.topo.replication} "
          f"N={cfg.num_files} F={cfg.file_bits} seed={cfg.seed}")
    print(f"memory {_frac(result.placement.memory)} files, "
          f"rate {_frac(result.transcript.rate)} files")
    print(f"decode {passed}/{len(users)} users pass ({dt:.2f}s)")
    if not result.ok:
        for g in users:
            if result.decoded[g] != result.expected[g]:
                print(f"  FAIL user {g}: expected "
                      f"{result.expected[g].to_bytes().hex()}, decoded "
                      f"{result.decoded[g].to_bytes().hex()}")
    print(f"wrote {out / 'transcript.bin'} and {out / 'transcript.json'}")
    return 0 if result.ok else 1


# ---- verify ----

def _security_doc(res: SecurityCheckResult) -> dict:
    expected_zero = res.cfg.kind in SECURE_KINDS
    ok = res.certified_zero if expected_zero else not res.certified_zero
    return {
        "check": "security",
        "scheme": res.cfg.kind.value,
        "C": res.cfg.topo.num_caches,
        "r": res.cfg.topo.access_degree,
        "t": res.cfg.topo.replication,
        "N": res.cfg.num_files,
        "F": res.cfg.file_bits,
        "method": res.method,
        "states": res.states,
        "certified_zero": res.certified_zero,
        "mi_bits": res.mi_bits,
        "expected_zero": expected_zero,
        "pass": ok,
    }


def _privacy_doc(res: PrivacyCheckResult) -> dict:
    expected_zero = res.cfg.kind in PRIVATE_KINDS
    ok = res.certified_zero if expected_zero else not res.certified_zero
    return {
        "check": "privacy",
        "scheme": res.cfg.kind.value,
        "C": res.cfg.topo.num_caches,
        "r": res.cfg.topo.access_degree,
        "t": res.cfg.topo.replication,
        "N": res.cfg.num_files,
        "F": res.cfg.file_bits,
        "method": res.method,
        "states": res.states,
        "max_tv": _frac(res.max_tv),
        "per_observer": {"".join(map(str, g)): _frac(tv)
                         for g, tv in res.per_observer.items()},
        "expected_zero": expected_zero,
        "pass": ok,
    }


def _correctness_doc(rep: CorrectnessReport) -> dict:
    return {
        "check": "correctness",
        "scheme": rep.cfg.kind.value,
        "C": rep.cfg.topo.num_caches,
        "r": rep.cfg.topo.access_degree,
        "t": rep.cfg.topo.replication,
        "N": rep.cfg.num_files,
        "F": rep.cfg.file_bits,
        "seeds": list(rep.seeds),
        "batteries": rep.batteries,
        "decodes": rep.decodes,
        "failures": len(rep.failures),
        "pass": rep.ok,
    }


def _shares_doc(rep: SharePlacementReport) -> dict:
    return {
        "check": "share-placement",
        "scheme": rep.cfg.kind.value,
        "C": rep.cfg.topo.num_caches,
        "r": rep.cfg.topo.access_degree,
        "t": rep.cfg.topo.replication,
        "keys_checked": rep.keys_checked,
        "problems": list(rep.problems),
        "pass": rep.ok,
    }


def _explicit_config(args, kind: SchemeKind, num_files: int) -> SchemeConfig:
    topo = TopologySpec(args.C, args.r,
                        args.t if args.t is not None else 0)
    F = args.F if args.F is not None else topo.num_subfile_indices
    return SchemeConfig(topo, num_files, F, kind, seed=_resolve_seed(args))


def _verify_correctness(args) -> list[dict]:
    if args.C is not None:
        _require(args, "C", "r", "t", "N")
        kinds = ([SchemeKind(args.scheme)] if args.scheme
                 else list(SchemeKind))
        configs = [_explicit_config(args, kind, args.N) for kind in kinds]
    else:
        configs = [tiny_config(kind, 3, 2, 1) for kind in SchemeKind]
    docs = []
    for cfg in configs:
        if args.exhaustive:
            space = 1 << (cfg.num_files * cfg.topo.num_users)
            if space > args.cap:
                raise ResourceLimitError(
                    f"{space} demand tuples exceed the cap {args.cap}")
            batteries = list(exhaustive_demand_tuples(cfg.topo,
                                                      cfg.num_files))
            seeds: tuple[int, ...] = (cfg.seed,)
        else:
            rng = derive_rng(cfg.seed, "demand-batteries")
            batteries = [random_demands(cfg.topo, cfg.num_files, rng)
                         for _ in range(20)]
            seeds = tuple(range(5))
        docs.append(_correctness_doc(check_correctness(cfg, batteries, seeds)))
    return docs


def _verify_security(args) -> list[dict]:
    if args.scheme is not None or args.C is not None:
        _require(args, "C", "r", "t", "N")
        kind = SchemeKind(args.scheme) if args.scheme else SchemeKind.SP_LFR
        res = check_security_exact(_explicit_config(args, kind, args.N),
                                   method=args.method, cap=args.cap,
                                   jobs=args.jobs)
        return [_security_doc(res)]
    return [_security_doc(r) for r in
            security_suite(method=args.method, cap=args.cap, jobs=args.jobs)]


def _verify_privacy(args) -> list[dict]:
    if args.scheme is not None or args.C is not None:
        _require(args, "C", "r", "t", "N")
        kind = SchemeKind(args.scheme) if args.scheme else SchemeKind.SP_LFR
        res = check_privacy_exact(_explicit_config(args, kind, args.N),
                                  method=args.method, cap=args.cap)
        return [_privacy_doc(res)]
    return [_privacy_doc(r) for r in
            privacy_suite(method=args.method, cap=args.cap)]


def _verify_shares(args) -> list[dict]:
    if args.scheme is not None or args.C is not None:
        _require(args, "C", "r", "t")
        kind = SchemeKind(args.scheme) if args.scheme else SchemeKind.SP_LFR
        num_files = args.N if args.N is not None else 2
        return [_shares_doc(check_share_placement_secrecy(
            _explicit_config(args, kind, num_files)))]
    docs = []
    triples = list(tiny_sweep_topologies()) + [
        (5, r, t) for r in (2, 3, 4) for t in range(0, 5 - r + 1)]
    for C, r, t in triples:
        for kind in (SchemeKind.SP_LFR, SchemeKind.P_LFR, SchemeKind.S_LFR,
                     SchemeKind.IS_LFR):
            docs.append(_shares_doc(check_share_placement_secrecy(
                tiny_config(kind, C, r, t))))
    return docs


def cmd_verify(args) -> int:
    suites = {
        "correctness": _verify_correctness,
        "security": _verify_security,
        "privacy": _verify_privacy,
        "shares": _verify_shares,
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    checks: list[dict] = []
    t0 = time.perf_counter()
    for name in names:
        checks.extend(suites[name](args))
    dt = time.perf_counter() - t0
    all_pass = all(c["pass"] for c in checks)
    report = {
        "format": "maclfr-report",
        "suite": args.suite,
        "cap": args.cap,
        "method": args.method,
        "checks": checks,
        "pass": all_pass,
    }
    out = _out_dir(args)
    path = out / "report.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    for c in checks:
        label = c["check"]
        scheme = c.get("scheme", "-")
        verdict = "pass" if c["pass"] else "FAIL"
        detail = ""
        if label == "security":
            detail = ("MI=0 exactly" if c["certified_zero"]
                      else f"MI={c['mi_bits']:.6f} bits")
        elif label == "privacy":
            detail = f"max TV={c['max_tv']}"
        elif label == "correctness":
            detail = f"{c['decodes'] - c['failures']}/{c['decodes']} decodes"
        elif label == "share-placement":
            detail = f"{c['keys_checked']} keys"
        print(f"{verdict}: {label} {scheme} "
              f"C={c.get('C')} r={c.get('r')} t={c.get('t')} {detail}")
    print(f"report written to {path} ({dt:.2f}s)")
    return 0 if all_pass else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"curve": cmd_curve, "simulate": cmd_simulate,
                   "verify": cmd_verify}[args.command]
        return handler(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, IntegrityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MaclfrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
