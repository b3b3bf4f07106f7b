"""Command-line front end: corpus listing, suite runs, one-off conjugators and decompositions.

Exit codes: 0 pass (inconclusive results only warn), 1 a check failed,
2 usage error or unknown group, 3 malformed JSON config, 4 precision below 1.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import verify as V
from .cache import DecompositionCache
from .groups import FiniteGroup, GroupError, load_group, prime_divisors
from .grouprings import GroupRingElement, GroupRingError
from .idempotents import AlgebraPresentation, primitive_decomposition
from .presets import designated_normal_subgroups, preset, resolve_name, PRESET_NAMES
from .rings import DEFAULT_PRECISION, ScalarRing
from .subalgebras import group_fixed_subring, subgroup_algebra

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_JSON, EXIT_PRECISION = 0, 1, 2, 3, 4

SPEC_CHECKS = ("lin-ind", "supp-idem", "part-aug", "mult-idem", "relproj", "theorem")
EXTRA_CHECKS = ("decomp", "theta", "correspondence")
ALL_CHECKS = EXTRA_CHECKS + SPEC_CHECKS
DEFAULT_CORPUS = PRESET_NAMES


class ConfigError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


@dataclass
class SuiteConfig:
    corpus: list = field(default_factory=lambda: list(DEFAULT_CORPUS))
    primes: dict = field(default_factory=dict)
    k: int = DEFAULT_PRECISION
    seed: int = 0
    checks: list = field(default_factory=lambda: list(ALL_CHECKS))
    out: str | None = None
    cache: bool = True
    jobs: int = 1
    theta_samples: int = 100

    def group(self, spec) -> FiniteGroup:
        return preset(spec) if isinstance(spec, str) else load_group(spec)

    def pairs(self) -> list[tuple[object, int]]:
        out = []
        for spec in self.corpus:
            G = self.group(spec)
            ps = self.primes.get(G.name, self.primes.get(spec if isinstance(spec, str) else G.name))
            for p in (ps if ps is not None else prime_divisors(G.order)):
                out.append((spec, int(p)))
        return out


def _resolve_spec(spec):
    if isinstance(spec, dict):
        try:
            load_group(spec)
        except GroupError as exc:
            raise ConfigError(str(exc), EXIT_USAGE) from None
        return spec
    if not isinstance(spec, str):
        raise ConfigError(f"bad corpus entry {spec!r}", EXIT_USAGE)
    if spec.endswith(".json") or Path(spec).is_file():
        try:
            return json.loads(Path(spec).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read group file {spec}: {exc}", EXIT_USAGE) from None
        except ValueError as exc:
            raise ConfigError(f"malformed JSON in {spec}: {exc}", EXIT_JSON) from None
    try:
        return resolve_name(spec)
    except GroupError as exc:
        raise ConfigError(str(exc), EXIT_USAGE) from None


def parse_config(path: str | None = None, **overrides) -> SuiteConfig:
    """Build a validated config from an optional JSON file and flag overrides."""
    data: dict = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}", EXIT_USAGE) from None
        except ValueError as exc:
            raise ConfigError(f"malformed JSON config: {exc}", EXIT_JSON) from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object", EXIT_JSON)
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = set(SuiteConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}", EXIT_USAGE)
    cfg = SuiteConfig(**data)
    if not isinstance(cfg.k, int) or cfg.k < 1:
        raise ConfigError(f"precision must be >= 1, got {cfg.k}", EXIT_PRECISION)
    cfg.corpus = [_resolve_spec(s) for s in cfg.corpus]
    bad = [c for c in cfg.checks if c not in ALL_CHECKS]
    if bad:
        raise ConfigError(f"unknown checks {bad}; choose from {list(ALL_CHECKS)}", EXIT_USAGE)
    primes = {}
    for name, ps in cfg.primes.items():
        try:
            key = resolve_name(name)
        except GroupError:
            key = name
        primes[key] = [int(p) for p in ps]
    cfg.primes = primes
    for spec, p in cfg.pairs():
        G = cfg.group(spec)
        if G.order % p:
            raise ConfigError(f"{p} does not divide |{G.name}|", EXIT_USAGE)
    return cfg


# -- suite ------------------------------------------------------------------------------------

def _pair_reports(spec, p: int, cfg: SuiteConfig) -> list[V.VerificationReport]:
    G = cfg.group(spec)
    k, seed, checks = cfg.k, cfg.seed, set(cfg.checks)
    cache = DecompositionCache(enabled=cfg.cache)
    ring = ScalarRing.padic(p, k)

    def rg():
        return cache.get_or_compute(G, p, k, "RG", seed, lambda: V.group_decomposition(G, p, k, seed))

    base = V.VerificationReport(f"{G.name}/p={p}")
    if "decomp" in checks:
        base.checks.append(V.check_decomposition(G, p, k, seed, rg()))
    if "lin-ind" in checks:
        base.checks.append(V.check_lemma_LinInd(G, p, k, seed, rg()))
    if "supp-idem" in checks:
        base.checks.append(V.check_prop_SuppIdem(G, p, k, seed, rg()))
    if "theta" in checks:
        base.checks.append(V.check_theta(G, p, k, seed, cfg.theta_samples))
    reports = [base] if base.checks else []

    xs = [c[0] for c in G.conjugacy_classes if c[0] != G.identity and G.is_p_element(c[0], p)]
    for x in xs:
        rep = V.VerificationReport(f"{G.name}/p={p}/x={x}")

        def rh(x=x):
            H = G.centralizer(x)
            return cache.get_or_compute(
                G, p, k, f"RH<{x}>", seed,
                lambda: primitive_decomposition(
                    AlgebraPresentation(subgroup_algebra(G, ring, H.elements)), seed=seed))

        def adec(x=x):
            return cache.get_or_compute(
                G, p, k, f"fix<{x}>", seed,
                lambda: primitive_decomposition(
                    AlgebraPresentation(group_fixed_subring(G, ring, x)), seed=seed))

        if "part-aug" in checks:
            rep.checks.append(V.check_lemma_PartAugGOrH(G, x, p, seed=seed, k=k))
        if "mult-idem" in checks:
            rep.checks.append(V.check_cor_MultIdem(G, x, p, k, seed, rh()))
        if "relproj" in checks:
            rep.checks.append(V.check_relproj(G, x, p, k, seed, adec()))
        if "correspondence" in checks:
            rep.checks.append(V.check_correspondence(G, x, p, k, seed, rh(), adec()))
        if rep.checks:
            reports.append(rep)

    if "theorem" in checks:
        N = designated_normal_subgroups(G).get(p)
        if N is not None:
            for inst in V.theorem_instances(G, N, p, k, seed):
                reports.append(V.VerificationReport(inst.name,
                                                    [V.verify_theorem_instance(inst, seed)]))
    return reports


def run_suite(cfg: SuiteConfig) -> list[V.VerificationReport]:
    pairs = cfg.pairs()
    if cfg.jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_pair_reports, *zip(*pairs), [cfg] * len(pairs)))
    else:
        chunks = [_pair_reports(spec, p, cfg) for spec, p in pairs]
    reports = [r for chunk in chunks for r in chunk]
    return sorted(reports, key=lambda r: r.instance)


def report_json(reports: list[V.VerificationReport]) -> str:
    return json.dumps([r.to_json() for r in reports], sort_keys=True, indent=1) + "\n"


def emit_report(reports: list[V.VerificationReport], path: str | None = None,
                stream=None) -> int:
    """Write the JSON report, print a summary table, and return the exit code."""
    stream = stream or sys.stdout
    if path is not None:
        Path(path).write_text(report_json(reports))
    rows = [(r.instance, c.name, c.status, c.millis) for r in reports for c in r.checks]
    width = max([len(r[0]) for r in rows] + [8])
    print(f"{'instance':<{width}}  {'check':<14}  {'status':<12}  ms", file=stream)
    for inst, name, status, ms in rows:
        print(f"{inst:<{width}}  {name:<14}  {status:<12}  {ms}", file=stream)
    statuses = [r[2] for r in rows]
    counts = {s: statuses.count(s) for s in V.STATUSES}
    print(f"{len(rows)} checks: {counts['pass']} pass, {counts['fail']} fail, "
          f"{counts['inconclusive']} inconclusive", file=stream)
    if counts["fail"]:
        return EXIT_FAIL
    if counts["inconclusive"]:
        print("warning: some checks were inconclusive", file=sys.stderr)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------------------

def _group_arg(spec: str) -> FiniteGroup:
    resolved = _resolve_spec(spec)
    return preset(resolved) if isinstance(resolved, str) else load_group(resolved)


def _cmd_groups(args) -> int:
    if args.action == "list":
        for name in PRESET_NAMES:
            G = preset(name)
            N = designated_normal_subgroups(G)
            extra = ", ".join(f"O_{p}: order {len(n)}" for p, n in sorted(N.items()))
            print(f"{name:<8} order {G.order:<3} classes {len(G.conjugacy_classes):<2} {extra}")
        return EXIT_OK
    if not args.name:
        raise ConfigError("groups show needs a group name", EXIT_USAGE)
    G = _group_arg(args.name)
    print(json.dumps(G.describe(), sort_keys=True, indent=1))
    return EXIT_OK


def _cmd_verify(args) -> int:
    primes = None
    if args.p:
        if not args.group:
            raise ConfigError("--p needs --group", EXIT_USAGE)
        primes = {g: args.p for g in args.group}
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    cfg = parse_config(args.config, corpus=args.group, primes=primes, k=args.precision,
                       seed=args.seed, checks=checks, out=args.out,
                       cache=False if args.no_cache else None, jobs=args.jobs)
    reports = run_suite(cfg)
    return emit_report(reports, cfg.out)


def _check_precision(k: int):
    if k < 1:
        raise ConfigError(f"precision must be >= 1, got {k}", EXIT_PRECISION)


def _cmd_conjugate(args) -> int:
    _check_precision(args.precision)
    G = _group_arg(args.group[0])
    try:
        u = GroupRingElement.parse(args.unit, G, ScalarRing.rational())
    except GroupRingError as exc:
        raise ConfigError(str(exc), EXIT_USAGE) from None
    if not 0 <= args.target < G.order:
        raise ConfigError(f"target {args.target} is not an element index", EXIT_USAGE)
    p = args.p[0]
    mu = V.find_conjugator(u, args.target, p, args.precision, args.seed)
    out = {"group": G.name, "p": p, "precision": args.precision, "seed": args.seed,
           "u": u.to_list(), "y": args.target,
           "status": "pass" if mu is not None else "inconclusive",
           "mu": None if mu is None else mu.to_list()}
    print(json.dumps(out, sort_keys=True))
    if mu is None:
        print("warning: no conjugator found at this precision", file=sys.stderr)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    _check_precision(args.precision)
    G = _group_arg(args.group[0])
    p = args.p[0]
    ring = ScalarRing.padic(p, args.precision) if args.precision > 1 else ScalarRing.prime_field(p)
    if args.x is None:
        sub = subgroup_algebra(G, ring, range(G.order), tag="RG")
    else:
        sub = group_fixed_subring(G, ring, args.x)
    dec = primitive_decomposition(AlgebraPresentation(sub), seed=args.seed)
    out = dec.to_json()
    out["group"] = G.name
    out["verified"] = dec.verify()
    print(json.dumps(out, sort_keys=True, indent=1))
    return EXIT_OK if out["verified"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("groups", help="list or show built-in groups")
    g.add_argument("action", choices=("list", "show"))
    g.add_argument("name", nargs="?")
    g.set_defaults(func=_cmd_groups)

    def common(sp, need_group=False):
        sp.add_argument("--group", action="append", required=need_group,
                        help="preset name or JSON group file (repeatable)")
        sp.add_argument("--p", type=int, action="append", required=need_group, help="prime")
        sp.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="k in Z/p^k")
        sp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run the verification suite")
    common(v)
    v.set_defaults(precision=None, seed=None)
    v.add_argument("--config", help="JSON suite config")
    v.add_argument("--checks", help="comma-separated subset of " + ",".join(ALL_CHECKS))
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--no-cache", action="store_true")
    v.add_argument("--jobs", type=int, default=None)
    v.set_defaults(func=_cmd_verify)

    c = sub.add_parser("conjugate", help="find mu with u mu = mu y over Z/p^k")
    common(c, need_group=True)
    c.add_argument("--unit", required=True, help='literal such as "1*(0) + 1*(3) - 1*(4)"')
    c.add_argument("--target", type=int, required=True, help="element index y")
    c.set_defaults(func=_cmd_conjugate)

    d = sub.add_parser("decompose", help="primitive idempotent decomposition")
    common(d, need_group=True)
    d.add_argument("--x", type=int, help="decompose the fixed ring of this element instead of RG")
    d.set_defaults(func=_cmd_decompose)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except GroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
