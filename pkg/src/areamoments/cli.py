"""Command-line entry point: ``areamoments <subcommand>``.

Settings resolve in this order, later wins: built-in defaults, the JSON
config file, ``AREAMOMENTS_*`` environment variables, command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import hh_crosscheck, identities, moment_engine, walk_oracle
from .exactmath import format_elementary_symmetric
from .walk_oracle import SizeError, StepCounts, cardinal

log = logging.getLogger("areamoments")

FORMATS = ("pretty", "json", "csv")
DEFAULT_PHI_SAMPLES = (0.0, 0.7, math.pi)
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SIZE = 0, 1, 2, 3


@dataclass(frozen=True)
class CliConfig:
    cache_path: Path
    output_format: str = "pretty"
    tolerance: float = 1e-9
    state_budget: int = walk_oracle.DEFAULT_STATE_BUDGET
    quadrature_margin: int = 2

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.output_format!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.state_budget <= 0:
            raise ValueError("state budget must be > 0")
        if self.quadrature_margin < 0:
            raise ValueError("quadrature margin must be >= 0")


def default_config_path() -> Path:
    env = os.environ.get("AREAMOMENTS_CONFIG")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CONFIG_HOME") or os.path.join(Path.home(), ".config")
    return Path(base) / "areamoments" / "config.json"


_ENV = {
    "AREAMOMENTS_CACHE": ("cache_path", Path),
    "AREAMOMENTS_FORMAT": ("output_format", str),
    "AREAMOMENTS_TOLERANCE": ("tolerance", float),
    "AREAMOMENTS_BUDGET": ("state_budget", int),
    "AREAMOMENTS_QUADRATURE_MARGIN": ("quadrature_margin", int),
}
_FILE_KEYS = {
    "cache": ("cache_path", Path),
    "format": ("output_format", str),
    "tolerance": ("tolerance", float),
    "budget": ("state_budget", int),
    "quadrature_margin": ("quadrature_margin", int),
}


def resolve_config(args: argparse.Namespace, environ=None) -> CliConfig:
    environ = os.environ if environ is None else environ
    values: dict = {"cache_path": moment_engine.default_cache_path()}

    cfg_path = Path(getattr(args, "config", None) or default_config_path())
    if cfg_path.exists():
        doc = json.loads(cfg_path.read_text(encoding="utf-8"))
        for key, (field, conv) in _FILE_KEYS.items():
            if key in doc:
                values[field] = conv(doc[key])
    for var, (field, conv) in _ENV.items():
        if environ.get(var):
            values[field] = conv(environ[var])
    for flag, field in (("cache", "cache_path"), ("format", "output_format"),
                        ("tolerance", "tolerance"), ("budget", "state_budget"),
                        ("quadrature_margin", "quadrature_margin")):
        if hasattr(args, flag):
            values[field] = getattr(args, flag)
    values["cache_path"] = Path(values["cache_path"])
    return CliConfig(**values)


# -- output helpers ------------------------------------------------------------


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2))


def _emit_csv(header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _moment_poly(two_l: int, cfg: CliConfig):
    poly, hit = moment_engine.cached_moment_polynomial(two_l, cfg.cache_path)
    log.info("P_%d %s", two_l, "read from cache" if hit else "computed")
    return poly


# -- subcommands ---------------------------------------------------------------


def cmd_moments(args, cfg: CliConfig) -> int:
    orders = range(2, args.max + 1, 2)
    polys = {two_l: _moment_poly(two_l, cfg) for two_l in orders}
    if cfg.output_format == "json":
        _emit_json({"moments": [
            {
                "two_l": two_l,
                "poly": p.to_json_obj(),
                "monomial": p.format(("n1", "n2")),
                "symmetric": format_elementary_symmetric(p),
            }
            for two_l, p in polys.items()
        ]})
    elif cfg.output_format == "csv":
        rows = [[two_l, a, b, str(c)] for two_l, p in polys.items() for (a, b), c in p.items()]
        _emit_csv(["two_l", "power_n1", "power_n2", "coefficient"], rows)
    else:
        for two_l, p in polys.items():
            print(f"P_{two_l}(n1,n2) = {p.format(('n1', 'n2'))}")
            print(f"{' ' * (len(str(two_l)) + 10)}= {format_elementary_symmetric(p)}")
    return EXIT_OK


def cmd_distribution(args, cfg: CliConfig) -> int:
    sc = StepCounts(args.n1, args.n2)
    dist = walk_oracle.enumerate_dp(sc, cfg.state_budget)
    card = sc.cardinal()
    moments = [(order, walk_oracle.moment(dist, order)) for order in range(0, 13)]
    if cfg.output_format == "json":
        obj = dist.to_json_obj()
        obj["cardinal"] = str(card)
        obj["moments"] = [[order, str(m)] for order, m in moments]
        _emit_json(obj)
    elif cfg.output_format == "csv":
        _emit_csv(["area", "count"], [[a, str(c)] for a, c in dist.histogram()])
        print()
        _emit_csv(["n1", "n2", "two_l", "cardinal", "moment"],
                  [[sc.n1, sc.n2, order, str(card), str(m)] for order, m in moments if order % 2 == 0])
    else:
        print(f"n1={sc.n1} n2={sc.n2} loops={card}")
        print("histogram:")
        for a, c in dist.histogram():
            print(f"  {a:>6d}  {c}")
        print("moments:")
        for order, m in moments:
            print(f"  {order:>3d}  {m}")
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig) -> int:
    orders = list(range(2, args.moments + 1, 2))
    polys = {two_l: _moment_poly(two_l, cfg) for two_l in orders}
    cases = []
    for total in range(args.n + 1):
        for n1 in range(total + 1):
            n2 = total - n1
            dist = walk_oracle.enumerate_dp(StepCounts(n1, n2), cfg.state_budget)
            card = cardinal(n1, n2)
            for two_l in orders:
                got = walk_oracle.moment(dist, two_l)
                want = card * polys[two_l].evaluate(n1, n2)
                cases.append((n1, n2, two_l, card, got, want, got == want))
    failures = [c for c in cases if not c[6]]
    if cfg.output_format == "json":
        _emit_json({
            "cases": [
                {"n1": n1, "n2": n2, "two_l": t, "cardinal": str(card),
                 "moment": str(got), "expected": str(want), "pass": ok}
                for n1, n2, t, card, got, want, ok in cases
            ],
            "passed": not failures,
        })
    elif cfg.output_format == "csv":
        _emit_csv(["n1", "n2", "two_l", "cardinal", "moment", "pass"],
                  [[n1, n2, t, str(card), str(got), ok] for n1, n2, t, card, got, want, ok in cases])
    else:
        for n1, n2, t, card, got, want, ok in failures:
            print(f"FAIL n1={n1} n2={n2} 2l={t}: oracle {got} != {want}")
        print(f"{len(cases) - len(failures)}/{len(cases)} cases pass")
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_identities(args, cfg: CliConfig) -> int:
    reports = identities.run_sweep(args.max_k, args.max_n)
    failures = [r for r in reports if not r.passed]
    if cfg.output_format == "json":
        _emit_json([r.to_json_obj() for r in reports])
    elif cfg.output_format == "csv":
        _emit_csv(["name", "params", "lhs", "rhs", "pass"],
                  [[r.identity_name, " ".join(map(str, r.parameter_point)), str(r.lhs), str(r.rhs), r.passed]
                   for r in reports])
    else:
        for r in failures:
            print(f"FAIL {r.identity_name}{r.parameter_point}: {r.lhs} != {r.rhs}")
        names = sorted({r.identity_name for r in reports})
        for name in names:
            group = [r for r in reports if r.identity_name == name]
            print(f"{name}: {sum(r.passed for r in group)}/{len(group)} pass")
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_hh(args, cfg: CliConfig) -> int:
    phis = args.phi if args.phi else list(DEFAULT_PHI_SAMPLES)
    if 2 * (args.n1 + args.n2) > hh_crosscheck.MAX_WALK_LENGTH:
        raise SizeError(f"hh check limited to 2(n1+n2) <= {hh_crosscheck.MAX_WALK_LENGTH}")
    dist = walk_oracle.enumerate_dp(StepCounts(args.n1, args.n2), cfg.state_budget)
    points = 2 * (args.n1 + args.n2) + cfg.quadrature_margin
    points = max(points, 2 * args.n2 + 1)
    samples = hh_crosscheck.check_identity(args.n1, args.n2, phis, cfg.tolerance, dist=dist,
                                           points=points)
    failures = [s for s in samples if not s.passed]
    if cfg.output_format == "json":
        _emit_json([s.to_json_obj() for s in samples])
    elif cfg.output_format == "csv":
        keys = ["n1", "n2", "phi", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "pass"]
        _emit_csv(keys, [[s.to_json_obj()[k] for k in keys] for s in samples])
    else:
        for s in samples:
            status = "ok" if s.passed else "FAIL"
            print(f"phi={s.phi:.6g} lhs={s.lhs.real:.12g}{s.lhs.imag:+.3g}j "
                  f"rhs={s.rhs.real:.12g}{s.rhs.imag:+.3g}j residual={s.residual:.3g} {status}")
    return EXIT_OK if not failures else EXIT_FAIL


# -- parser --------------------------------------------------------------------


def _even_at_least_two(text: str) -> int:
    value = int(text)
    if value < 2 or value % 2:
        raise argparse.ArgumentTypeError(f"must be an even integer >= 2, got {value}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--format", choices=FORMATS, default=s, help="output format")
    p.add_argument("--cache", type=Path, default=s, help="moment polynomial cache file")
    p.add_argument("--tolerance", type=float, default=s, help="relative tolerance for hh checks")
    p.add_argument("--budget", type=int, default=s, help="DP state budget")
    p.add_argument("--quadrature-margin", dest="quadrature_margin", type=int, default=s,
                   help="extra nu grid points beyond 2(n1+n2)")
    p.add_argument("--config", type=Path, default=s, help="JSON config file")
    p.add_argument("-v", "--verbose", action="store_true", default=s)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="areamoments", parents=[common],
        description="Moments of the algebraic area of closed lattice walks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common], help="print P_2 .. P_max")
    p.add_argument("--max", type=_even_at_least_two, default=4)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("distribution", parents=[common], help="exact area histogram")
    p.add_argument("n1", type=_nonneg)
    p.add_argument("n2", type=_nonneg)
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("verify", parents=[common], help="oracle moments vs cardinal * P")
    p.add_argument("--n", type=_nonneg, default=5, help="largest n1 + n2")
    p.add_argument("--moments", type=_even_at_least_two, default=12, help="largest 2l")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", parents=[common], help="combinatorial identity sweep")
    p.add_argument("--max-k", dest="max_k", type=int, default=5)
    p.add_argument("--max-n", dest="max_n", type=int, default=6)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("hh", parents=[common], help="Hofstadter-Harper cross-check")
    p.add_argument("--n1", type=_nonneg, default=1)
    p.add_argument("--n2", type=_nonneg, default=1)
    p.add_argument("--phi", type=float, action="append", help="flux sample (repeatable)")
    p.set_defaults(func=cmd_hh)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sys.stdout.reconfigure(encoding="utf-8", line_buffering=True)
    except (AttributeError, ValueError):
        pass
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))
    try:
        return args.func(args, cfg)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except SizeError as exc:
        print(f"areamoments: {exc}; raise --budget or choose smaller inputs", file=sys.stderr)
        return EXIT_SIZE
    except moment_engine.InvariantError as exc:
        print(f"areamoments: invariant failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
