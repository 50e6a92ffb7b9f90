"""Command-line entry point ``sprawl``.

Every report embeds the full run configuration.  JSON output is written by
:func:`sprawl.formats.dumps`, so one configuration always yields the same
bytes.  Failures print a JSON error object and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from decimal import Context, Decimal

import mpmath

from . import cayley, closed_forms, geometry, mahler, montecarlo
from .cutline import sprawl_exact
from .errors import InvalidInput, MemoryBudgetExceeded, SprawlError
from .exact import as_pair, to_q
from .formats import dumps, format_float, loads_perimeter, read_gens

DEFAULT_DIGITS = 30
EXIT_INVALID = 2
EXIT_FAILURE = 3


@dataclass
class RunConfig:
    subcommand: str
    gens: str | None = None
    perimeter: str | None = None
    shape: str | None = None
    samples: int | None = None
    seed: int | None = None
    threads: int = 1
    format: str = "json"
    digits: int = DEFAULT_DIGITS
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise InvalidInput(f"unknown config keys {sorted(unknown)}")
        return cls(**data)


def parse_report(text: str):
    """Split a JSON report into ``(RunConfig, result, warnings)``."""
    data = json.loads(text)
    return RunConfig.from_dict(data["config"]), data["result"], data.get("warnings", [])


# -- helpers -----------------------------------------------------------------

def decimal_string(x, digits: int) -> str:
    """Decimal expansion of an exact rational or an ``mpf`` to ``digits`` significant digits."""
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    x = to_q(x)
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(int(x.numerator)), Decimal(int(x.denominator))))


def _shape_perimeter(spec: closed_forms.ShapeSpec, scale: int | None):
    kind, params = spec.kind, spec.params
    if kind == "cube":
        return geometry.cube(params[0])
    if kind == "orthoplex":
        return geometry.orthoplex(params[0])
    if kind == "hexagon":
        return geometry.hexagon(*params)
    if kind == "regular_polygon":
        return geometry.regular_polygon(params[0], scale or 10**6)
    if kind == "circle":
        return geometry.approximate_circle(scale or 50)
    raise InvalidInput(f"shape {spec} has no polytope form here")


def _load_body(cfg: RunConfig, warnings: list):
    given = [k for k in ("gens", "perimeter", "shape") if getattr(cfg, k)]
    if len(given) != 1:
        raise InvalidInput("give exactly one of --gens, --perimeter, --shape")
    if cfg.gens:
        gens, warn = read_gens(cfg.gens)
        warnings.extend(warn)
        return geometry.hull(gens)
    if cfg.perimeter:
        try:
            with open(cfg.perimeter) as fh:
                return loads_perimeter(fh.read())
        except OSError as exc:
            raise InvalidInput(f"cannot read {cfg.perimeter}: {exc.strerror}") from None
    return _shape_perimeter(closed_forms.ShapeSpec.parse(cfg.shape), cfg.options.get("scale"))


def _points(points):
    return [[as_pair(c) for c in p] for p in points]


def _csv_text(header, rows, cfg):
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(cfg.to_dict(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _rational_text(x):
    x = to_q(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


# -- subcommands ---------------------------------------------------------------

def cmd_exact(cfg, warnings):
    L = _load_body(cfg, warnings)
    res = sprawl_exact(L)
    result = {
        "value": as_pair(res.value),
        "decimal": decimal_string(res.value, cfg.digits),
        "vertices": _points(L.vertices),
        "weights": [as_pair(w) for w in res.weights],
        "side_pair_matrix": [[as_pair(v) for v in row] for row in res.matrix],
    }
    return result, result["decimal"] + "\n"


def cmd_mc(cfg, warnings):
    if cfg.seed is None:
        raise InvalidInput("--seed is required for sampling")
    samples = cfg.samples or 100_000
    volume = cfg.options.get("volume", False)
    spec = closed_forms.ShapeSpec.parse(cfg.shape) if cfg.shape else None
    if spec is not None and spec.kind in ("sphere", "circle"):
        d = 2 if spec.kind == "circle" else spec.params[0]
        if volume:
            est = montecarlo.average_distance_ball(d, samples, cfg.seed, cfg.threads)
        else:
            est = montecarlo.sprawl_mc_sphere(d, samples, cfg.seed, cfg.threads)
    else:
        L = _load_body(cfg, warnings)
        fn = montecarlo.average_distance_volume if volume else montecarlo.sprawl_mc
        est = fn(L, samples, cfg.seed, cfg.threads)
    result = {
        "statistic": "average_distance_volume" if volume else "sprawl",
        "mean": est.mean,
        "stderr": est.stderr,
        "samples": est.samples,
        "seed": est.seed,
    }
    return result, format_float(est.mean) + "\n"


def _cayley_limit(group, gens):
    if isinstance(group, (cayley.FreeGroup, cayley.Lamplighter)):
        return 2
    if isinstance(group, cayley.ZdGroup):
        if group.d == 1:
            return 1
        if group.d == 2:
            return sprawl_exact(geometry.hull(geometry.GeneratorSet.from_vectors(gens))).value
    return None


def cmd_cayley(cfg, warnings):
    opts = cfg.options
    group = cayley.parse_group(opts.get("group") or "")
    radius = opts.get("radius")
    if radius is None or radius < 1:
        raise InvalidInput("--radius must be at least 1")
    if cfg.gens in (None, "default"):
        gens = group.default_generators()
    else:
        if not isinstance(group, cayley.ZdGroup):
            raise InvalidInput("generator files are only supported for zd groups")
        gs, warn = read_gens(cfg.gens)
        warnings.extend(warn)
        if gs.dimension != group.d:
            raise InvalidInput(f"generators have dimension {gs.dimension}, group is Z^{group.d}")
        if not gs.generates():
            raise InvalidInput("generators do not generate Z^d")
        gens = [tuple(int(c) for c in v) for v in gs.vectors]
    pairs = opts.get("pairs", "exact")
    mode, _ = cayley.parse_pair_mode(pairs)
    if mode == "sample" and cfg.seed is None:
        raise InvalidInput("--seed is required for sampled pairs")
    res = cayley.empirical_sprawl(group, gens, radius, pairs, cfg.seed, threads=cfg.threads,
                                  max_elements=opts.get("max_elements") or cayley.DEFAULT_MAX_ELEMENTS)
    rows = []
    for n, size, v, s in zip(res.radii, res.sizes, res.values, res.stderrs):
        exact = _rational_text(v) if mode == "exact" else ""
        rows.append([n, size, format_float(float(v)), format_float(s), exact])
    result = {
        "group": res.group,
        "mode": res.mode,
        "rows": [
            {"n": n, "size": size, "value": as_pair(v) if mode == "exact" else v, "stderr": s}
            for n, size, v, s in zip(res.radii, res.sizes, res.values, res.stderrs)
        ],
    }
    if opts.get("figure"):
        from .plotting import cayley_figure

        cayley_figure(res, opts["figure"], _cayley_limit(group, gens))
    return result, _csv_text(["n", "size", "E_n", "stderr", "E_n_exact"], rows, cfg)


def cmd_closed_form(cfg, warnings):
    if not cfg.shape:
        raise InvalidInput("--shape is required")
    spec = closed_forms.ShapeSpec.parse(cfg.shape)
    digits = max(cfg.digits, closed_forms.MIN_DIGITS)
    value = closed_forms.sprawl_formula(spec, digits)
    exact = not isinstance(value, mpmath.mpf)
    result = {
        "shape": str(spec),
        "exact": exact,
        "value": as_pair(value) if exact else None,
        "decimal": decimal_string(value, digits),
        "asymptotic": None,
    }
    try:
        limit, corr = closed_forms.asymptotic_gap(spec, digits)
        result["asymptotic"] = {"limit": decimal_string(limit, digits),
                                "correction": decimal_string(corr, digits)}
    except SprawlError:
        pass
    return result, result["decimal"] + "\n"


def cmd_mahler(cfg, warnings):
    L = _load_body(cfg, warnings)
    rep = mahler.mahler_report(L, max(cfg.digits, closed_forms.MIN_DIGITS))
    dual = mahler.polar_perimeter(L)
    result = {
        "dimension": rep.dimension,
        "volume": as_pair(rep.volume),
        "polar_volume": as_pair(rep.polar_volume),
        "mahler": as_pair(rep.mahler),
        "mahler_decimal": decimal_string(rep.mahler, cfg.digits),
        "kuperberg_bound": decimal_string(rep.kuperberg, cfg.digits),
        "kuperberg_holds": rep.kuperberg_holds,
        "santalo_bound": None if rep.santalo is None else decimal_string(rep.santalo, cfg.digits),
        "santalo_holds": rep.santalo_holds,
        "polar_vertices": _points(dual.vertices),
    }
    text = "".join(f"{k}: {result[k]}\n" for k in (
        "volume", "polar_volume", "mahler", "mahler_decimal", "kuperberg_bound",
        "kuperberg_holds", "santalo_bound", "santalo_holds"))
    return result, text


def _step(text):
    step = to_q(text)
    if step <= 0 or step.numerator != 1:
        raise InvalidInput("--step must be 1/k for a positive integer k")
    return step


def hexagon_grid(step):
    """Rational points ``(x, y)`` with x >= 1, y >= 0, x + y <= 2 on a grid of spacing ``step``."""
    k = int(step.denominator)
    return [(1 + i * step, j * step) for i in range(k + 1) for j in range(k + 1 - i)]


def cmd_scan_hexagon(cfg, warnings):
    opts = cfg.options
    step = _step(opts.get("step") or "1/10")
    method = opts.get("method", "cutline")
    rows = []
    mismatches = 0
    for x, y in hexagon_grid(step):
        formula = closed_forms.hexagon_formula(x, y)
        value = sprawl_exact(geometry.hexagon(x, y)).value if method == "cutline" else formula
        mismatches += value != formula
        rows.append((x, y, value))
    lo = min(rows, key=lambda r: r[2])
    hi = max(rows, key=lambda r: r[2])
    table = _csv_text(
        ["x", "y", "E", "E_decimal"],
        [[_rational_text(x), _rational_text(y), _rational_text(v), decimal_string(v, 17)] for x, y, v in rows],
        cfg,
    )
    if opts.get("out"):
        with open(opts["out"], "w") as fh:
            fh.write(table)
    if opts.get("figure"):
        from .plotting import hexagon_scan_figure

        hexagon_scan_figure(rows, opts["figure"])
    result = {
        "points": len(rows),
        "method": method,
        "formula_mismatches": int(mismatches),
        "min": {"x": as_pair(lo[0]), "y": as_pair(lo[1]), "value": as_pair(lo[2])},
        "max": {"x": as_pair(hi[0]), "y": as_pair(hi[1]), "value": as_pair(hi[2])},
        "out": opts.get("out"),
    }
    return result, table


def cmd_approx_circle(cfg, warnings):
    opts = cfg.options
    scale = opts.get("scale") or 50
    L = geometry.approximate_circle(scale, opts.get("angles"))
    value = sprawl_exact(L).value
    with mpmath.workdps(cfg.digits + 10):
        target = 4 / mpmath.pi
        error = mpmath.mpf(int(value.numerator)) / int(value.denominator) - target
    result = {
        "scale": scale,
        "vertices": len(L.vertices),
        "value": as_pair(value),
        "decimal": decimal_string(value, cfg.digits),
        "target": decimal_string(target, cfg.digits),
        "error": float(error),
    }
    if opts.get("figure"):
        from .plotting import polygon_figure

        polygon_figure(L, opts["figure"], f"scale {scale}: E = {float(value):.10f}")
    return result, result["decimal"] + "\n"


COMMANDS = {
    "exact": cmd_exact,
    "mc": cmd_mc,
    "cayley": cmd_cayley,
    "closed-form": cmd_closed_form,
    "mahler": cmd_mahler,
    "scan-hexagon": cmd_scan_hexagon,
    "approx-circle": cmd_approx_circle,
}


def run(cfg: RunConfig):
    """Execute a configuration; return ``(exit_status, output_text, warnings)``."""
    warnings: list = []
    if cfg.subcommand not in COMMANDS:
        return EXIT_INVALID, _error_text(InvalidInput(f"unknown subcommand {cfg.subcommand!r}")), warnings
    try:
        result, alt = COMMANDS[cfg.subcommand](cfg, warnings)
    except InvalidInput as exc:
        return EXIT_INVALID, _error_text(exc), warnings
    except SprawlError as exc:
        return EXIT_FAILURE, _error_text(exc), warnings
    if cfg.format == "json":
        report = {"command": cfg.subcommand, "config": cfg.to_dict(), "result": result}
        if warnings:
            report["warnings"] = warnings
        return 0, dumps(report), warnings
    return 0, alt, warnings


def _error_text(exc) -> str:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, MemoryBudgetExceeded):
        err["completed_radius"] = exc.completed_radius
    return dumps({"error": err})


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sprawl", description="Sprawl of word metrics and convex perimeters.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def body_args(sp, shape_help="shape spec"):
        sp.add_argument("--gens", help="generating-set file")
        sp.add_argument("--perimeter", help="perimeter JSON file")
        sp.add_argument("--shape", help=shape_help)
        sp.add_argument("--scale", type=int, help="integer scale for pgon/circle approximants")

    def digits_arg(sp, default=DEFAULT_DIGITS):
        sp.add_argument("--digits", type=int, default=default, help="significant digits in decimals")

    sp = sub.add_parser("exact", help="exact planar sprawl by cutlines")
    body_args(sp, "hexagon:X,Y | cube:2 | orthoplex:2 | pgon:X | circle")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--decimal", type=int, metavar="PREC", help="print only the decimal value")

    sp = sub.add_parser("mc", help="Monte Carlo sprawl estimate")
    body_args(sp, "cube:D | orthoplex:D | sphere:D | circle | hexagon:X,Y | pgon:X")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--threads", type=int)
    sp.add_argument("--volume", action="store_true", help="average distance over the solid body")
    sp.add_argument("--format", choices=["json", "decimal"], default="json")

    sp = sub.add_parser("cayley", help="word-metric E_n by breadth-first search")
    sp.add_argument("--group", required=True, help="zd:D | free:K | lamplighter:M")
    sp.add_argument("--gens", default="default", help="generating-set file (zd only) or 'default'")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--pairs", default="exact", help="exact | sample:K")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--threads", type=int)
    sp.add_argument("--max-elements", type=int, help="ball size budget")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--figure", help="write a PNG/SVG/PDF plot of E_n")

    sp = sub.add_parser("closed-form", help="closed-form sprawl values")
    sp.add_argument("--shape", required=True,
                    help="pgon:X | circle | hexagon:X,Y | sphere:D | cube:D | orthoplex:D")
    digits_arg(sp, closed_forms.MIN_DIGITS)
    sp.add_argument("--format", choices=["json", "decimal"], default="json")

    sp = sub.add_parser("mahler", help="polar body and Mahler volume")
    body_args(sp, "cube:D | orthoplex:D | hexagon:X,Y | pgon:X | circle")
    sp.add_argument("--json", action="store_true", help="JSON report instead of text")
    digits_arg(sp)

    sp = sub.add_parser("scan-hexagon", help="exact sprawl over the hexagon parameter triangle")
    sp.add_argument("--step", default="1/10", help="grid spacing 1/k")
    sp.add_argument("--out", help="CSV output path")
    sp.add_argument("--method", choices=["cutline", "formula"], default="cutline")
    sp.add_argument("--figure", help="write a plot of the scan")
    sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = sub.add_parser("approx-circle", help="exact sprawl of an integer circle approximant")
    sp.add_argument("--scale", type=int, default=50)
    sp.add_argument("--angles", type=int, help="number of sampled directions")
    sp.add_argument("--figure", help="write a plot of the polygon")
    digits_arg(sp)
    sp.add_argument("--format", choices=["json", "decimal"], default="json")
    return p


def config_from_args(args) -> RunConfig:
    a = vars(args)
    sc = a["subcommand"]
    fmt = a.get("format", "json")
    digits = a.get("digits") or DEFAULT_DIGITS
    if sc == "exact" and a.get("decimal") is not None:
        fmt, digits = "decimal", a["decimal"]
    if sc == "mahler":
        fmt = "json" if a.get("json") else "text"
    options = {}
    for key in ("scale", "volume", "group", "radius", "pairs", "max_elements", "step", "out",
                "method", "figure", "angles"):
        if a.get(key) not in (None, False):
            options[key] = a[key]
    threads = a.get("threads") or montecarlo.default_threads()
    return RunConfig(
        subcommand=sc,
        gens=a.get("gens"),
        perimeter=a.get("perimeter"),
        shape=a.get("shape"),
        samples=a.get("samples"),
        seed=a.get("seed"),
        threads=threads,
        format=fmt,
        digits=digits,
        options=options,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except InvalidInput as exc:
        sys.stdout.write(_error_text(exc))
        return EXIT_INVALID
    status, text, warnings = run(cfg)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
