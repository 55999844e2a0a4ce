"""Command-line surface: index, test, simulate, contour.

Input samples are delimiter-separated text (comma or whitespace): either two
files holding one numeric column each (optional single header line), or one
file with a ``group`` column taking values x/y and a ``value`` column.
Non-finite entries are rejected with a line-numbered message rather than
skipped, because silently dropping rows would corrupt the sample-size ratio
every test depends on.

Output is a single JSON document (schema ``dominance-lab/1``) or, for the
tabular commands, CSV with a fixed header.  All floats are serialized with
17 significant digits so parsing the report back reproduces the in-process
values exactly.  Exit codes: 0 success, 2 usage or input error, 3 internal
numerical failure.  A rejected or accepted null is data, not an error: the
``test`` command exits 0 either way.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from .distributions import RngStream, empirical_from
from .errors import DataError, DominanceError, DomainError, SingularityError
from .indices import gamma_empirical, normal_indices, pi_empirical, quantile_crossing_measure
from .inference import TestSpec, run_test
from .simulation import SimulationCell, contour_grid, run_table

__all__ = ["main"]

SCHEMA = "dominance-lab/1"
ENV_THREADS = "DOMINANCE_LAB_THREADS"

_METHOD_NAMES = {"lf": "least-favorable", "boot": "bootstrap", "plugin": "plugin-normal"}

SIMULATE_HEADER = [
    "mu", "sigma", "n", "m", "index", "delta0", "alpha", "method", "B",
    "reps", "seed", "rate", "mc_se", "error",
]
CONTOUR_HEADER = ["mu", "sigma", "value"]


# ---------------------------------------------------------------------------
# serialization


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise SingularityError(f"non-finite value in report: {value!r}")
        return format(float(value), ".17g")
    raise TypeError(f"unsupported report value {value!r}")


def _render_json(doc, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(doc, dict):
        if not doc:
            return "{}"
        parts = [f'{inner}"{key}": {_render_json(val, indent + 1)}' for key, val in doc.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(doc, (list, tuple)):
        if not doc:
            return "[]"
        parts = [f"{inner}{_render_json(item, indent + 1)}" for item in doc]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(doc, str):
        escaped = doc.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'
    return _fmt(doc)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value.replace(",", ";")
    return _fmt(value)


def _render_csv(header: list[str], rows: list[dict]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(row[col]) for col in header) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


# ---------------------------------------------------------------------------
# input parsing


def _tokens(line: str) -> list[str]:
    return [tok.strip() for tok in (line.split(",") if "," in line else line.split())]


def _parse_value(token: str, path: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DataError(f"{path}:{lineno}: not a number: {token!r}") from None
    if not math.isfinite(value):
        raise DataError(f"{path}:{lineno}: non-finite value {token!r} rejected")
    return value


def _read_column(path: str) -> np.ndarray:
    values: list[float] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            toks = _tokens(line)
            if len(toks) != 1:
                raise DataError(f"{path}:{lineno}: expected one column, got {len(toks)}")
            if lineno == 1 and not values:
                try:
                    float(toks[0])
                except ValueError:
                    continue  # optional header line
            values.append(_parse_value(toks[0], path, lineno))
    if not values:
        raise DataError(f"{path}: no data rows")
    return np.asarray(values)


def _read_grouped(path: str) -> tuple[np.ndarray, np.ndarray]:
    xs: list[float] = []
    ys: list[float] = []
    group_col, value_col = 0, 1
    with open(path, "r", encoding="utf-8") as handle:
        first = True
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            toks = _tokens(line)
            if len(toks) != 2:
                raise DataError(f"{path}:{lineno}: expected columns group,value, got {len(toks)}")
            if first:
                first = False
                lowered = [tok.lower() for tok in toks]
                if "group" in lowered and "value" in lowered:
                    group_col = lowered.index("group")
                    value_col = lowered.index("value")
                    continue
            group = toks[group_col].lower()
            if group not in ("x", "y"):
                raise DataError(f"{path}:{lineno}: group must be x or y, got {toks[group_col]!r}")
            value = _parse_value(toks[value_col], path, lineno)
            (xs if group == "x" else ys).append(value)
    if not xs or not ys:
        raise DataError(f"{path}: need rows for both groups x and y")
    return np.asarray(xs), np.asarray(ys)


def _load_samples(paths: list[str]):
    if len(paths) == 2:
        raw_x, raw_y = _read_column(paths[0]), _read_column(paths[1])
    elif len(paths) == 1:
        raw_x, raw_y = _read_grouped(paths[0])
    else:
        raise DataError(f"expected 1 or 2 input files, got {len(paths)}")
    return empirical_from(raw_x), empirical_from(raw_y)


# ---------------------------------------------------------------------------
# option plumbing


def _comma_list(cast):
    def parse(text: str):
        try:
            return [cast(tok) for tok in text.split(",") if tok.strip() != ""]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None

    return parse


def _range_spec(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must look like a:b:n, got {text!r}")
    try:
        lo, hi, num = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like a:b:n, got {text!r}") from None
    return lo, hi, num


def _resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get(ENV_THREADS, "").strip()
        if env:
            try:
                value = int(env)
            except ValueError:
                raise DomainError(f"{ENV_THREADS} must be an integer, got {env!r}") from None
        else:
            value = 1
    if value < 1:
        raise DomainError(f"thread count must be >= 1, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dominance-lab",
        description="Indices and tests for approximate stochastic dominance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_format: bool = False) -> None:
        p.add_argument("--output", default=None, help="output path (default stdout)")
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default ${ENV_THREADS} or 1)")
        if with_format:
            p.add_argument("--format", choices=("json", "csv"), default="json")

    p_index = sub.add_parser("index", help="estimate both indices from two samples")
    p_index.add_argument("inputs", nargs="+", help="two single-column files or one group,value file")
    p_index.add_argument("--assume-normal", action="store_true",
                         help="also report closed-form indices at fitted normal parameters")
    common(p_index)

    p_test = sub.add_parser("test", help="test H0: index >= delta0 against index < delta0")
    p_test.add_argument("inputs", nargs="+")
    p_test.add_argument("--index", choices=("pi", "gamma"), required=True)
    p_test.add_argument("--delta0", type=float, required=True)
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--method", choices=tuple(_METHOD_NAMES), default="boot")
    p_test.add_argument("--B", type=int, default=200)
    p_test.add_argument("--seed", type=int, default=0)
    common(p_test)

    p_sim = sub.add_parser("simulate", help="rejection rates over a grid of cells")
    p_sim.add_argument("--mu", type=_comma_list(float), required=True)
    p_sim.add_argument("--sigma", type=_comma_list(float), required=True)
    p_sim.add_argument("--n", type=_comma_list(int), required=True)
    p_sim.add_argument("--m", type=_comma_list(int), default=None,
                       help="second sample sizes, parallel to --n (default: same as --n)")
    p_sim.add_argument("--index", choices=("pi", "gamma"), required=True)
    p_sim.add_argument("--delta0", type=_comma_list(float), required=True)
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--method", choices=tuple(_METHOD_NAMES), default="boot")
    p_sim.add_argument("--B", type=int, default=200)
    p_sim.add_argument("--reps", type=int, default=1000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--timings", action="store_true",
                       help="include wall-clock seconds per cell (breaks byte-identity)")
    common(p_sim, with_format=True)

    p_cont = sub.add_parser("contour", help="closed-form index on a (mu, sigma) grid")
    p_cont.add_argument("--index", choices=("pi", "gamma"), required=True)
    p_cont.add_argument("--mu-range", type=_range_spec, required=True, metavar="a:b:n")
    p_cont.add_argument("--sigma-range", type=_range_spec, required=True, metavar="a:b:n")
    common(p_cont, with_format=True)

    return parser


# ---------------------------------------------------------------------------
# commands


def _cmd_index(args) -> None:
    x, y = _load_samples(args.inputs)
    curve = gamma_empirical(x, y)
    doc = {
        "schema": SCHEMA,
        "command": "index",
        "n": x.n,
        "m": y.n,
        "pi": pi_empirical(x, y),
        "gamma_hat": curve.gamma_hat,
        "gamma_star": curve.gamma_star,
        "psi_at_star": curve.psi_at_star,
        "psi_at_zero": float(curve.values[0]),
        "psi_at_one": float(curve.values[-1]),
        "crossing_measure": quantile_crossing_measure(x, y),
        "degenerate": curve.degenerate,
    }
    if args.assume_normal:
        fitted = normal_indices(x.mean, x.sd_ml, y.mean, y.sd_ml)
        doc["normal_plugin"] = {
            "mu_x": x.mean, "sigma_x": x.sd_ml,
            "mu_y": y.mean, "sigma_y": y.sd_ml,
            "pi": fitted.pi, "gamma": fitted.gamma,
        }
    _emit(_render_json(doc) + "\n", args.output)


def _cmd_test(args) -> None:
    x, y = _load_samples(args.inputs)
    spec = TestSpec(
        index=args.index,
        delta0=args.delta0,
        alpha=args.alpha,
        method=_METHOD_NAMES[args.method],
        B=args.B,
    )
    report = run_test(RngStream(args.seed), x, y, spec)
    doc = {"schema": SCHEMA, "command": "test", **asdict(report)}
    _emit(_render_json(doc) + "\n", args.output)


def _cmd_simulate(args) -> None:
    threads = _resolve_threads(args.threads)
    m_list = args.m if args.m is not None else args.n
    if len(m_list) != len(args.n):
        raise DomainError("--m must be parallel to --n")
    cells = []
    cell_id = 0
    for mu in args.mu:
        for sigma in args.sigma:
            for n, m in zip(args.n, m_list):
                for delta0 in args.delta0:
                    cells.append(
                        SimulationCell(
                            mu=mu, sigma=sigma, n=n, m=m,
                            index=args.index, delta0=delta0, alpha=args.alpha,
                            method=_METHOD_NAMES[args.method], B=args.B,
                            reps=args.reps, seed=args.seed + cell_id,
                        )
                    )
                    cell_id += 1
    rows = []
    for row in run_table(cells, threads=threads):
        c = row.cell
        record = {
            "mu": c.mu, "sigma": c.sigma, "n": c.n, "m": c.m,
            "index": c.index, "delta0": c.delta0, "alpha": c.alpha,
            "method": c.method, "B": c.B, "reps": c.reps, "seed": c.seed,
            "rate": row.rate, "mc_se": row.mc_se, "error": row.error,
        }
        if args.timings:
            record["seconds"] = row.seconds
        rows.append(record)
    if args.format == "csv":
        header = SIMULATE_HEADER + (["seconds"] if args.timings else [])
        _emit(_render_csv(header, rows), args.output)
    else:
        _emit(_render_json({"schema": SCHEMA, "command": "simulate", "rows": rows}) + "\n",
              args.output)


def _cmd_contour(args) -> None:
    mu_lo, mu_hi, mu_n = args.mu_range
    sg_lo, sg_hi, sg_n = args.sigma_range
    grid = contour_grid(args.index, (mu_lo, mu_hi), (sg_lo, sg_hi), (mu_n, sg_n))
    rows = [
        {"mu": float(grid.mu_axis[i]), "sigma": float(grid.sigma_axis[j]),
         "value": float(grid.values[i, j])}
        for i in range(grid.mu_axis.size)
        for j in range(grid.sigma_axis.size)
    ]
    if args.format == "csv":
        _emit(_render_csv(CONTOUR_HEADER, rows), args.output)
    else:
        doc = {"schema": SCHEMA, "command": "contour", "index": args.index, "rows": rows}
        _emit(_render_json(doc) + "\n", args.output)


_COMMANDS = {
    "index": _cmd_index,
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "contour": _cmd_contour,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except (SingularityError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DominanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
