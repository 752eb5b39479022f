"""Command-line front end: sweep | tables | verify | asymptotics.

Exit codes: 0 success, 1 bad configuration, 2 no admissible position,
3 verification failure. CSV output is deterministic: rows are ordered by
index and written by a single writer after all computation finishes, so the
same configuration produces byte-identical files at any parallelism degree.
"""

from __future__ import annotations

import argparse
import sys

import numba
import numpy as np

from .errors import NoAdmissiblePositionError
from .models import ModalModel, chain_model, string_model, rod_model
from .trace_formula import Criterion, energy_weights, displacement_weights
from .positions import sweep_positions, best_position, scaling_ratios
from .asymptotics import (
    energy_a_slope,
    energy_b1_slope,
    b2_tail_sum,
    b3_tail_bound,
)
from . import verify as verify_mod

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_ADMISSIBLE = 2
EXIT_VERIFY_FAILED = 3

FULL_SCALE_DIMS = list(range(2000, 10001, 1000))

# table id -> (criterion, [(offset, count)], default dims, both_criteria)
_TABLE_DEFS = {
    1: (Criterion.ENERGY, [(0, 100)], [2000], False),
    2: (Criterion.ENERGY, [(100, 100)], [2000], False),
    3: (Criterion.DISPLACEMENT, [(0, 100)], [2000], False),
    4: (Criterion.DISPLACEMENT, [(100, 100)], [2000], False),
    5: (None, [(0, 20), (0, 50), (0, 100), (100, 20), (100, 50), (200, 20)],
        [600], True),
    6: (None, [(0, 5), (0, 10), (10, 5), (10, 10), (30, 5), (30, 10)],
        [600], True),
}


class CliConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on errors; the exit-code contract wants 1
    def error(self, message):
        raise CliConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="damperopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--threads", type=int, help="parallelism degree")
        p.add_argument("--config", help="flat key=value config file; flags win")

    p = sub.add_parser("sweep", help="optimal trace at every damper position")
    p.add_argument("--model", choices=["chain", "string", "rod"])
    p.add_argument("--n", type=int)
    p.add_argument("--criterion", choices=["energy", "displacement"])
    p.add_argument("--band-offset", type=int, dest="band_offset")
    p.add_argument("--band-count", type=int, dest="band_count")
    p.add_argument("--rod-a0", type=float, dest="rod_a0")
    p.add_argument("--rod-k0", type=float, dest="rod_k0")
    common(p)

    p = sub.add_parser("tables", help="optimal-position tables")
    p.add_argument("--table", type=int)
    p.add_argument("--n-list", dest="n_list",
                   help="comma-separated dimensions, overrides defaults")
    p.add_argument("--full-scale", action="store_const", const=True,
                   dest="full_scale", help="run dimensions 2000..10000")
    common(p)

    p = sub.add_parser("verify", help="oracle verification suites")
    p.add_argument("--scale", choices=["small"])
    common(p)

    p = sub.add_parser("asymptotics", help="scaling ratios and analytic limits")
    p.add_argument("--p", type=float, help="relative damper position in (0,1)")
    p.add_argument("--criterion", choices=["energy", "displacement"])
    p.add_argument("--band-offset", type=int, dest="band_offset")
    p.add_argument("--band-count", type=int, dest="band_count")
    p.add_argument("--n-list", dest="n_list")
    p.add_argument("--tail-sums", dest="tail_sums",
                   help="comma-separated k values: emit tail-sum table instead")
    common(p)
    return parser


def _load_config(path: str) -> dict[str, str]:
    conf = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliConfigError(
                        f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = line.split("=", 1)
                conf[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise CliConfigError(f"cannot read config file {path}: {exc}")
    return conf


_CONFIG_TYPES = {
    "n": int, "band_offset": int, "band_count": int, "threads": int,
    "table": int, "p": float, "rod_a0": float, "rod_k0": float,
    "full_scale": lambda s: s.lower() in ("1", "true", "yes"),
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if getattr(args, "config", None):
        conf = _load_config(args.config)
        for key, raw in conf.items():
            if getattr(args, key, None) is None:
                caster = _CONFIG_TYPES.get(key, str)
                try:
                    setattr(args, key, caster(raw))
                except ValueError as exc:
                    raise CliConfigError(f"config key {key}: {exc}")
    return args


def _parse_n_list(text: str | None, default: list[int]) -> list[int]:
    if text is None:
        return default
    try:
        values = [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise CliConfigError(f"bad n list: {exc}")
    if not values:
        raise CliConfigError("empty n list")
    return sorted(values)


def _apply_threads(threads: int | None):
    if threads is None:
        return
    if threads < 1:
        raise CliConfigError(f"thread count must be >= 1, got {threads}")
    numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))


def _build_model(args) -> ModalModel:
    model = args.model or "chain"
    if args.n is None:
        raise CliConfigError("--n is required")
    if model == "chain":
        return chain_model(args.n)
    if model == "string":
        return string_model(args.n)
    return rod_model(args.n,
                     a0=args.rod_a0 if args.rod_a0 is not None else 1.0,
                     k0=args.rod_k0 if args.rod_k0 is not None else 1.0)


def _build_weights(args, model: ModalModel):
    criterion = Criterion(args.criterion or "energy")
    offset = args.band_offset if args.band_offset is not None else 0
    count = args.band_count if args.band_count is not None else model.n - offset
    if criterion is Criterion.ENERGY:
        return energy_weights(offset, count, model)
    return displacement_weights(offset, count, model)


def _write_csv(path: str | None, header: list[str], rows: list[list[str]]):
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _fmt6(x: float) -> str:
    return f"{x:.6g}"


def _fmt12(x: float) -> str:
    return f"{x:.12g}"


def _cmd_sweep(args) -> int:
    model = _build_model(args)
    weights = _build_weights(args, model)
    result = sweep_positions(model, weights)
    design = best_position(result)  # raises (exit 2) before anything is written
    rows = [[str(model.n), str(r.k), _fmt6(r.p), _fmt12(r.v_opt),
             _fmt12(r.trace_opt), "1" if r.finite else "0"]
            for r in result.rows]
    _write_csv(args.out, ["n", "k", "p", "v_opt", "trace_opt", "admissible"], rows)
    summary = (f"best k={design.position_index} p={_fmt6(design.position_p)} "
               f"v_opt={_fmt12(design.v_opt)} trace_opt={_fmt12(design.trace_opt)}")
    if design.symmetric_partner is not None:
        summary += f" symmetric_partner={design.symmetric_partner}"
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _cmd_tables(args) -> int:
    if args.table is None:
        raise CliConfigError("--table is required (1..6)")
    if args.table not in _TABLE_DEFS:
        raise CliConfigError(f"table must be in 1..6, got {args.table}")
    criterion, bands, default_dims, both = _TABLE_DEFS[args.table]
    if args.full_scale and args.table in (1, 2, 3, 4):
        default_dims = FULL_SCALE_DIMS
    dims = _parse_n_list(args.n_list, default_dims)
    rows = []
    for n in dims:
        model = chain_model(n)
        for (offset, count) in bands:
            crits = (Criterion.ENERGY, Criterion.DISPLACEMENT) if both \
                else (criterion,)
            for crit in crits:
                weights = (energy_weights(offset, count, model)
                           if crit is Criterion.ENERGY
                           else displacement_weights(offset, count, model))
                design = best_position(sweep_positions(model, weights))
                rows.append([str(args.table), str(n), str(offset), str(count),
                             crit.value, str(design.position_index),
                             _fmt6(design.position_p), _fmt12(design.v_opt),
                             _fmt12(design.trace_opt)])
    _write_csv(args.out,
               ["table", "n", "band_offset", "band_count", "criterion",
                "k_opt", "p_opt", "v_opt", "trace_opt"], rows)
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = verify_mod.run_all()
    failed = False
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        failed = failed or not res.passed
        print(f"{status} {res.name}: {res.detail}")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _cmd_asymptotics(args) -> int:
    if args.tail_sums:
        try:
            ks = [int(tok) for tok in str(args.tail_sums).split(",") if tok.strip()]
        except ValueError as exc:
            raise CliConfigError(f"bad tail-sum list: {exc}")
        rows = [[str(k), _fmt12(b2_tail_sum(k)), _fmt12(b3_tail_bound(k))]
                for k in ks]
        _write_csv(args.out, ["k", "b2_tail_sum", "b3_tail_bound"], rows)
        return EXIT_OK
    if args.p is None:
        raise CliConfigError("--p is required")
    if args.band_count is None:
        raise CliConfigError("--band-count is required")
    criterion = Criterion(args.criterion or "energy")
    exponent = 1 if criterion is Criterion.ENERGY else 3
    n_list = _parse_n_list(args.n_list, [2000, 4000, 8000])
    if len(n_list) < 3:
        raise CliConfigError("asymptotics needs at least 3 dimensions")
    offset = args.band_offset if args.band_offset is not None else 0
    fit = scaling_ratios(criterion, args.p, args.band_count, n_list, exponent,
                         band_offset=offset)
    rows = [[str(n), str(k), str(exponent), _fmt12(ratio)]
            for (n, k, ratio) in fit.rows]
    _write_csv(args.out, ["n", "k", "exponent", "ratio"], rows)
    stream = sys.stdout if args.out else sys.stderr
    print(f"max_rel_spread={fit.max_rel_spread:.6g} over largest half of n",
          file=stream)
    if offset == 0 and criterion is Criterion.ENERGY:
        print(f"analytic a-slope={energy_a_slope(args.p, args.band_count):.9g} "
              f"b1-slope={energy_b1_slope(args.p, args.band_count):.9g}",
              file=stream)
    return EXIT_OK


_DISPATCH = {
    "sweep": _cmd_sweep,
    "tables": _cmd_tables,
    "verify": _cmd_verify,
    "asymptotics": _cmd_asymptotics,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args)
        _apply_threads(getattr(args, "threads", None))
        return _DISPATCH[args.command](args)
    except (CliConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoAdmissiblePositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_ADMISSIBLE


if __name__ == "__main__":
    sys.exit(main())
