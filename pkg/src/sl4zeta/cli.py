"""Command-line front end: gen, zeta, count, verify, fit."""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import counting, spectrum, zeta
from .km_ring import Triv, VirtualRep, sigma_tilde, wedge_nbar

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(message)


def _sigma(name: str) -> VirtualRep:
    if name == "triv":
        return Triv
    if name == "tilde":
        return sigma_tilde()
    if name.startswith("wedge-nbar:"):
        try:
            return wedge_nbar(int(name.split(":", 1)[1]))
        except ValueError:
            pass
    raise UsageError(f"unknown sigma {name!r}; use triv, tilde or wedge-nbar:q with q in 0..4")


def _x_grid(spec: str) -> List[float]:
    """'x0:x1:n' (n log-spaced points) or a comma-separated list."""
    try:
        if ":" in spec:
            a, b, n = spec.split(":")
            x0, x1, count = float(a), float(b), int(n)
            if count < 1 or x0 < 2 or x1 < x0:
                raise ValueError
            return [float(v) for v in np.geomspace(x0, x1, count)] if count > 1 else [x0]
        xs = [float(v) for v in spec.split(",")]
        if any(v < 2 for v in xs):
            raise ValueError
        return xs
    except ValueError:
        raise UsageError(f"bad x grid {spec!r}; use x0:x1:n with 2 <= x0 <= x1, or a list x,y,...") from None


def _writable(path: str) -> Path:
    p = Path(path)
    if not p.parent.exists():
        raise UsageError(f"output directory {p.parent} does not exist")
    return p


def _readable(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"cannot read {p}: no such file")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sl4zeta", description=__doc__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a synthetic spectrum")
    g.add_argument("--xmax", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--constant", type=float, default=2.0)
    g.add_argument("--angles", default="weyl", help="weyl | uniform | fixed:p/q,p/q (units of pi)")
    g.add_argument("--out", required=True)

    z = sub.add_parser("zeta", help="evaluate log Z or log R on a grid")
    z.add_argument("--spectrum", required=True)
    z.add_argument("--sigma", default="triv")
    z.add_argument("--grid", required=True, help="re0:re1:step[,im]")
    z.add_argument("--lmax", type=float, default=40.0)
    z.add_argument("--mmax", type=int, default=10**6)
    z.add_argument("--kind", choices=("selberg", "ruelle"), default="selberg")
    z.add_argument("--out", required=True)
    z.add_argument("--check-factorization", action="store_true")

    c = sub.add_parser("count", help="tabulate counting functions")
    c.add_argument("--spectrum", required=True)
    c.add_argument("--window", default="full", help="full | half | t0,t1,p0,p1;... (units of pi)")
    c.add_argument("--grid", required=True, help="x0:x1:n (log-spaced) or x,y,...")
    c.add_argument("--out", required=True)

    sub.add_parser("verify", help="run the invariant suite")

    f = sub.add_parser("fit", help="fit a main term to a column of a count table")
    f.add_argument("--table", required=True)
    f.add_argument("--model", required=True, help="x | x/log x | li")
    f.add_argument("--column", default="psi")
    f.add_argument("--out", default=None)
    return ap


def _cmd_gen(a) -> int:
    out = _writable(a.out)
    sp = spectrum.generate_pnt_like(a.xmax, a.seed, a.constant, a.angles)
    spectrum.save(sp, out)
    print(f"wrote {len(sp)} classes to {out}")
    return EXIT_OK


def _cmd_zeta(a) -> int:
    sigma = _sigma(a.sigma)
    src, out = _readable(a.spectrum), _writable(a.out)
    try:
        grid = zeta.parse_grid(a.grid)
        cfg = zeta.TruncationConfig(a.lmax, a.mmax)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sp = spectrum.load(src)
    fn = zeta.log_selberg if a.kind == "selberg" else zeta.log_ruelle
    values = zeta.evaluate_grid(fn, sp, sigma, grid, cfg)
    residuals = zeta.evaluate_grid(zeta.factorization_residual, sp, sigma, grid, cfg) if a.check_factorization else None
    buf = io.StringIO()
    zeta.write_zeta_csv(buf, grid, values, residuals, "Z" if a.kind == "selberg" else "R")
    out.write_text(buf.getvalue(), encoding="utf-8")
    if residuals is not None:
        worst = max(abs(r) for r in residuals)
        print(f"max |factorization residual| = {worst:.3e}")
    print(f"wrote {len(grid)} rows to {out}")
    return EXIT_OK


def _cmd_count(a) -> int:
    src, out = _readable(a.spectrum), _writable(a.out)
    try:
        window = counting.Window.parse(a.window)
    except ValueError as exc:
        raise UsageError(f"invalid window spec: {exc}") from None
    xs = _x_grid(a.grid)
    sp = spectrum.load(src)
    table = counting.count_table(sp, xs, window)
    buf = io.StringIO()
    counting.write_count_table(buf, table)
    out.write_text(buf.getvalue(), encoding="utf-8")
    print(f"wrote {len(xs)} rows to {out}")
    return EXIT_OK


def _cmd_verify(a) -> int:
    from .verify import run_all

    results = run_all()
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def _cmd_fit(a) -> int:
    src = _readable(a.table)
    with src.open(encoding="utf-8") as fh:
        table = counting.read_count_table(fh)
    if a.column not in table:
        raise UsageError(f"column {a.column!r} not in table; available: {', '.join(table)}")
    try:
        res = counting.fit_main_term(table["x"], table[a.column], a.model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = res.to_json()
    if a.out:
        _writable(a.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


_COMMANDS = {"gen": _cmd_gen, "zeta": _cmd_zeta, "count": _cmd_count, "verify": _cmd_verify, "fit": _cmd_fit}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: gen, zeta, count, verify or fit")
        return _COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
