"""Command-line interface.

Every subcommand prints a JSON object (or CSV with ``--output csv``) on
standard output.  Exit status: 0 when every verdict holds and every
integral converged, 1 when a verdict is violated or a computation did not
converge, 2 for invalid parameters or flags.

Numeric parameter flags (``--N``, ``--s``, ``--theta``, ``--p``, ``--t``)
accept comma-separated lists; the Cartesian grid is then evaluated in
lexicographic order, optionally across ``--jobs`` worker processes, and the
results are listed in grid order.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, is_dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import specfun
from .fraclap import LineFunction, VtFamily, fraclap_line_q, fraclap_radial_q, fraclap_vt_q, limit_t_zero
from .kernels import b_constant, fs_constant, phi_fs, psi
from .params import FracParams, ParameterError
from .quad import DEFAULT_REL_TOL
from .sharpness import DEFAULT_SEARCH_BUDGET, SearchSpec, minimize
from .testfns import DomainBall, parse_profile
from .verify import (
    PohozaevSpec,
    check_cordoba,
    check_fs_hardy_1d,
    check_hardy_rellich,
    check_hardy_rellich_p1,
    check_pohozaev_id,
    check_remainder_1d,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SWEEP_KEYS = ("N", "s", "theta", "p", "t")
# a computed constant is accepted when it matches its closed form this well
CONSTANT_MATCH_TOL = 1e-8


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _plain(obj: Any) -> Any:
    if is_dataclass(obj) and not isinstance(obj, type):
        return _plain(obj.as_dict() if hasattr(obj, "as_dict") else asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def to_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flatten(record: dict) -> dict:
    """Scalar columns of one result: parameters first, then metrics."""
    row: dict = {}
    params = record.get("params") or {}
    if isinstance(params, dict):
        for k in SWEEP_KEYS:
            if k in params:
                row[k] = params[k]
    for k, v in record.items():
        if k == "params" or isinstance(v, (list, dict)):
            continue
        row[k] = v
    return row


def _explode(record: dict) -> list[dict]:
    """CSV rows of one result; tables and per-point lists give one row per entry."""
    base = _flatten(record)
    if isinstance(record.get("tables"), list):
        out = []
        for tab in record["tables"]:
            head = dict(base, **{k: v for k, v in tab.items() if not isinstance(v, (list, dict))})
            out.extend(dict(head, **row) for row in tab.get("rows", []))
        return out
    if isinstance(record.get("rows"), list):
        return [dict(base, **row) for row in record["rows"]]
    lists = {k: v for k, v in record.items() if isinstance(v, list) and v and not isinstance(v[0], (list, dict))}
    lengths = {len(v) for v in lists.values()}
    if len(lengths) == 1:
        n = lengths.pop()
        return [dict(base, **{k: v[i] for k, v in lists.items()}) for i in range(n)]
    return [base]


def to_csv(records: Sequence[dict]) -> str:
    rows = [row for r in records for row in _explode(_plain(r))]
    header: list[str] = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_fmt_float(v) if isinstance(v, float) else ("" if v is None else v) for v in (r.get(k) for k in header)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# handlers: each takes a flat dict of scalar options and returns (record, ok)
# ---------------------------------------------------------------------------


def _fp(o: dict, theta_default: float = 0.0, p_default: float = 2.0) -> FracParams:
    theta = o.get("theta")
    p = o.get("p")
    return FracParams(o["N"], o["s"], theta_default if theta is None else theta, p_default if p is None else p)


def _need(o: dict, *keys: str) -> None:
    missing = [k for k in keys if o.get(k) is None]
    if missing:
        raise ParameterError("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _constant_record(kind: str, params: dict, value: float, closed: Optional[float] = None) -> dict:
    rel = specfun.relative_difference(value, closed) if closed is not None else None
    return {"kind": kind, "params": params, "value": value, "closed_form": closed, "rel_diff": rel, "converged": True}


def h_constant(o: dict):
    which = o["which"]
    if which == "b":
        _need(o, "N", "s", "theta")
        params = _fp(o)
        params.require_bounded()
        rep = b_constant(params, o["rel_tol"])
        ok = rep.converged and (rep.rel_diff is None or rep.rel_diff <= CONSTANT_MATCH_TOL)
        return rep.as_dict(), ok
    if which == "lambda":
        _need(o, "N", "s", "theta")
        v = specfun.lambda_closed(o["N"], o["s"], o["theta"])
        return _constant_record("lambda_closed", {"N": o["N"], "s": o["s"], "theta": o["theta"]}, v), True
    if which == "herbst":
        _need(o, "N", "s", "p")
        v = specfun.herbst_constant(o["N"], o["s"], o["p"])
        return _constant_record("herbst", {"N": o["N"], "s": o["s"], "p": o["p"]}, v), True
    if which == "fs":
        _need(o, "N", "s")
        p = 2.0 if o.get("p") is None else o["p"]
        rep = fs_constant(o["N"], o["s"], p, o["rel_tol"])
        ok = rep.converged and (rep.rel_diff is None or rep.rel_diff <= 1e-6)
        return rep.as_dict(), ok
    if which == "classical":
        _need(o, "N", "p")
        theta = o.get("theta") or 0.0
        v = specfun.classical_rellich_constant(o["N"], o["p"], theta)
        return _constant_record("classical_rellich", {"N": o["N"], "p": o["p"], "theta": theta}, v), True
    if which == "s1limit":
        _need(o, "N", "theta")
        v = specfun.b_limit_s1(o["N"], o["theta"])
        return _constant_record("s1_limit", {"N": o["N"], "theta": o["theta"]}, v), True
    raise ParameterError(f"unknown constant {which!r}")


def _radii(o: dict, key: str = "r") -> list[float]:
    vals = o.get(key)
    if not vals:
        raise ParameterError(f"--{key} needs at least one value")
    return [float(v) for v in vals]


def h_psi(o: dict):
    _need(o, "N", "s")
    rs = _radii(o)
    vals = psi(o["N"], o["s"], np.array(rs), extended=o.get("extended", False))
    return {"name": "psi", "params": {"N": o["N"], "s": o["s"]}, "r": rs, "values": np.atleast_1d(vals).tolist()}, True


def h_phi(o: dict):
    _need(o, "N", "s", "p")
    rs = _radii(o)
    vals = phi_fs(o["N"], o["s"], o["p"], np.array(rs), extended=o.get("extended", False))
    return {"name": "phi_fs", "params": {"N": o["N"], "s": o["s"], "p": o["p"]}, "r": rs, "values": np.atleast_1d(vals).tolist()}, True


def _profile(o: dict):
    if not o.get("profile"):
        raise ParameterError("--profile is required")
    return parse_profile(o["profile"])


def h_fraclap(o: dict):
    which = o["which"]
    tol = o["rel_tol"]
    if which == "vt":
        _need(o, "N", "s", "theta", "t")
        fam = VtFamily(_fp(o), o["t"])
        xs = _radii(o, "x")
        res = [fraclap_vt_q(fam, x, tol) for x in xs]
        params = {"N": o["N"], "s": o["s"], "theta": o["theta"], "t": o["t"]}
        coord = ("x", xs)
    elif which == "radial":
        _need(o, "N", "s")
        prof = _profile(o)
        xs = _radii(o, "rho")
        res = [fraclap_radial_q(prof, o["N"], o["s"], x, tol) for x in xs]
        params = {"N": o["N"], "s": o["s"]}
        coord = ("rho", xs)
    elif which == "line":
        _need(o, "s")
        f = LineFunction.from_radial(_profile(o))
        xs = _radii(o, "x")
        res = [fraclap_line_q(f, o["s"], x, tol) for x in xs]
        params = {"N": 1, "s": o["s"]}
        coord = ("x", xs)
    else:
        raise ParameterError(f"unknown fraclap mode {which!r}")
    rec = {
        "name": f"fraclap_{which}",
        "params": params,
        coord[0]: coord[1],
        "values": [r.value for r in res],
        "abs_err": [r.abs_err for r in res],
        "evals": sum(r.evals for r in res),
        "converged": all(r.converged for r in res),
    }
    if o.get("profile"):
        rec["profile"] = o["profile"]
    return rec, rec["converged"]


def h_limit(o: dict):
    which = o["which"]
    if which == "t-zero":
        _need(o, "N", "s", "theta")
        xs = _radii(o, "x")
        ts = [o["t0"] * 2.0 ** (-k) for k in range(o["levels"])]
        tables = []
        ok = True
        for x in xs:
            tab = limit_t_zero(_fp(o), x, ts, o["rel_tol"])
            ok = ok and tab["non_increasing"]
            tables.append(
                {
                    "x": x,
                    "limit": tab["limit"],
                    "non_increasing": tab["non_increasing"],
                    "strictly_decreasing": tab["strictly_decreasing"],
                    "rows": [asdict(r) for r in tab["rows"]],
                }
            )
        return {"name": "limit_t_zero", "params": {"N": o["N"], "s": o["s"], "theta": o["theta"]}, "tables": tables}, ok
    if which == "s-one":
        _need(o, "N", "theta")
        svals = o.get("s_values") or [0.9, 0.95, 0.975, 0.9875]
        rows = specfun.s_one_table(o["N"], o["theta"], svals)
        return {"name": "limit_s_one", "params": {"N": o["N"], "theta": o["theta"]}, "rows": [asdict(r) for r in rows]}, True
    raise ParameterError(f"unknown limit {which!r}")


def _domain(o: dict) -> DomainBall:
    return DomainBall(o.get("domain_radius") or 1.0)


def h_verify(o: dict):
    which = o["which"]
    tol = o["rel_tol"]
    if which == "hardy-rellich":
        _need(o, "N", "s", "theta", "p")
        rep = check_hardy_rellich(_fp(o), _profile(o), _domain(o), tol)
    elif which == "p1":
        _need(o, "N", "s", "theta")
        rep = check_hardy_rellich_p1(_fp(o, p_default=1.0), _profile(o), _domain(o), tol)
    elif which == "pohozaev":
        _need(o, "N", "s", "theta", "p", "t")
        spec = PohozaevSpec(
            operator_normalization=o.get("normalization") or "factor_2",
            integration_domain_for_B="omega" if o.get("domain") == "omega" else "full_space_truncated",
        )
        rep = check_pohozaev_id(_fp(o), _profile(o), o["t"], spec, _domain(o), tol)
    elif which == "cordoba":
        _need(o, "N", "s", "p", "t")
        prof = _profile(o)
        radii = o.get("radii") or np.linspace(0.0, prof.support, o.get("n_radii") or 50, endpoint=False).tolist()
        rep = check_cordoba(prof, o["N"], o["s"], o["t"], o["p"], radii, tol)
    elif which == "fs-hardy-1d":
        _need(o, "s", "p")
        rep = check_fs_hardy_1d(_profile(o), o["s"], o["p"], tol)
    elif which == "remainder-1d":
        _need(o, "s")
        rep = check_remainder_1d(o["s"], _profile(o), tol)
    else:
        raise ParameterError(f"unknown check {which!r}")
    rec = rep.as_dict()
    if o.get("profile"):
        rec["profile"] = o["profile"]
    return rec, rep.ok


def _parse_bounds(items: Optional[Sequence[str]], family: str) -> tuple:
    if not items:
        return ((2.0, 8.0),) if family == "bump_beta" else ((-1.0, 1.0),)
    out = []
    for item in items:
        try:
            lo, hi = (float(v) for v in item.split(":"))
        except ValueError as exc:
            raise ParameterError(f"bounds must look like lo:hi, got {item!r}") from exc
        out.append((lo, hi))
    return tuple(out)


def h_sharpness(o: dict):
    _need(o, "N", "s", "theta", "p")
    family = o.get("family") or "bump_beta"
    spec_kwargs = dict(
        family=family,
        bounds=_parse_bounds(o.get("bounds"), family),
        budget=o["budget"],
        tolerance=o.get("tolerance") or 1e-3,
        R=o.get("R") or 1.0,
    )
    if o.get("betas"):
        spec_kwargs["betas"] = tuple(o["betas"])
    spec = SearchSpec(**spec_kwargs)
    res = minimize(_fp(o), spec, _domain(o), final_tol=o["rel_tol"])
    if o.get("trace"):
        with open(o["trace"], "w", encoding="utf-8") as fh:
            fh.write(res.trace_csv())
    rec = res.as_dict()
    rec["bracket_holds"] = res.best_Q >= res.lower_bound - res.best_Q_abs_err
    return rec, rec["bracket_holds"] and rec["trace_monotone"]


HANDLERS: dict[str, Callable] = {
    "constant": h_constant,
    "psi": h_psi,
    "phi": h_phi,
    "fraclap": h_fraclap,
    "limit": h_limit,
    "verify": h_verify,
    "sharpness": h_sharpness,
}


def _run_point(command: str, options: dict):
    """One grid point; module-level so worker processes can import it."""
    try:
        record, ok = HANDLERS[command](options)
        return {"record": record, "ok": bool(ok), "error": None}
    except ParameterError as exc:
        return {"record": None, "ok": False, "error": str(exc)}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        val = float(raw)
    except ValueError as exc:
        raise ParameterError(f"environment variable {name}={raw!r} is not a number") from exc
    if not (val > 0.0 and math.isfinite(val)):
        raise ParameterError(f"environment variable {name} must be positive")
    return val


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, *, sweep: bool = True) -> None:
    p.add_argument("--N", type=_ints, help="dimension (comma list to sweep)")
    p.add_argument("--s", type=_floats, help="fractional order in (0, 1)")
    p.add_argument("--theta", type=_floats, help="weight exponent")
    p.add_argument("--p", type=_floats, help="power")
    p.add_argument("--t", type=_floats, help="regularization parameter")
    p.add_argument("--rel-tol", type=float, default=None, help="relative tolerance (env FRACHARDY_TOL, default 1e-10)")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frachardy", description="Constants, operators and checks for fractional Hardy-Rellich inequalities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constant", help="closed-form and quadrature constants")
    c.add_argument("which", choices=("b", "lambda", "herbst", "fs", "classical", "s1limit"))
    _common(c)

    for name in ("psi", "phi"):
        k = sub.add_parser(name, help=f"{name} kernel values")
        _common(k)
        k.add_argument("--r", type=_floats, required=True, help="radii")
        k.add_argument("--extended", action="store_true", help="accept radii above 1")

    f = sub.add_parser("fraclap", help="fractional Laplacian evaluations")
    f.add_argument("which", choices=("vt", "radial", "line"))
    _common(f)
    f.add_argument("--profile", help="profile specification, e.g. family=bump,beta=2,R=1")
    f.add_argument("--x", type=_floats, help="evaluation points (vt, line)")
    f.add_argument("--rho", type=_floats, help="radii (radial)")

    lim = sub.add_parser("limit", help="limit tables")
    lim.add_argument("which", choices=("t-zero", "s-one"))
    _common(lim)
    lim.add_argument("--x", type=_floats, default=[0.7])
    lim.add_argument("--t0", type=float, default=0.2)
    lim.add_argument("--levels", type=int, default=7)
    lim.add_argument("--s-values", type=_floats, default=None)

    v = sub.add_parser("verify", help="inequality and identity checks")
    v.add_argument("which", choices=("hardy-rellich", "p1", "pohozaev", "cordoba", "fs-hardy-1d", "remainder-1d"))
    _common(v)
    v.add_argument("--profile", help="profile specification")
    v.add_argument("--domain-radius", type=float, default=1.0)
    v.add_argument("--domain", choices=("full", "omega"), default="full", help="integration domain for the identity")
    v.add_argument("--normalization", choices=("factor_1", "factor_2"), default="factor_2")
    v.add_argument("--radii", type=_floats, default=None)
    v.add_argument("--n-radii", type=int, default=50)

    sh = sub.add_parser("sharpness", help="Rayleigh-quotient search")
    _common(sh)
    sh.add_argument("--family", choices=("bump_beta", "combo"), default="bump_beta")
    sh.add_argument("--bounds", action="append", help="lo:hi per parameter (repeat)")
    sh.add_argument("--budget", type=int, default=None, help="max evaluations (env FRACHARDY_BUDGET, default 500)")
    sh.add_argument("--tolerance", type=float, default=1e-3)
    sh.add_argument("--R", type=float, default=1.0)
    sh.add_argument("--betas", type=_floats, default=None)
    sh.add_argument("--domain-radius", type=float, default=1.0)
    sh.add_argument("--trace", help="write the search trace CSV to this file")
    return parser


def _grid(ns: argparse.Namespace) -> list[dict]:
    base = {k: v for k, v in vars(ns).items() if k not in SWEEP_KEYS}
    axes = [(k, getattr(ns, k)) for k in SWEEP_KEYS]
    lists = [(k, v if v is not None else [None]) for k, v in axes]
    points = []
    for combo_vals in itertools.product(*(v for _, v in lists)):
        o = dict(base)
        o.update({k: val for (k, _), val in zip(lists, combo_vals)})
        points.append(o)
    return points


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    try:
        rel_tol = ns.rel_tol if ns.rel_tol is not None else _env_float("FRACHARDY_TOL", DEFAULT_REL_TOL)
        if not (rel_tol > 0.0 and math.isfinite(rel_tol)):
            raise ParameterError("--rel-tol must be positive")
        if getattr(ns, "budget", None) is None and ns.command == "sharpness":
            ns.budget = int(_env_float("FRACHARDY_BUDGET", DEFAULT_SEARCH_BUDGET))
        if ns.jobs < 1:
            raise ParameterError("--jobs must be at least 1")
    except ParameterError as exc:
        print(f"frachardy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ns.rel_tol = rel_tol
    points = _grid(ns)
    if ns.jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            outcomes = list(pool.map(_run_point, [ns.command] * len(points), points))
    else:
        outcomes = [_run_point(ns.command, o) for o in points]
    errors = [o["error"] for o in outcomes if o["error"] is not None]
    if errors:
        for e in dict.fromkeys(errors):
            print(f"frachardy: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    records = [o["record"] for o in outcomes]
    if ns.output == "csv":
        stdout.write(to_csv(records))
    else:
        stdout.write(to_json(records[0] if len(records) == 1 else records) + "\n")
    return EXIT_OK if all(o["ok"] for o in outcomes) else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
