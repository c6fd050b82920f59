"""Command-line front end: ``decompose``, ``laplace``, ``invert`` and ``pairs``.

Exit status: 0 success, 1 numeric failure, 2 usage or validation error.
Numbers are written with 17 significant digits so doubles round-trip.

Bicomplex literals that start with a minus sign must follow ``--``
(``bicomplex-laplace decompose -- -1,0,0,0``) or be passed as ``--xi=-1,0,0,0``.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .bicomplex import is_singular, norm, parse, to_idempotent
from .errors import BicomplexLaplaceError, DomainError, InvalidArgumentError
from .forward import QuadratureConfig, laplace_grid
from .inversion import BromwichConfig, invert_grid
from .signals import CATALOG_IDS, ImageFunction, RationalFunction, SignalSpec, catalog_lookup

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "format": "csv",
    "method": "auto",
    "grid": "0.1:5:0.1",
    "omega": 1.0,
    "a": 0.0,
    "abscissa_delta": BromwichConfig.abscissa_offset,
    "half_height": BromwichConfig.half_height,
    "step": BromwichConfig.step,
    "tol": BromwichConfig.refine_tol,
    "max_refinements": BromwichConfig.max_refinements,
    "t_max": QuadratureConfig.t_max,
    "panels": QuadratureConfig.n_panels,
    "tail_tol": QuadratureConfig.tail_tol,
    "rule": QuadratureConfig.rule,
    "residue_tol": 1e-8,
    "bromwich_tol": 1e-3,
    "omegas": [1.0, 2.0],
    "a_values": [0.5, 1.0],
}


def fmt(v):
    return format(float(v) + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


def fmt_complex(z):
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{fmt(z.real)}{sign}{fmt(abs(z.imag))}i"


def parse_grid(text):
    """``"start:stop:step"`` -> inclusive, evenly spaced times."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise InvalidArgumentError(f"grid must look like START:STOP:STEP, got {text!r}") from exc
    if not all(math.isfinite(v) for v in (start, stop, step)) or step <= 0 or stop < start:
        raise InvalidArgumentError(f"bad grid {text!r}")
    if start <= 0:
        raise DomainError(f"grid start must be > 0 (inversion is defined for t > 0), got {start}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(n), 12)


class _Settings:
    """Flag > config file > default lookup."""

    def __init__(self, args, config):
        self._args = args
        self._config = config

    def __getattr__(self, name):
        v = getattr(self._args, name, None)
        if v is not None:
            return v
        if name in self._config:
            return self._config[name]
        return DEFAULTS.get(name)

    def explicit(self, name):
        """Value from the flags or config file, ignoring built-in defaults."""
        v = getattr(self._args, name, None)
        return v if v is not None else self._config.get(name)


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidArgumentError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _write(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _pair_params(s, pair_id):
    params = {"omega": float(s.omega), "a": float(s.a)}
    if pair_id == "unit_step":
        return {}
    if pair_id in ("sin", "cos"):
        return {"omega": params["omega"]}
    return params


# ------------------------------------------------------------------ commands


def cmd_decompose(s):
    x = parse(s.value)
    pair = to_idempotent(x)
    fields = [
        ("a0", fmt(x.a0)), ("a1", fmt(x.a1)), ("a2", fmt(x.a2)), ("a3", fmt(x.a3)),
        ("z1", fmt_complex(x.z1)), ("z2", fmt_complex(x.z2)),
        ("xi1", fmt_complex(pair.xi1)), ("xi2", fmt_complex(pair.xi2)),
        ("norm", fmt(norm(x))), ("singular", str(is_singular(x)).lower()),
    ]
    if s.format == "json":
        doc = {
            "coefficients": list(x.coeffs),
            "z1": [x.z1.real, x.z1.imag],
            "z2": [x.z2.real, x.z2.imag],
            "idempotent": json.loads(pair.to_json()),
            "norm": norm(x),
            "singular": is_singular(x),
        }
        _write(json.dumps(doc, indent=2) + "\n", s.out)
    else:
        _write(_csv(["field", "value"], fields), s.out)
    return EXIT_OK


def _signal(s):
    if s.signal and s.samples:
        raise InvalidArgumentError("give either --signal or --samples, not both")
    if s.signal:
        return catalog_lookup(s.signal, _pair_params(s, s.signal)).object
    if s.samples:
        if s.order_k is None:
            raise InvalidArgumentError("--samples needs --order-k")
        try:
            data = np.genfromtxt(s.samples, delimiter=",", names=True)
            t, f = data["t"], data["f"]
        except (OSError, ValueError, KeyError) as exc:
            raise InvalidArgumentError(f"cannot read samples {s.samples}: {exc}") from exc
        return SignalSpec.from_samples(t, f, float(s.order_k), label=s.samples)
    raise InvalidArgumentError("one of --signal or --samples is required")


def cmd_laplace(s):
    f = _signal(s)
    if not s.xi:
        raise InvalidArgumentError("at least one --xi is required")
    xis = [parse(v) for v in s.xi]
    cfg = QuadratureConfig(t_max=float(s.t_max), n_panels=int(s.panels),
                           tail_tol=float(s.tail_tol), rule=s.rule)
    results = laplace_grid(f, xis, cfg)
    if s.format == "json":
        doc = []
        for r in results:
            item = {"xi": list(r.xi.coeffs), "status": r.status}
            if r.ok:
                item["value"] = json.loads(to_idempotent(r.value).to_json())
                item["coefficients"] = list(r.value.coeffs)
            else:
                item["error"] = r.error
            doc.append(item)
        _write(json.dumps(doc, indent=2) + "\n", s.out)
    else:
        rows = []
        for r in results:
            vals = [fmt(v) for v in r.value.coeffs] if r.ok else ["nan"] * 4
            rows.append([fmt(v) for v in r.xi.coeffs] + vals + [r.status])
        header = ["xi_a0", "xi_a1", "xi_a2", "xi_a3", "a0", "a1", "a2", "a3", "status"]
        _write(_csv(header, rows), s.out)
    for r in results:
        if not r.ok:
            print(f"xi={r.xi}: {r.status}: {r.error}", file=sys.stderr)
    return EXIT_OK if all(r.ok for r in results) else EXIT_NUMERIC


def _read_rational(path):
    try:
        with open(path) as fh:
            return RationalFunction.from_json(fh.read())
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read {path}: {exc}") from exc


def _image(s):
    if s.pair and (s.rational_xi1 or s.rational_xi2):
        raise InvalidArgumentError("give either --pair or --rational-xi1/--rational-xi2")
    if s.pair:
        return catalog_lookup(s.pair, _pair_params(s, s.pair)).image_function()
    if s.rational_xi1:
        r1 = _read_rational(s.rational_xi1)
        r2 = _read_rational(s.rational_xi2) if s.rational_xi2 else r1
        return ImageFunction.from_rational(r1, r2, label="rational")
    raise InvalidArgumentError("one of --pair or --rational-xi1 is required")


def _bromwich_cfg(s, refine_tol=None):
    return BromwichConfig(
        abscissa_offset=float(s.abscissa_delta),
        half_height=float(s.half_height),
        step=float(s.step),
        refine_tol=float(s.tol if refine_tol is None else refine_tol),
        max_refinements=int(s.max_refinements),
    )


def cmd_invert(s):
    ts = parse_grid(s.grid)
    F = _image(s)
    results = invert_grid(F, ts, _bromwich_cfg(s), method=s.method)
    if s.format == "json":
        doc = [
            {"t": r.t, "f": r.value if r.ok else None, "reality_defect": r.reality_defect if r.ok else None,
             "refinements": r.refinements, **({"error": r.error} if r.error else {})}
            for r in results
        ]
        _write(json.dumps(doc, indent=2) + "\n", s.out)
    else:
        rows = [[fmt(r.t), fmt(r.value), fmt(r.reality_defect), str(r.refinements)] for r in results]
        _write(_csv(["t", "f", "reality_defect", "refinements"], rows), s.out)
    failed = [r for r in results if not r.ok]
    for r in failed:
        print(f"t={fmt(r.t)}: {r.error}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def pair_table(ids, omegas, a_values, ts, residue_tol, bromwich_tol, cfg=None):
    """Max-abs error of both engines against every closed-form pair instance."""
    rows = []
    for pid in ids:
        if pid == "unit_step":
            combos = [{}]
        elif pid in ("sin", "cos"):
            combos = [{"omega": w} for w in omegas]
        else:
            combos = [{"omega": w, "a": a} for w in omegas for a in a_values]
        for params in combos:
            entry = catalog_lookup(pid, params)
            F = entry.image_function()
            exact = entry.closed_form(ts)
            for method, tol in (("residue", residue_tol), ("bromwich", bromwich_tol)):
                results = invert_grid(F, ts, cfg, method=method)
                got = np.array([r.value if r.ok else np.nan for r in results])
                err = np.abs(got - exact)
                max_err = math.inf if np.any(np.isnan(err)) else float(err.max())
                rows.append({
                    "pair": pid,
                    "omega": params.get("omega", math.nan),
                    "a": params.get("a", math.nan),
                    "method": method,
                    "max_abs_error": max_err,
                    "tol": tol,
                    "status": "PASS" if max_err <= tol else "FAIL",
                })
    return rows


def cmd_pairs(s):
    ids = s.pairs or list(CATALOG_IDS)
    for pid in ids:
        if pid not in CATALOG_IDS:
            raise InvalidArgumentError(f"unknown pair id {pid!r}")
    both = s.explicit("tol")
    residue_tol = s.explicit("residue_tol") or both or DEFAULTS["residue_tol"]
    bromwich_tol = s.explicit("bromwich_tol") or both or DEFAULTS["bromwich_tol"]
    ts = parse_grid(s.grid)
    cfg = _bromwich_cfg(s, refine_tol=BromwichConfig.refine_tol)
    rows = pair_table(ids, [float(w) for w in s.omegas], [float(a) for a in s.a_values], ts,
                      float(residue_tol), float(bromwich_tol), cfg)
    if s.format == "json":
        _write(json.dumps(rows, indent=2) + "\n", s.out)
    else:
        header = ["pair", "omega", "a", "method", "max_abs_error", "tol", "status"]
        body = [
            [r["pair"], "" if math.isnan(r["omega"]) else fmt(r["omega"]),
             "" if math.isnan(r["a"]) else fmt(r["a"]), r["method"],
             fmt(r["max_abs_error"]), fmt(r["tol"]), r["status"]]
            for r in rows
        ]
        _write(_csv(header, body), s.out)
    return EXIT_OK if all(r["status"] == "PASS" for r in rows) else EXIT_NUMERIC


# ------------------------------------------------------------------- parser


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=["csv", "json"])
    shared.add_argument("--out", metavar="PATH")
    shared.add_argument("--config", metavar="PATH", help="JSON file of option defaults")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--omega", type=float)
    params.add_argument("--a", type=float)

    bromwich = argparse.ArgumentParser(add_help=False)
    bromwich.add_argument("--abscissa-delta", type=float, metavar="D")
    bromwich.add_argument("--half-height", type=float, metavar="Y")
    bromwich.add_argument("--step", type=float, metavar="H")
    bromwich.add_argument("--max-refinements", type=int)

    p = argparse.ArgumentParser(
        prog="bicomplex-laplace",
        description="Bicomplex numbers and bicomplex Laplace transform pairs.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", parents=[shared], help="idempotent decomposition of a0,a1,a2,a3")
    d.add_argument("value", metavar="A0,A1,A2,A3")

    lp = sub.add_parser("laplace", parents=[shared, params], help="forward transform at bicomplex points")
    lp.add_argument("--signal", choices=CATALOG_IDS)
    lp.add_argument("--samples", metavar="FILE", help="CSV with columns t,f")
    lp.add_argument("--order-k", type=float)
    lp.add_argument("--xi", action="append", metavar="A0,A1,A2,A3")
    lp.add_argument("--t-max", type=float)
    lp.add_argument("--panels", type=int)
    lp.add_argument("--tail-tol", type=float)
    lp.add_argument("--rule", choices=["adaptive-subdivision", "fixed-composite"])

    inv = sub.add_parser("invert", parents=[shared, params, bromwich], help="invert an image on a time grid")
    inv.add_argument("--pair", choices=CATALOG_IDS)
    inv.add_argument("--rational-xi1", metavar="FILE")
    inv.add_argument("--rational-xi2", metavar="FILE")
    inv.add_argument("--grid", metavar="S:E:H")
    inv.add_argument("--method", choices=["bromwich", "residue", "auto"])
    inv.add_argument("--tol", type=float, help="Bromwich refinement tolerance")

    pr = sub.add_parser("pairs", parents=[shared, bromwich], help="verify the table of transform pairs")
    pr.add_argument("--pairs", nargs="+", metavar="ID")
    pr.add_argument("--grid", metavar="S:E:H")
    pr.add_argument("--tol", type=float, help="pass threshold for both methods")
    pr.add_argument("--residue-tol", type=float)
    pr.add_argument("--bromwich-tol", type=float)
    pr.add_argument("--omegas", type=float, nargs="+")
    pr.add_argument("--a-values", type=float, nargs="+")
    return p


COMMANDS = {"decompose": cmd_decompose, "laplace": cmd_laplace, "invert": cmd_invert, "pairs": cmd_pairs}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _Settings(args, _load_config(args.config))
        return COMMANDS[args.command](settings)
    except (InvalidArgumentError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BicomplexLaplaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
