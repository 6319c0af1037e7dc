"""Command-line front end.

    bosonladder model show --model SPEC
    bosonladder gfactors --model SPEC --k K --max-l L
    bosonladder evolve --model SPEC --tau 0.1,0.2 --initial 0 --tol 1e-12 --out csv
    bosonladder spectrum --model SPEC --tol 1e-12 --eigenvectors
    bosonladder stationary --model SPEC
    bosonladder verify --model SPEC --tau 0.3 --tol 1e-12

SPEC is inline JSON or a path to a JSON file. ``--out`` takes a format name
(csv, json) or a destination path. Exit codes: 0 ok, 1 usage, 2 computation
failure, 3 verify mismatch.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, evolution, gfactors, spectrum
from .model import ModelError, describe, from_spec
from .verify import run_checks

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_model(text: str):
    text = text.strip()
    if not text.startswith("{"):
        path = Path(text[1:] if text.startswith("@") else text)
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read model spec {path}: {exc}") from exc
    try:
        return from_spec(text)
    except ModelError as exc:
        raise UsageError(str(exc)) from exc


def _spec_hash(model) -> str:
    canon = json.dumps(model.to_spec(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _provenance(model, tol) -> str:
    tol_s = "n/a" if tol is None else repr(tol)
    return f"# bosonladder {__version__} model_sha256={_spec_hash(model)} tol={tol_s}"


def _fmt(x) -> str:
    return repr(float(x))


def _emit(args, model, tol, header, rows, extra=None):
    """Write rows as CSV (with provenance comment) or JSON."""
    fmt = args.format
    dest = args.out
    if dest in ("csv", "json"):
        fmt, dest = dest, None
    if fmt is None:
        fmt = "json" if dest and dest.endswith(".json") else "csv"
    buf = io.StringIO()
    if fmt == "csv":
        buf.write(_provenance(model, tol) + "\n")
        for key, val in (extra or {}).items():
            buf.write(f"# {key}={val}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        doc = {
            "tool": f"bosonladder {__version__}",
            "model_sha256": _spec_hash(model),
            "tol": tol,
            "model": model.to_spec(),
            **(extra or {}),
            "columns": list(header),
            "rows": [list(r) for r in rows],
        }
        buf.write(json.dumps(doc, indent=1) + "\n")
    text = buf.getvalue()
    if dest and dest != "-":
        try:
            Path(dest).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {dest}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _positive(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}")
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _tau_list(value: str) -> list:
    try:
        return [float(t) for t in value.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tau list {value!r}")


def _max_bits(args):
    return args.precision_bits or int(os.environ.get("BOSONLADDER_MAX_PRECISION_BITS", "16384"))


# -- commands ------------------------------------------------------------------


def cmd_model(args):
    model = _load_model(args.model)
    sys.stdout.write(json.dumps(describe(model)) + "\n")
    return EXIT_OK


def cmd_gfactors(args):
    model = _load_model(args.model)
    table = gfactors.g_recursive(model, args.k, args.max_l)
    rows = [(n, l, str(table[n, l])) for l in range(args.max_l + 1) for n in range(model.dim)]
    _emit(args, model, None, ("n", "l", "g"), rows)
    return EXIT_OK


def _initial_vector(spec: str, dim: int) -> np.ndarray:
    spec = spec.strip()
    if "," not in spec:
        try:
            k = int(spec)
        except ValueError:
            raise UsageError(f"--initial: expected an index or comma list, got {spec!r}")
        if not 0 <= k < dim:
            raise UsageError(f"--initial index {k} outside 0..{dim - 1}")
        v = np.zeros(dim, dtype=complex)
        v[k] = 1
        return v
    try:
        v = np.array([complex(x.strip().replace(" ", "")) for x in spec.split(",")])
    except ValueError:
        raise UsageError(f"--initial: cannot parse amplitudes {spec!r}")
    if v.shape != (dim,):
        raise UsageError(f"--initial needs {dim} amplitudes, got {v.size}")
    return v


def cmd_evolve(args):
    model = _load_model(args.model)
    a = _initial_vector(args.initial, model.dim)
    l1 = float(np.sum(np.abs(a)))
    rows = []
    for t in args.tau:
        tau = evolution.scale_tau(model, t) if args.scaled_tau else t
        P = evolution.propagator(model, tau, args.tol, _max_bits(args))
        out = P.entries @ a
        err = P.max_abs_error * l1 + model.dim * 2.3e-16 * l1
        for n, z in enumerate(out):
            rows.append((_fmt(t), n, _fmt(z.real), _fmt(z.imag), _fmt(abs(z) ** 2), _fmt(err)))
    _emit(args, model, args.tol, ("tau", "n", "re", "im", "prob", "err_bound"), rows)
    return EXIT_OK


def cmd_spectrum(args):
    model = _load_model(args.model)
    lams = spectrum.eigenvalues(model, args.tol)
    if not args.eigenvectors:
        rows = [(j, _fmt(lam)) for j, lam in enumerate(lams)]
        _emit(args, model, args.tol, ("j", "eigenvalue"), rows)
        return EXIT_OK
    rows, worst = [], 0.0
    for j, lam in enumerate(lams):
        ev = spectrum.eigenvector(model, lam, args.normalize)
        worst = max(worst, ev.residual)
        rows.extend((j, _fmt(lam), n, _fmt(p)) for n, p in enumerate(ev.psi))
    _emit(args, model, args.tol, ("j", "eigenvalue", "n", "psi"), rows,
          {"max_residual": _fmt(worst)})
    return EXIT_OK


def cmd_stationary(args):
    model = _load_model(args.model)
    st = spectrum.stationary_state(model, args.normalize)
    total = sum(st.squares) if args.normalize == "unit" else 1
    rows = [(p, 2 * p, _fmt(st.psi[2 * p]), _fmt(sq / total)) for p, sq in enumerate(st.squares)]
    _emit(args, model, None, ("p", "n", "psi", "psi_squared"), rows,
          {"residual": _fmt(st.residual)})
    return EXIT_OK


def cmd_verify(args):
    model = _load_model(args.model)
    tau = evolution.scale_tau(model, args.tau) if args.scaled_tau else args.tau
    results = run_checks(model, tau, args.tol, _max_bits(args))
    print(_provenance(model, args.tol))
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("ALL PASS" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bosonladder", description="Exact evolution and spectra of ladder models.")
    p.add_argument("--version", action="version", version=f"bosonladder {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tol=True):
        sp.add_argument("--model", required=True, help="inline JSON or path to a JSON spec")
        sp.add_argument("--out", help="csv, json, or an output path (default stdout csv)")
        sp.add_argument("--format", choices=("csv", "json"))
        if tol:
            sp.add_argument("--tol", type=_positive, default=1e-12)
        sp.add_argument("--precision-bits", type=int, default=None,
                        help="precision ceiling in bits (env BOSONLADDER_MAX_PRECISION_BITS)")

    m = sub.add_parser("model", help="inspect a model spec")
    m.add_argument("action", choices=("show",))
    m.add_argument("--model", required=True)
    m.set_defaults(func=cmd_model)

    g = sub.add_parser("gfactors", help="exact g-factor table")
    common(g, tol=False)
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--max-l", type=int, default=8)
    g.set_defaults(func=cmd_gfactors)

    e = sub.add_parser("evolve", help="evolve an initial state")
    common(e)
    e.add_argument("--tau", type=_tau_list, required=True, help="comma-separated times")
    e.add_argument("--initial", default="0", help="basis index or comma list of amplitudes")
    e.add_argument("--scaled-tau", action="store_true",
                   help="read --tau in units of 1/sqrt(max beta)")
    e.set_defaults(func=cmd_evolve)

    s = sub.add_parser("spectrum", help="eigenvalues (and eigenvectors)")
    common(s)
    s.add_argument("--eigenvectors", action="store_true")
    s.add_argument("--normalize", choices=("unit", "psi0"), default="unit")
    s.set_defaults(func=cmd_spectrum)

    st = sub.add_parser("stationary", help="zero-energy eigenstate amplitudes")
    common(st, tol=False)
    st.add_argument("--normalize", choices=("unit", "psi0"), default="psi0")
    st.set_defaults(func=cmd_stationary)

    v = sub.add_parser("verify", help="cross-check against the dense oracle")
    common(v)
    v.add_argument("--tau", type=float, default=0.5)
    v.add_argument("--scaled-tau", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bosonladder: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, ValueError, IndexError, OSError) as exc:
        print(f"bosonladder: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
