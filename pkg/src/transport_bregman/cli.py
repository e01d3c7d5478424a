"""Command line interface.

    transport-bregman gaussian-sweep --sigma-x 0.2:3:57 --sigma-y 0.2:3:57 --out sweep.csv
    transport-bregman compare --p gaussian:0:4 --q gaussian:0:1
    transport-bregman compare --config pair.json
    transport-bregman verify --seed 0 --out checks.csv

Sweep sigmas are standard deviations. Density specs are ``gaussian:MEAN:VAR``,
``uniform:A:B``, ``grid:PATH`` (two columns x, pdf) or ``samples:PATH`` (one
value per line).

The ``--config`` file is JSON::

    {
      "p": {"kind": "gaussian", "mean": [0, 0], "covariance": [[4, 1], [1, 2]]},
      "q": {"kind": "gaussian", "mean": [1, 0], "covariance": [[1, 0], [0, 1]]},
      "quadrature": {"nodes": 2048, "scheme": "gauss-legendre", "clip": 1e-6,
                     "tail_nodes": 32, "pair_nodes": 512, "diagonal_clip": 1e-4}
    }

Multivariate Gaussians are only compared with each other. Density kinds
take ``mean``/``variance`` (scalar) or ``mean``/``covariance`` for ``gaussian``, ``a``/``b`` for ``uniform`` and ``path`` for
``grid`` and ``samples``. Relative paths resolve against the config file's
directory. Flags given on the command line override the file.

Exit codes: 0 success, 1 verification failure, 2 usage or resolve error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import density as dens
from . import gaussian as gauss
from . import oracle
from . import transport1d as t1d
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DIVERGENCES = ("kl", "tkl", "tjs", "w2")
DEFAULT_RANGE = "0.2:3.0:57"
CLASSICAL_POINTS = 4001
GAUSSIAN_SPAN = 10.0  # standard deviations either side when tabulating


class UsageError(Exception):
    pass


# ---- specs ------------------------------------------------------------------


@dataclass(frozen=True)
class DensitySpec:
    kind: str
    params: dict

    @classmethod
    def parse(cls, text: str) -> "DensitySpec":
        kind, _, rest = text.partition(":")
        try:
            if kind == "gaussian":
                mean, var = rest.split(":")
                return cls.from_dict({"kind": kind, "mean": float(mean), "variance": float(var)})
            if kind == "uniform":
                a, b = rest.split(":")
                return cls.from_dict({"kind": kind, "a": float(a), "b": float(b)})
        except ValueError:
            raise UsageError(f"malformed density spec {text!r}") from None
        if kind in ("grid", "samples") and rest:
            return cls.from_dict({"kind": kind, "path": rest})
        raise UsageError(
            f"malformed density spec {text!r}; expected gaussian:MEAN:VAR, uniform:A:B, grid:PATH or samples:PATH"
        )

    @classmethod
    def from_dict(cls, data: dict, base: Path | None = None) -> "DensitySpec":
        data = dict(data)
        kind = data.pop("kind", None)
        required = {
            "gaussian": ({"mean", "variance"}, {"mean", "covariance"}),
            "uniform": ({"a", "b"},),
            "grid": ({"path"},),
            "samples": ({"path"},),
        }
        if kind not in required:
            raise UsageError(f"unknown density kind {kind!r}")
        if set(data) not in required[kind]:
            options = " or ".join(str(sorted(k)) for k in required[kind])
            raise UsageError(f"{kind} density needs keys {options}, got {sorted(data)}")
        if "path" in data and base is not None and not Path(data["path"]).is_absolute():
            data["path"] = str(base / data["path"])
        return cls(kind, data)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    def __str__(self):
        p = self.params
        if self.kind == "gaussian" and "variance" in p:
            return f"gaussian:{p['mean']:g}:{p['variance']:g}"
        if self.kind == "gaussian":
            return f"gaussian(d={len(np.atleast_1d(p['mean']))})"
        if self.kind == "uniform":
            return f"uniform:{p['a']:g}:{p['b']:g}"
        return f"{self.kind}:{p['path']}"

    @property
    def multivariate(self) -> bool:
        return self.kind == "gaussian" and "covariance" in self.params

    def gaussian(self) -> gauss.GaussianDensity:
        p = self.params
        if "covariance" in p:
            return gauss.GaussianDensity(p["mean"], p["covariance"])
        return gauss.GaussianDensity.scalar(p["variance"], p["mean"])


@dataclass
class Resolved:
    spec: DensitySpec
    density: dens.Density1D | None = None
    table: dens.GridDensity | None = None
    pdf: object = None  # analytic pdf, when one exists
    span: tuple[float, float] | None = None


def resolve(spec: DensitySpec) -> Resolved:
    p = spec.params
    try:
        if spec.multivariate:
            cov = np.atleast_2d(np.asarray(p["covariance"], dtype=float))
            if cov.shape == (1, 1):
                return resolve(DensitySpec("gaussian", {"mean": float(np.ravel(p["mean"])[0]), "variance": float(cov[0, 0])}))
            spec.gaussian()
            return Resolved(spec)
        if spec.kind == "gaussian":
            d = dens.gaussian1d(p["mean"], p["variance"])
            half = GAUSSIAN_SPAN * math.sqrt(p["variance"])
            return Resolved(spec, d, pdf=d.pdf, span=(p["mean"] - half, p["mean"] + half))
        if spec.kind == "uniform":
            d = dens.uniform1d(p["a"], p["b"])
            return Resolved(spec, d, pdf=d.pdf, span=(p["a"], p["b"]))
        if spec.kind == "grid":
            table = dens.load_grid(p["path"])
            return Resolved(spec, dens.from_grid(table), table=table, span=(table.grid[0], table.grid[-1]))
        return Resolved(spec, dens.from_samples(dens.load_samples(p["path"])))
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"invalid density {spec}: {exc}") from None


def parse_range(text: str) -> np.ndarray:
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise UsageError(f"malformed range {text!r}; expected min:max:steps") from None
    if not (lo > 0 and hi >= lo and steps >= 2 and math.isfinite(hi)):
        raise UsageError(f"invalid range {text!r}: need 0 < min <= max and steps >= 2")
    return np.linspace(lo, hi, steps)


def parse_divergences(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    unknown = sorted(set(names) - set(DIVERGENCES))
    if unknown or not names:
        raise UsageError(f"unknown divergences {unknown}; choose from {','.join(DIVERGENCES)}")
    return [d for d in DIVERGENCES if d in names]


def load_config(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or set(data) - {"p", "q", "quadrature"}:
        raise UsageError(f"config {path} must be an object with keys p, q, quadrature")
    base = Path(path).parent
    out = {}
    for key in ("p", "q"):
        if key in data:
            out[key] = DensitySpec.from_dict(data[key], base)
    if "quadrature" in data:
        out["quadrature"] = quadrature_from_dict(data["quadrature"])
    return out


def quadrature_from_dict(data: dict, base: QuadratureConfig = DEFAULT_CONFIG) -> QuadratureConfig:
    names = {f.name for f in dataclasses.fields(QuadratureConfig)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise UsageError(f"unknown quadrature keys {unknown}")
    try:
        return dataclasses.replace(base, **data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid quadrature settings: {exc}") from None


def quadrature_to_dict(cfg: QuadratureConfig) -> dict:
    return dataclasses.asdict(cfg)


# ---- gaussian-sweep -----------------------------------------------------------


def sweep_rows(sigma_x, sigma_y, divergences):
    fns = {
        "kl": gauss.classical_kl_gaussian,
        "tkl": gauss.transport_kl_gaussian,
        "tjs": gauss.transport_js_gaussian,
        "w2": gauss.wasserstein2_gaussian,
    }
    for sx in sigma_x:
        X = gauss.GaussianDensity.scalar(sx * sx)
        for sy in sigma_y:
            Y = gauss.GaussianDensity.scalar(sy * sy)
            yield (sx, sy, *(fns[d](X, Y) for d in divergences))


def format_sweep(sigma_x, sigma_y, divergences) -> str:
    lines = [",".join(["sigma_x", "sigma_y", *divergences])]
    for row in sweep_rows(sigma_x, sigma_y, divergences):
        lines.append(",".join(f"{v + 0.0:.9g}" for v in row))  # + 0.0 folds -0 into 0
    return "\n".join(lines) + "\n"


def cmd_gaussian_sweep(args) -> int:
    sx, sy = parse_range(args.sigma_x), parse_range(args.sigma_y)
    text = format_sweep(sx, sy, parse_divergences(args.divergences))
    if args.out == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from None
    print(f"wrote {len(sx) * len(sy)} rows to {args.out}")
    return EXIT_OK


# ---- compare ------------------------------------------------------------------


def _common_tables(p: Resolved, q: Resolved):
    """Both densities on one even grid spanning both supports."""
    lo = min(p.span[0], q.span[0])
    hi = max(p.span[1], q.span[1])
    x = np.linspace(lo, hi, CLASSICAL_POINTS)

    def values(r):
        return r.pdf(x) if r.pdf is not None else r.table.pdf_at(x)

    return dens.GridDensity(x, values(p)), dens.GridDensity(x, values(q))


def _try(fn):
    try:
        return fn(), None
    except (ValueError, ArithmeticError) as exc:
        return None, f"error: {exc}"


_CLOSED_FORMS = (
    ("w2", gauss.wasserstein2_gaussian),
    ("tkl", gauss.transport_kl_gaussian),
    ("tjs", gauss.transport_js_gaussian),
    ("kl", gauss.classical_kl_gaussian),
)


def compare_rows(p: Resolved, q: Resolved, cfg: QuadratureConfig):
    """(divergence, value or None, method or reason) for every row of the table."""
    if p.spec.multivariate or q.spec.multivariate:
        if p.spec.kind != "gaussian" or q.spec.kind != "gaussian":
            raise UsageError("multivariate densities can only be compared with another Gaussian")
        X, Y = p.spec.gaussian(), q.spec.gaussian()
        if X.dim != Y.dim:
            raise UsageError(f"dimension mismatch: {X.dim} vs {Y.dim}")
        rows = [(name, fn(X, Y), "closed form") for name, fn in _CLOSED_FORMS]
        rows.append(("js", None, "n/a (no closed form for multivariate Gaussians)"))
        rows.append(("cross_entropy", None, "n/a (q is not grid-backed)"))
        return rows

    rows = []
    quad = f"quadrature ({cfg.scheme}, {cfg.nodes} nodes, clip {cfg.clip:g})"
    for name, fn in (
        ("w2", t1d.wasserstein2_1d),
        ("tkl", t1d.transport_kl_1d),
        ("tjs", t1d.transport_js_1d),
    ):
        value, err = _try(lambda: fn(p.density, q.density, cfg))
        rows.append((name, value, err or quad))

    has_pdf = [r.pdf is not None or r.table is not None for r in (p, q)]
    if all(has_pdf):
        tables, err = _try(lambda: _common_tables(p, q))
        for name in ("kl", "js"):
            if err:
                rows.append((name, None, err))
                continue
            value, err2 = _try(lambda: t1d.classical_divergence_grid(name, *tables))
            rows.append((name, value, err2 or f"trapezoid on {CLASSICAL_POINTS}-point common grid"))
    else:
        which = " and ".join(k for k, ok in zip("pq", has_pdf) if not ok)
        for name in ("kl", "js"):
            rows.append((name, None, f"n/a (no pdf for samples: {which})"))

    if q.table is not None:
        value, err = _try(lambda: t1d.transport_cross_entropy_1d(p.density, q.table, cfg))
        rows.append(("cross_entropy", value, err or quad))
    else:
        rows.append(("cross_entropy", None, "n/a (q is not grid-backed)"))

    if p.spec.kind == "gaussian" and q.spec.kind == "gaussian":
        X, Y = p.spec.gaussian(), q.spec.gaussian()
        rows += [(name, fn(X, Y), "closed form") for name, fn in _CLOSED_FORMS]
    return rows


def format_compare(p: Resolved, q: Resolved, cfg: QuadratureConfig, rows) -> str:
    lines = [f"p = {p.spec}", f"q = {q.spec}", ""]
    lines.append(f"{'divergence':<14s} {'value':>16s}  method")
    for name, value, note in rows:
        shown = "n/a" if value is None else f"{value:.9g}"
        lines.append(f"{name:<14s} {shown:>16s}  {note}")
    return "\n".join(lines)


def cmd_compare(args) -> int:
    config = load_config(args.config) if args.config else {}
    p_spec = DensitySpec.parse(args.p) if args.p else config.get("p")
    q_spec = DensitySpec.parse(args.q) if args.q else config.get("q")
    if p_spec is None or q_spec is None:
        raise UsageError("compare needs --p and --q (or a config providing them)")
    cfg = config.get("quadrature", DEFAULT_CONFIG)
    overrides = {k: v for k, v in (("nodes", args.nodes), ("clip", args.clip)) if v is not None}
    cfg = quadrature_from_dict(overrides, cfg)
    p, q = resolve(p_spec), resolve(q_spec)
    print(format_compare(p, q, cfg, compare_rows(p, q, cfg)))
    return EXIT_OK


# ---- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    reports = oracle.run_property_suite(args.seed)
    print(oracle.format_reports(reports))
    if args.out:
        try:
            Path(args.out).write_text(oracle.reports_to_csv(reports))
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transport-bregman", description="Transport Bregman divergences.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("gaussian-sweep", help="closed-form divergences over a grid of 1-D Gaussian scales")
    sweep.add_argument("--sigma-x", default=DEFAULT_RANGE, metavar="MIN:MAX:STEPS")
    sweep.add_argument("--sigma-y", default=DEFAULT_RANGE, metavar="MIN:MAX:STEPS")
    sweep.add_argument("--divergences", default=",".join(DIVERGENCES))
    sweep.add_argument("--out", required=True, help="CSV path, or - for stdout")
    sweep.set_defaults(func=cmd_gaussian_sweep)

    compare = sub.add_parser("compare", help="every applicable divergence between two densities")
    compare.add_argument("--p", metavar="SPEC")
    compare.add_argument("--q", metavar="SPEC")
    compare.add_argument("--nodes", type=int)
    compare.add_argument("--clip", type=float)
    compare.add_argument("--config", metavar="JSON")
    compare.set_defaults(func=cmd_compare)

    verify = sub.add_parser("verify", help="run the property suite")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out", help="optional CSV dump of the reports")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
