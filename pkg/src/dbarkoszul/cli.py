"""Command-line front end.

Every subcommand reads a flat ``key = value`` configuration (optional),
applies command-line overrides, runs, prints a summary and writes CSV
files to the output directory.  Exit codes: 0 when every certificate
passes, 1 when a certificate fails, 2 when an input violates a hypothesis.
"""

import argparse
import csv
import os
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

import numpy as np

from .approx import TARGETS, approximate, write_lambda_table
from .bergman import (acr_residual, commutator_norm, lp_density_residual,
                      symbol_from_name, toeplitz_matrix, write_curve_csv)
from .errors import CertificateError, HypothesisError
from .grid import build_domain
from .holomap import preset_map
from .koszul import corona_solve, relation_defect
from .suites import algebra_suite

__all__ = ["RunConfig", "load_config", "main", "EXIT_OK", "EXIT_CERTIFICATE", "EXIT_HYPOTHESIS"]

EXIT_OK = 0
EXIT_CERTIFICATE = 1
EXIT_HYPOTHESIS = 2

COMMANDS = ("verify-koszul", "corona", "approximate", "toeplitz", "density")


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by the subcommands; ``None`` means the command default."""

    domain: str = None
    radius: float = 1.0
    h: float = None
    f: str = None
    g: str = None
    eps: float = 0.1
    eps0: float = 1e-3
    degree: int = None
    interior_degree: int = None
    forms: int = 50
    seed: int = 0
    out: str = "out"
    contraction_sign: str = "alternating"

    def validate(self):
        for name in ("radius", "h", "eps", "eps0"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive, got {v}")
        for name in ("degree", "forms"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be at least 1, got {v}")
        if self.domain not in (None, "disc", "polydisc"):
            raise ValueError(f"domain must be disc or polydisc, got {self.domain!r}")
        if self.contraction_sign not in ("alternating", "none"):
            raise ValueError("contraction_sign must be 'alternating' or 'none'")
        return self


def _parse_number(text, kind):
    text = text.strip()
    if kind is int:
        return int(text)
    return float(Fraction(text)) if "/" in text else float(text)


_TYPES = {"radius": float, "h": float, "eps": float, "eps0": float, "degree": int,
          "interior_degree": int, "forms": int, "seed": int}


def _coerce(key, text):
    kind = _TYPES.get(key)
    if kind is None:
        return text.strip()
    try:
        return _parse_number(text, kind)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad value {text!r} for {key}") from None


def load_config(path=None, overrides=None):
    """Read ``key = value`` lines (``#`` starts a comment); unknown keys are errors."""
    known = {f.name for f in fields(RunConfig)}
    values = {}
    if path is not None:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, val = (t.strip() for t in line.split("=", 1))
                if key not in known:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = _coerce(key, val)
    for key, val in (overrides or {}).items():
        if key not in known:
            raise ValueError(f"unknown key {key!r}")
        if val is not None:
            values[key] = _coerce(key, val) if isinstance(val, str) else val
    return RunConfig(**values).validate()


# ------------------------------------------------------------------ helpers


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(v)
    return f"{float(v):.10g}"


def _summary(rows):
    for key, val in rows:
        print(f"{key}: {val if isinstance(val, str) else _fmt(val)}")


def _write_pairs(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["quantity", "value"])
        for key, val in rows:
            w.writerow([key, val if isinstance(val, str) else f"{float(val):.17g}"])


def _out(cfg, name):
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, name)


def _domain(cfg, default_kind, default_h):
    kind = cfg.domain or default_kind
    h = cfg.h if cfg.h is not None else default_h
    radii = cfg.radius if kind == "disc" else (cfg.radius, cfg.radius)
    return build_domain(kind, radii, h)


# ----------------------------------------------------------------- commands


def cmd_verify_koszul(cfg):
    """Algebra identity suite; exit 1 with the failing identities localised."""
    report = algebra_suite(seed=cfg.seed, forms=cfg.forms,
                           alternating=cfg.contraction_sign == "alternating")
    report.write_csv(_out(cfg, "koszul_checks.csv"))
    report.write_order_csv(_out(cfg, "commutation_order.csv"))
    rows = [("checks", len(report.rows)), ("failures", len(report.failures()))]
    rows += [(f"commutation_order_m{m}", o[2]) for m, o in sorted(report.orders.items())]
    _summary(rows)
    for r in report.failures():
        node = ", ".join(f"{complex(z):.4g}" for z in r.node)
        print(f"FAILED {r.identity} on {r.domain} m={r.m} degree=({r.r},{r.s}): "
              f"{r.worst:.3e} > {r.bound:.3e} at node ({node})")
    return EXIT_OK if report.passed else EXIT_CERTIFICATE


def cmd_corona(cfg):
    name = cfg.f or "z,1-z"
    f = preset_map(name)
    dom = _domain(cfg, "disc" if f.n == 1 else "polydisc", 1 / 64)
    res = corona_solve(f, dom, cfg.eps0)
    rows = [("f", name), ("h", dom.h), ("identity_residual", res.identity_residual),
            ("tolerance", res.tolerance)]
    rows += [(f"dbar_g{j + 1}", v) for j, v in enumerate(res.holomorphy_residuals)]
    rows += [(f"sup_g{j + 1}", v) for j, v in enumerate(res.sup_norms)]
    status = EXIT_OK
    if name == "z,1-z":
        q = relation_defect(res, dom)
        rows.append(("relation_defect", q))
        if q > 1e-6:
            status = EXIT_CERTIFICATE
    if name == "z-2":
        exact = 1.0 / (dom.z(0) - 2.0)
        err = float(np.abs(res.g[0] - exact)[res.valid].max())
        rows.append(("error_vs_1/(z-2)", err))
        if err > 1e-6:
            status = EXIT_CERTIFICATE
    _summary(rows)
    _write_pairs(_out(cfg, "corona_summary.csv"), rows)
    with open(_out(cfg, "corona_g.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node", *[f"re_z{k + 1}" for k in range(f.n)],
                    *[f"im_z{k + 1}" for k in range(f.n)],
                    *[p for j in range(f.m) for p in (f"re_g{j + 1}", f"im_g{j + 1}")]])
        pts = dom.points[res.valid]
        gv = [gj[res.valid] for gj in res.g]
        for i, p in enumerate(pts):
            w.writerow([i, *[f"{c.real:.17g}" for c in p], *[f"{c.imag:.17g}" for c in p],
                        *[f"{v:.17g}" for gj in gv for v in (gj[i].real, gj[i].imag)]])
    return status


def cmd_approximate(cfg):
    fname = cfg.f or "z"
    gname = cfg.g or "1-|z|^2"
    if gname not in TARGETS:
        raise ValueError(f"unknown target {gname!r}; choose from {sorted(TARGETS)}")
    f = preset_map(fname)
    dom = _domain(cfg, "disc", 1 / 64)
    approx = approximate(f, TARGETS[gname], cfg.eps, dom, certify=False)
    write_lambda_table(approx.net, _out(cfg, "lambda_net.csv"))
    rows = [("f", fname), ("g", gname), ("eps", cfg.eps), ("h", dom.h),
            ("centres", len(approx.net.solves)), ("rounds", approx.net.rounds),
            ("error_fine", approx.error), ("error_coarse", approx.coarse_error),
            ("model_term", approx.model_term), ("smoothing_term", approx.smoothing_term),
            ("max_M", float(np.max(approx.net.M))),
            ("passed", "yes" if approx.passed else "no")]
    _summary(rows)
    _write_pairs(_out(cfg, "approx_summary.csv"), rows)
    return EXIT_OK if approx.passed else EXIT_CERTIFICATE


def cmd_toeplitz(cfg):
    fname = cfg.f or "z"
    gname = cfg.g or "zbar"
    N = cfg.degree or 16
    f = preset_map(fname)
    symbol_from_name(gname)
    radii = (cfg.radius,) * f.n
    rows = []
    table = []
    for n_trunc in range(4, N + 1, 2) if N >= 4 else [N]:
        rep = acr_residual(f, gname, n_trunc, radii, cfg.interior_degree)
        for j, v in enumerate(rep.commutator_norms):
            table.append((n_trunc, rep.interior_degree, j + 1, v, rep.tg1_minus_g))
    rep = acr_residual(f, gname, N, radii, cfg.interior_degree)
    rows += [("f", fname), ("g", gname), ("N", N), ("interior_degree", rep.interior_degree)]
    rows += [(f"commutator_f{j + 1}", v) for j, v in enumerate(rep.commutator_norms)]
    rows += [("tg1_minus_g", rep.tg1_minus_g), ("g_norm", rep.g_norm)]
    if f.n == 1:
        Tz = toeplitz_matrix("z", N, radii)
        Tz2 = toeplitz_matrix("z^2", N, radii)
        rows.append(("commutator_z_z2", commutator_norm(Tz, Tz2, rep.interior_degree)))
        rows.append(("gram_residual", Tz.basis.gram_residual))
    _summary(rows)
    _write_pairs(_out(cfg, "toeplitz_summary.csv"), rows)
    write_curve_csv(_out(cfg, "toeplitz_commutators.csv"),
                    ["N", "interior_degree", "component", "commutator_norm", "tg1_minus_g"], table)
    return EXIT_OK


def cmd_density(cfg):
    fname = cfg.f or "z"
    f = preset_map(fname)
    gname = cfg.g or ("bump" if f.n == 1 else "z2bar(1+z1)+|z1|^2")
    field = symbol_from_name(gname)
    D = cfg.degree or (12 if f.n == 1 else 10)
    curve = lp_density_residual(f, field, D, (cfg.radius,) * f.n)
    rows = [("f", fname), ("test_field", gname), ("max_degree", D),
            ("field_norm", curve.field_norm),
            ("final_residual", float(curve.residuals[-1])),
            ("final_relative", float(curve.relative()[-1])),
            ("truncated_at", "none" if curve.truncated_at is None else str(curve.truncated_at))]
    _summary(rows)
    _write_pairs(_out(cfg, "density_summary.csv"), rows)
    write_curve_csv(_out(cfg, "density_curve.csv"), ["degree", "span_size", "residual", "relative"],
                    zip(curve.degrees, curve.span_sizes, curve.residuals, curve.relative()))
    return EXIT_OK


HANDLERS = {
    "verify-koszul": cmd_verify_koszul,
    "corona": cmd_corona,
    "approximate": cmd_approximate,
    "toeplitz": cmd_toeplitz,
    "density": cmd_density,
}


def build_parser():
    p = argparse.ArgumentParser(prog="dbarkoszul", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--h", help="grid spacing (a fraction such as 1/64 is accepted)")
    p.add_argument("--eps", help="target accuracy for approximate")
    p.add_argument("--degree", help="truncation degree (toeplitz) or maximal degree (density)")
    p.add_argument("--out", help="output directory for CSV files")
    p.add_argument("--seed", help="seed of the random generator")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any configuration key")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in ("h", "eps", "degree", "out", "seed")}
    for item in args.set:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return EXIT_HYPOTHESIS
        k, v = item.split("=", 1)
        overrides[k.strip()] = v
    try:
        cfg = load_config(args.config, overrides)
        return HANDLERS[args.command](cfg)
    except HypothesisError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except CertificateError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
