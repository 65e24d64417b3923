"""Command-line front end: JSON config in, JSON and CSV artifacts out.

Exit codes: 0 success, 1 computation rejected, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .bandgap import SweepConfig, Thresholds, bandgap_report, dispersion_sweep
from .bnf import EffectiveParams, effective_params, quartic_coeffs
from .config import RunConfig, load_config
from .errors import ConfigError, Rejection
from .freq import FrequencyPair, amplitudes_to_chart, frequencies_nonresonant, frequencies_resonant
from .modal import HoneycombParams, OscillatorSystem, diagonalize, honeycomb_system
from .portrait import classify, g_boundary, gneg_boundary, gtilde_boundary, level_curve, portrait_summary
from .quartic import roots_x
from .verify import DRIFT_BOUND, integrate_exact, mean_phase_rates, measure_period, modal_spectrum

TWO_PI = 2.0 * math.pi
EXIT_OK, EXIT_REJECTED, EXIT_CONFIG = 0, 1, 2


@dataclass
class Result:
    payload: dict
    tables: dict = field(default_factory=dict)


# ---------------------------------------------------------------- shared pipeline pieces

def _system(cfg: RunConfig) -> OscillatorSystem:
    if cfg.system is None:
        raise ConfigError("this command needs a 'system' section")
    if cfg.system.honeycomb is not None:
        h = cfg.system.honeycomb
        return honeycomb_system(HoneycombParams(h.Mtilde, h.Ktilde, h.k1, h.k2, h.D12, h.D22, h.D66,
                                                h.N3, h.mass_model))
    g = cfg.system.generic
    (m11, m12), (_, m22) = g.mass
    return OscillatorSystem(m11, m12, m22, g.stiffness[0], g.stiffness[1], g.M3, g.N3)


def _action(cfg: RunConfig, m) -> float:
    if cfg.chart is not None:
        return cfg.chart.I2
    if cfg.amplitudes is not None:
        a = cfg.amplitudes
        I2 = 0.5 * (m.omega_minus * a.a_minus ** 2 + 3.0 * m.omega_plus * a.a_plus ** 2)
        if I2 > 0:
            return I2
        raise Rejection("bad_amplitudes", "both amplitudes are zero")
    raise ConfigError("give 'amplitudes' or 'chart' to fix the action I2")


def _params(cfg: RunConfig) -> EffectiveParams:
    if cfg.portrait.a1 is not None:
        return EffectiveParams.direct(cfg.portrait.a1, cfg.portrait.a2)
    s = _system(cfg)
    m = diagonalize(s)
    q = quartic_coeffs(m, s.cubic_v, s.cubic_y)
    return effective_params(q, m, _action(cfg, m))


def _energies(cfg: RunConfig) -> list:
    es = list(cfg.portrait.energies)
    if cfg.chart is not None:
        es.append(cfg.chart.E)
    if not es:
        raise ConfigError("give 'portrait.energies' or 'chart.E'")
    return es


def _thresholds(cfg: RunConfig) -> Thresholds:
    t = cfg.thresholds
    return Thresholds(t.eps, t.C1, t.C2)


def _frequencies(cfg: RunConfig):
    """(modal data, effective params or None, FrequencyPair) for the configured point."""
    s = _system(cfg)
    m = diagonalize(s)
    q = quartic_coeffs(m, s.cubic_v, s.cubic_y)
    t = cfg.thresholds
    exact = abs(m.sigma) < t.tau_sigma * m.omega_minus
    if cfg.chart is None:
        if cfg.amplitudes is None:
            raise ConfigError("give 'amplitudes' or 'chart'")
        am, ap = cfg.amplitudes.a_minus, cfg.amplitudes.a_plus
        if am == 0.0 and ap == 0.0:
            return m, None, FrequencyPair(m.omega_minus, m.omega_plus, "linear", (0.0, 0.0))
    regime = "resonant" if exact else _thresholds(cfg).regime(m.sigma)
    if regime == "rejected":
        raise Rejection("eps_above_C2", f"eps={t.eps!r} > C2={t.C2!r}")
    if q.degenerate:
        # no resonant monomial: the diagonal normal form is exact
        if cfg.chart is not None:
            raise Rejection("degenerate_coupling", "chart entry needs a resonant coupling")
        fp = frequencies_nonresonant(q, m, am, ap)
        label = "resonant_exact" if exact else fp.regime
        return m, None, FrequencyPair(fp.w_minus_nlr, fp.w_plus_nlr, label, ("decoupled", am, ap))
    if regime == "nonresonant" and cfg.chart is None:
        return m, None, frequencies_nonresonant(q, m, am, ap)
    if cfg.chart is not None:
        p = effective_params(q, m, cfg.chart.I2)
        summ = portrait_summary(p, t.tau_zone)
        E = cfg.chart.E
        summ.check_energy(E, t.tau_E)
        if cfg.chart.region is not None:
            reg = summ.region(cfg.chart.region)
        else:
            regs = summ.regions_at(E)
            if len(regs) != 1:
                raise Rejection("ambiguous_region", f"{[r.name for r in regs]} at E={E!r}; set chart.region")
            reg = regs[0]
    else:
        E, _, reg, p, summ = amplitudes_to_chart(am, ap, q, m)
        summ.check_energy(E, t.tau_E)
    fp = frequencies_resonant(p, E, reg, m.omega_minus, summ, area_term=cfg.area_term, tau_sigma=t.tau_sigma)
    return m, p, fp


# ---------------------------------------------------------------- commands

def cmd_decompose(cfg: RunConfig, args) -> Result:
    m = diagonalize(_system(cfg))
    return Result({"omega_minus": m.omega_minus, "omega_plus": m.omega_plus, "sigma": m.sigma,
                   "phi": m.phi.tolist()})


def cmd_coeffs(cfg: RunConfig, args) -> Result:
    s = _system(cfg)
    m = diagonalize(s)
    q = quartic_coeffs(m, s.cubic_v, s.cubic_y)
    out = {"g2020": q.g2020, "g1111": q.g1111, "g0202": q.g0202, "f31": q.f31, "chi": q.chi,
           "sigma": q.sigma, "f": [[i, j, c] for (i, j), c in sorted(q.f.items())]}
    if cfg.amplitudes is not None or cfg.chart is not None:
        p = effective_params(q, m, _action(cfg, m))
        out["effective"] = {"a0": p.a0, "a1": p.a1, "a2": p.a2, "J2": p.J2, "sign": p.sign}
    return Result(out)


def cmd_classify(cfg: RunConfig, args) -> Result:
    p = _params(cfg)
    z = classify(p.a1, p.a2, cfg.thresholds.tau_zone)
    return Result({"a1": p.a1, "a2": p.a2, "zone": z.tag, "degenerate": z.degenerate,
                   "g": g_boundary(p.a1), "g_neg": gneg_boundary(p.a1), "g_tilde": gtilde_boundary(p.a1)})


def cmd_portrait(cfg: RunConfig, args) -> Result:
    p = _params(cfg)
    summ = portrait_summary(p, cfg.thresholds.tau_zone)
    out = {
        "a1": p.a1, "a2": p.a2, "zone": summ.zone.tag, "degenerate": summ.zone.degenerate,
        "e_max": summ.e_max, "e_min": summ.e_min, "e_sad": summ.e_sad, "a_one": summ.a_one,
        "criticals": [{"x": c.x, "psi": c.psi, "energy": c.energy, "kind": c.kind} for c in summ.criticals],
        "regions": [{"name": r.name, "e_lo": r.e_lo, "e_hi": r.e_hi, "tags": list(r.tags), "winding": r.winding}
                    for r in summ.regions],
        "curves": [],
    }
    tables = {}
    if summ.zone.degenerate:
        out["curves_skipped"] = "degenerate zone"
        return Result(out, tables)
    n = args.grid or cfg.portrait.points
    for i, E in enumerate(cfg.portrait.energies):
        for reg in summ.regions_at(E):
            try:
                lc = level_curve(p, E, reg, n, summ)
            except Rejection as exc:
                out["curves"].append({"E": E, "region": reg.name, "skipped": exc.reason})
                continue
            name = f"curve_{i}_{reg.name}"
            tables[name] = [{"x": float(x), "psi": float(v)} for x, v in zip(lc.x, lc.psi)]
            out["curves"].append({"E": E, "region": reg.name, "table": name, "winding": reg.winding})
    return Result(out, tables)


def cmd_roots(cfg: RunConfig, args) -> Result:
    p = _params(cfg)
    rows, per = [], []
    for E in _energies(cfg):
        r = roots_x(p.a1, p.a2, E)
        per.append({"E": E, "xs": list(r.xs), "lines": list(r.line_of), "count": r.count, "source": r.source,
                    "near_degenerate": r.near_degenerate})
        rows += [{"E": E, "index": j, "x": x, "line": ln} for j, (x, ln) in enumerate(zip(r.xs, r.line_of))]
    return Result({"a1": p.a1, "a2": p.a2, "roots": per}, {"roots": rows})


def cmd_freqs(cfg: RunConfig, args) -> Result:
    m, _, fp = _frequencies(cfg)
    out = fp.as_dict()
    out.update({"omega_minus": m.omega_minus, "omega_plus": m.omega_plus, "sigma": m.sigma,
                "area_term": cfg.area_term})
    return Result(out)


def _sweep_config(cfg: RunConfig, args) -> tuple[SweepConfig, int]:
    if cfg.sweep is None:
        raise ConfigError("this command needs a 'sweep' section")
    sw = cfg.sweep
    sc = SweepConfig(sw.Mtilde, sw.Ktilde, sw.N3, sw.a_minus, sw.a_plus, _thresholds(cfg), sw.mass_model,
                     cfg.area_term)
    return sc, args.grid or sw.points


def cmd_bandgap(cfg: RunConfig, args) -> Result:
    sc, n = _sweep_config(cfg, args)
    pts = dispersion_sweep(sc, n, args.threads)
    rows = [dict(p.row(), reason=p.reason) for p in pts]
    try:
        rep = bandgap_report(sc, pts, n, args.threads)
    except Rejection as exc:
        return Result({"error": exc.reason, "detail": exc.detail}, {"sweep": rows}), EXIT_REJECTED
    return Result(rep.as_dict(), {"sweep": rows})


def cmd_verify(cfg: RunConfig, args) -> Result:
    vs = cfg.verify
    if cfg.amplitudes is None:
        raise ConfigError("verify needs 'amplitudes' for the initial state")
    s = _system(cfg)
    m, p, fp = _frequencies(cfg)
    am, ap = cfg.amplitudes.a_minus, cfg.amplitudes.a_plus
    dt = TWO_PI / (vs.steps_per_fast_period * m.omega_plus)
    slow = abs(fp.w_plus_nlr - 3.0 * fp.w_minus_nlr)
    T = vs.slow_periods * TWO_PI / max(slow, 1e-3 * m.omega_minus)
    stride = max(1, vs.steps_per_fast_period // 10)
    traj = integrate_exact(s, (am, ap, 0.0, 0.0), T, dt, stride=stride, scheme=vs.scheme)
    rates = mean_phase_rates(traj, m.omegas)
    peaks = modal_spectrum(traj, m.omegas)
    analytic = (fp.w_minus_nlr, fp.w_plus_nlr)
    checks = []
    for name, a, r, pk in zip(("omega_minus", "omega_plus"), analytic, rates, peaks):
        err = abs(r - a) / abs(a)
        checks.append({"name": name, "analytic": a, "phase_rate": r, "fft_peak": pk, "rel_err": err,
                       "tol": vs.rel_tol, "pass": err < vs.rel_tol})
    drift = traj.energy_drift()
    checks.append({"name": "energy_drift", "measured": drift, "tol": DRIFT_BOUND,
                   "pass": drift < DRIFT_BOUND})
    if fp.chart is not None and p is not None:
        pm = measure_period(p, fp.chart.E, fp.chart.region)
        expect = TWO_PI / abs(fp.w_slow)
        err = abs(pm.period - expect) / expect
        checks.append({"name": "slow_period", "analytic": expect, "measured": pm.period, "rel_err": err,
                       "tol": 1e-4, "pass": err < 1e-4, "winding": pm.winding})
    out = {"regime": fp.regime, "dt": dt, "T": T, "scheme": vs.scheme, "checks": checks,
           "all_pass": all(c["pass"] for c in checks)}
    return Result(out)


COMMANDS = {
    "decompose": cmd_decompose,
    "coeffs": cmd_coeffs,
    "classify": cmd_classify,
    "portrait": cmd_portrait,
    "roots": cmd_roots,
    "freqs": cmd_freqs,
    "bandgap": cmd_bandgap,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------- output

def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "tolist"):
        return _jsonable(v.tolist())
    if hasattr(v, "tag"):
        return v.tag
    return v


def _csv_text(rows: list) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def emit(command: str, cfg: RunConfig, res: Result, out_dir: str | None, fmt: str, stream=None):
    stream = sys.stdout if stream is None else stream
    doc = {"command": command, "version": __version__, "config": cfg.model_dump(mode="json"),
           "result": _jsonable(res.payload)}
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{command}.json").write_text(json.dumps(doc, indent=2))
        for name, rows in res.tables.items():
            (d / f"{name}.csv").write_text(_csv_text(_jsonable(rows)))
        return
    if fmt == "csv" and res.tables:
        for name, rows in res.tables.items():
            if len(res.tables) > 1:
                stream.write(f"# {name}\n")
            stream.write(_csv_text(_jsonable(rows)))
        return
    if res.tables:
        doc["tables"] = _jsonable(res.tables)
    stream.write(json.dumps(doc, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="resonant31", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", metavar="PATH", help="JSON run configuration")
        sp.add_argument("--out", metavar="DIR", help="write <command>.json and CSV tables here")
        sp.add_argument("--grid", type=int, metavar="N", help="points per level curve or sweep")
        sp.add_argument("--threads", type=int, default=1, metavar="N")
        sp.add_argument("--format", choices=("csv", "json"), default="json")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.grid is not None and args.grid < 2:
            raise ConfigError("--grid must be at least 2")
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        cfg = load_config(args.config) if args.config else RunConfig()
        res = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Rejection as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    code = EXIT_OK
    if isinstance(res, tuple):
        res, code = res
    emit(args.command, cfg, res, args.out or cfg.out, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
