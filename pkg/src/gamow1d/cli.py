"""Command-line interface.

Subcommands ``resonances``, ``scan``, ``deform`` and ``bound`` share the
potential flags and write one table (CSV at 9 significant digits, or a JSON
object ``{config, results, diagnostics}`` with round-trip floats).

Exit status: 0 on success, 1 when a computation fails, 2 on bad usage.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any

import click
import numpy as np
import yaml

from . import __version__
from .darboux import count_lobes, deform1, deform2
from .errors import Gamow1DError, NoPeaksError
from .gamow import Variant, build_gamow
from .potentials import Kind, PotentialSpec, evaluate_potential, n_inf
from .resonances import (
    BoundWave,
    Method,
    Resonance,
    analytic_resonances,
    bound_states,
    graphical_resonance,
    refine,
    scan_transmission,
)
from .sampled import bound_states as shoot_bound_states
from .sampled import sample_cells
from .scattering import fbw_sum

EXIT_FAILURE = 1


# --------------------------------------------------------------------- output


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".9g")
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rows[0].keys())
        for r in rows:
            w.writerow(_fmt(v) for v in r.values())
    return buf.getvalue()


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        click.echo(text, nl=False)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _emit(ctx, rows: list[dict], diagnostics: dict, out: str | None, fmt: str) -> None:
    if fmt == "json":
        doc = {"config": ctx.obj["config"], "results": rows, "diagnostics": diagnostics}
        _write(json.dumps(_jsonable(doc), indent=2) + "\n", out)
        return
    _write(_csv_text(rows), out)
    for key, val in diagnostics.items():
        click.echo(f"# {key}: {json.dumps(_jsonable(val))}", err=True)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_FAILURE)


# ----------------------------------------------------------------- options


def _positive(ctx, param, value):
    if value is not None and not (value > 0 and math.isfinite(value)):
        raise click.BadParameter("must be finite and > 0")
    return value


def _common(f):
    opts = [
        click.option("--kind", type=click.Choice([k.value for k in Kind]), required=True),
        click.option("--v0", type=float, required=True, callback=_positive, help="Strength V0 > 0."),
        click.option("--b", "b", type=float, required=True, callback=_positive, help="Width b > 0."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
                     help="Output file (default: stdout)."),
        click.option("--plot", type=click.Path(dir_okay=False, writable=True), default=None,
                     help="Also render a figure to this file."),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def _load_config(ctx, param, value):
    if value is None:
        return None
    text = Path(value).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise click.BadParameter(f"cannot parse config: {exc}") from exc
    if not isinstance(data, dict):
        raise click.BadParameter("config must be a mapping")
    # a flat mapping applies to every subcommand; nested maps are per command
    shared = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
    default_map = {}
    for name in ("resonances", "scan", "deform", "bound"):
        sub = dict(shared)
        sub.update({k.replace("-", "_"): v for k, v in (data.get(name) or {}).items()})
        if "format" in sub:
            sub["fmt"] = sub.pop("format")
        default_map[name] = sub
    ctx.default_map = default_map
    return value


def _record(ctx, **config) -> PotentialSpec:
    ctx.obj["config"] = {k: v for k, v in config.items()}
    return PotentialSpec(config["kind"], config["v0"], config["b"])


@click.group()
@click.version_option(__version__)
@click.option("--config", type=click.Path(exists=True, dir_okay=False), callback=_load_config,
              is_eager=True, expose_value=False, help="YAML or JSON file of defaults; flags override.")
@click.pass_context
def main(ctx):
    """Resonances, Gamow functions and Darboux deformations of square wells and barriers."""
    ctx.ensure_object(dict)


# -------------------------------------------------------------- resonances


@main.command()
@_common
@click.option("--count", type=click.IntRange(min=1), default=8, show_default=True)
@click.pass_context
def resonances(ctx, kind, v0, b, fmt, out, plot, count):
    """Analytic, pole and graphical resonance tables."""
    spec = _record(ctx, command="resonances", kind=kind, v0=v0, b=b, count=count)
    try:
        seeds = analytic_resonances(spec, count)
        poles = [refine(spec, s) for s in seeds]
    except Gamow1DError as exc:
        _fail(exc)
    graphs, missing = [], []
    for a in seeds:
        # broad peaks may lack half-maximum crossings; report those cells as empty
        try:
            graphs.append(graphical_resonance(spec, a))
        except NoPeaksError:
            graphs.append(Resonance(math.nan, math.nan, a.index, Method.GRAPHICAL, None, a.spacing))
            missing.append(a.index)
    rows = []
    for a, p, g in zip(seeds, poles, graphs):
        rows.append({
            "index": a.index,
            "E_analytic": a.E,
            "half_width_analytic": a.half_width,
            "E_pole": p.E,
            "half_width_pole": p.half_width,
            "k_re": p.k.real,
            "k_im": p.k.imag,
            "E_graphic": g.E,
            "half_width_graphic": g.half_width,
            "gap_E": g.E - a.E,
            "gap_half_width": g.half_width - a.half_width,
            "rel_gap_E": (g.E - a.E) / g.E,
            "rel_gap_half_width": (g.half_width - a.half_width) / g.half_width,
            "narrow": a.narrow,
            "above_spacing": a.above_spacing,
        })
    diagnostics = {
        "n_inf": n_inf(v0, b) if spec.kind is Kind.WELL else None,
        "theta": spec.theta,
        "newton_iterations": [p.iterations for p in poles],
        "all_narrow": all(a.narrow for a in seeds),
        "graphic_missing": missing,
    }
    _emit(ctx, rows, diagnostics, out, fmt)
    if plot:
        from .plotting import plot_resonances

        plot_resonances(rows, plot)


# -------------------------------------------------------------------- scan


@main.command()
@_common
@click.option("--e-min", type=float, required=True)
@click.option("--e-max", type=float, required=True)
@click.option("--samples", type=click.IntRange(min=100), default=20000, show_default=True)
@click.option("--peaks-out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Peak table destination (CSV mode; default: appended after the samples).")
@click.pass_context
def scan(ctx, kind, v0, b, fmt, out, plot, e_min, e_max, samples, peaks_out):
    """Sample T(E), detect peaks and measure their widths."""
    if not 0 < e_min < e_max:
        raise click.BadParameter("need 0 < e-min < e-max", param_hint="--e-min/--e-max")
    spec = _record(ctx, command="scan", kind=kind, v0=v0, b=b, e_min=e_min, e_max=e_max, samples=samples)
    failure = None
    try:
        result = scan_transmission(spec, e_min, e_max, samples)
    except NoPeaksError as exc:
        failure, result = exc, exc.result
        if result is None:
            _fail(exc)
    except Gamow1DError as exc:
        _fail(exc)
    fb = result.fbw_peaks()
    omega = np.asarray(fbw_sum(result.energies, fb)) if fb else np.zeros_like(result.energies)
    samples_rows = [
        {"E": float(e), "T": float(t), "omega": float(w)}
        for e, t, w in zip(result.energies, result.T_values, omega)
    ]
    peak_rows = [
        {"center": p.center, "half_width": 0.5 * p.width, "left": p.left, "right": p.right,
         "T_max": p.T_max, "accepted": p.accepted}
        for p in result.peaks
    ]
    diagnostics = {"peaks_found": len(result.peaks), "peaks_accepted": len(result.accepted)}
    if fmt == "json":
        doc = {"config": ctx.obj["config"], "results": {"samples": samples_rows, "peaks": peak_rows},
               "diagnostics": diagnostics}
        _write(json.dumps(_jsonable(doc), indent=2) + "\n", out)
    else:
        text = _csv_text(samples_rows)
        ptext = _csv_text(peak_rows) if peak_rows else "center,half_width,left,right,T_max,accepted\n"
        if peaks_out:
            _write(text, out)
            _write(ptext, peaks_out)
        else:
            _write(text + "\n" + ptext, out)
        for key, val in diagnostics.items():
            click.echo(f"# {key}: {val}", err=True)
    if plot:
        from .plotting import plot_scan

        plot_scan(result.energies, result.T_values, omega, peak_rows, plot)
    if failure is not None:
        _fail(failure)


# ------------------------------------------------------------------ deform


def _select_pole(spec: PotentialSpec, index: int):
    first = 0 if spec.kind is Kind.WELL else 1
    if index < first:
        raise click.BadParameter(f"pole labels start at {first} for a {spec.kind.value}", param_hint="--pole")
    seeds = analytic_resonances(spec, index - first + 1)
    return refine(spec, seeds[-1])


@main.command()
@_common
@click.option("--order", type=click.IntRange(1, 2), default=2, show_default=True)
@click.option("--pole", type=int, default=None,
              help="Resonance label (m from 0 for wells, n from 1 for barriers); refined before use.")
@click.option("--k-re", type=float, default=None, help="Explicit transformation k (real part).")
@click.option("--k-im", type=float, default=None, help="Explicit transformation k (imaginary part).")
@click.option("--variant", type=click.Choice([v.value for v in Variant]), default=None,
              help="Family of the order-1 transformation function.")
@click.option("--x-min", type=float, default=None)
@click.option("--x-max", type=float, default=None)
@click.option("--points", type=click.IntRange(min=3), default=4001, show_default=True)
@click.option("--argand", is_flag=True, help="Emit (Re V, Im V) pairs only.")
@click.option("--check-spectrum", is_flag=True,
              help="Order 2 on a well: shoot bound levels of the sampled potential.")
@click.pass_context
def deform(ctx, kind, v0, b, fmt, out, plot, order, pole, k_re, k_im, variant,
           x_min, x_max, points, argand, check_spectrum):
    """Sample first- or second-order deformed potentials."""
    explicit = k_re is not None or k_im is not None
    if explicit and (k_re is None or k_im is None):
        raise click.UsageError("--k-re and --k-im go together")
    if explicit == (pole is not None):
        raise click.UsageError("give exactly one of --pole or --k-re/--k-im")
    if order == 2 and variant is not None:
        raise click.UsageError("--variant applies to order 1 only")
    spec = _record(ctx, command="deform", kind=kind, v0=v0, b=b, order=order, pole=pole,
                   k_re=k_re, k_im=k_im, variant=variant, points=points)
    diagnostics: dict[str, Any] = {}
    try:
        if pole is not None:
            res = _select_pole(spec, pole)
            k_pole = res.k
            diagnostics["pole_k"] = k_pole
            diagnostics["newton_iterations"] = res.iterations
        else:
            k_pole = complex(k_re, k_im)
        if order == 1:
            var = Variant(variant or "decaying")
            k = k_pole
            if pole is not None and var is not Variant.DECAYING:
                k = -k_pole.conjugate() if var is Variant.CAPTURE else k_pole.conjugate()
            dp = deform1(build_gamow(spec, k, var))
            k_I = abs(k.imag)
        else:
            dp = deform2(spec, k_pole)
            k_I = abs(k_pole.imag)
        hb = spec.half_width
        pad = min(15.0 / k_I, 10.0 * spec.b) if k_I > 0 else 10.0 * spec.b
        lo = -hb - pad if x_min is None else x_min
        hi = hb + pad if x_max is None else x_max
        if not lo < hi:
            raise click.BadParameter("need x-min < x-max", param_hint="--x-min/--x-max")
        x = np.linspace(lo, hi, points)
        V = np.asarray(evaluate_potential(spec, x))
        Vn = np.asarray(dp(x))
        if order == 2:
            diagnostics["max_abs_imag"] = float(np.max(np.abs(np.imag(dp.wronskian_form(x)))))
            lobes, groups = count_lobes(dp)
            diagnostics["lobes"] = lobes
            diagnostics["distortions"] = groups
            if check_spectrum:
                if spec.kind is not Kind.WELL:
                    raise click.UsageError("--check-spectrum needs a well")
                cells = sample_cells(dp, lo, hi, 40000, (-hb, hb))
                shot = shoot_bound_states(cells, -spec.V0 - 1.0, 0.0)
                base = [s.E for s in bound_states(spec)]
                diagnostics["base_levels"] = base
                diagnostics["deformed_levels"] = [float(e) for e in shot]
                if len(shot) == len(base):
                    diagnostics["max_level_shift"] = float(np.max(np.abs(np.asarray(shot) - base)))
    except Gamow1DError as exc:
        _fail(exc)
    if argand:
        rows = [{"re": float(v.real), "im": float(v.imag)} for v in Vn.astype(complex)]
    elif order == 1:
        rows = [{"x": float(a), "V": float(v), "re": float(w.real), "im": float(w.imag)}
                for a, v, w in zip(x, V, Vn)]
    else:
        rows = [{"x": float(a), "V": float(v), "V2": float(w)} for a, v, w in zip(x, V, Vn)]
    _emit(ctx, rows, diagnostics, out, fmt)
    if plot:
        from .plotting import plot_deformation

        plot_deformation(x, V, Vn, plot, argand=argand)


# ------------------------------------------------------------------- bound


@main.command()
@_common
@click.option("--wave-points", type=click.IntRange(min=0), default=0,
              help="Also sample the normalised states on this many points (JSON only).")
@click.pass_context
def bound(ctx, kind, v0, b, fmt, out, plot, wave_points):
    """Bound levels of a square well."""
    if kind != Kind.WELL.value:
        raise click.UsageError("bound states need --kind well")
    spec = _record(ctx, command="bound", kind=kind, v0=v0, b=b)
    states = bound_states(spec)
    rows = [{"n": s.level, "parity": s.parity.value, "rho": s.rho, "E": s.E} for s in states]
    diagnostics: dict[str, Any] = {"count": len(states), "theta": spec.theta}
    hb = spec.half_width
    x = np.linspace(-3 * hb - 2, 3 * hb + 2, max(wave_points, 801))
    waves = [np.asarray(BoundWave(s, spec).evaluate(x)[0]) for s in states]
    if wave_points and fmt == "json":
        xs = np.linspace(x[0], x[-1], wave_points)
        diagnostics["x"] = xs.tolist()
        for r, s in zip(rows, states):
            r["psi"] = np.asarray(BoundWave(s, spec).evaluate(xs)[0]).tolist()
    _emit(ctx, rows, diagnostics, out, fmt)
    if plot:
        from .plotting import plot_bound

        plot_bound(x, evaluate_potential(spec, x), [s.E for s in states], waves, plot)
