"""Panel rendering keyed to the solver presets, plus the gallery page.

Each recipe maps documented CSV columns onto one or more matplotlib
panels; figures are deterministic for fixed inputs and the plotted
arrays are exposed so tests can confirm the renderer never touches the
numbers.
"""

from __future__ import annotations

import html
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .datasets import Dataset, MissingColumnError, load_dataset  # noqa: E402


@dataclass
class RenderedPanel:
    name: str
    image: Path
    plotted: dict[str, np.ndarray] = field(default_factory=dict)


def _save(fig, outdir: Path, name: str) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    target = outdir / f"{name}.png"
    fig.savefig(target, dpi=160)
    plt.close(fig)
    return target


def _panel_population(ds: Dataset, outdir: Path, name: str,
                      extra: dict | None = None) -> RenderedPanel:
    t = ds.numeric("t")
    pop = ds.numeric("population")
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(t, pop, lw=1.0, color="tab:blue")
    if extra and "plateau_mean" in extra:
        ax.axhline(extra["plateau_mean"], color="tab:red", lw=1.0)
        if "r0_squared" in extra:
            ax.axhline(extra["r0_squared"], color="tab:red", lw=0.8, ls="--")
    ax.set_xscale("log")
    ax.set_xlim(max(t[1], 1e-2), t[-1])
    ax.set_xlabel(f"t [{ds.unit('t')}]")
    ax.set_ylabel("excited-state population")
    return RenderedPanel(name, _save(fig, outdir, name), {"t": t, "population": pop})


def _panel_two_emitter(ds: Dataset, outdir: Path, name: str) -> RenderedPanel:
    t = ds.numeric("t")
    p1 = ds.numeric("population_donor")
    p2 = ds.numeric("population_acceptor")
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(t, p1, lw=1.0, color="tab:blue", label="donor")
    ax.plot(t, p2, lw=1.0, color="tab:red", label="acceptor")
    ax.set_xlabel(f"t [{ds.unit('t')}]")
    ax.set_ylabel("population")
    ax.legend(frameon=False)
    return RenderedPanel(name, _save(fig, outdir, name),
                         {"t": t, "population_donor": p1,
                          "population_acceptor": p2})


def _panel_rings(ds: Dataset, outdir: Path, name: str) -> RenderedPanel:
    k1 = ds.numeric("k1")
    k2 = ds.numeric("k2")
    fig, ax = plt.subplots(figsize=(4.0, 4.0))
    ax.scatter(k1, k2, s=2, color="tab:red")
    ax.set_xlabel("k1")
    ax.set_ylabel("k2")
    ax.set_xlim(-np.pi, np.pi)
    ax.set_ylim(-np.pi, np.pi)
    ax.set_aspect("equal")
    return RenderedPanel(name, _save(fig, outdir, name), {"k1": k1, "k2": k2})


def _panel_bands(ds: Dataset, outdir: Path, name: str) -> list[RenderedPanel]:
    k1 = ds.numeric("k1")
    k2 = ds.numeric("k2")
    out = []
    for part in ("re_w_plus", "im_w_plus"):
        vals = ds.numeric(part)
        n = int(round(np.sqrt(len(vals))))
        fig, ax = plt.subplots(figsize=(4.4, 3.6))
        grid = vals.reshape(n, n)
        im = ax.pcolormesh(k1.reshape(n, n), k2.reshape(n, n), grid,
                           shading="auto", cmap="viridis")
        fig.colorbar(im, ax=ax, label=f"{part} [J]")
        ax.set_xlabel("k1")
        ax.set_ylabel("k2")
        out.append(RenderedPanel(f"{name}_{part}",
                                 _save(fig, outdir, f"{name}_{part}"),
                                 {part: vals, "k1": k1, "k2": k2}))
    return out


def _panel_wavefunction(ds: Dataset, outdir: Path, name: str) -> RenderedPanel:
    x = ds.numeric("x") if "x" in ds.table else ds.numeric("n1")
    y = ds.numeric("y") if "y" in ds.table else ds.numeric("n2")
    amp = np.hypot(ds.numeric("re_amp"), ds.numeric("im_amp"))
    sub = ds.table.get("sublattice")
    fig, ax = plt.subplots(figsize=(4.6, 4.2))
    for label, color in (("A", "tab:blue"), ("B", "tab:red")):
        sel = (sub == label) if sub is not None else slice(None)
        ax.scatter(np.asarray(x)[sel], np.asarray(y)[sel],
                   s=4 + 400 * np.asarray(amp)[sel] ** 2, alpha=0.75,
                   color=color, label=f"sublattice {label}")
    ax.set_aspect("equal")
    ax.legend(frameon=False, fontsize=7)
    return RenderedPanel(name, _save(fig, outdir, name), {"amplitude": amp})


def _panel_ensemble(ds: Dataset, outdir: Path, name: str) -> RenderedPanel:
    kinds = ds.table["kind"]
    w = ds.numeric("strength")
    mt = ds.numeric("max_transfer")
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for kind, color in (("diagonal", "tab:blue"), ("off_diagonal", "tab:red")):
        sel = kinds == kind
        if not np.any(sel):
            continue
        ws = np.unique(w[sel])
        means = [mt[sel & (w == wi)].mean() for wi in ws]
        stds = [mt[sel & (w == wi)].std() for wi in ws]
        ax.errorbar(ws, means, yerr=stds, color=color, marker="o",
                    capsize=3, label=kind)
    ax.axhline(0.25, color="grey", lw=0.8, ls=":")
    ax.set_xlabel("disorder strength W [J]")
    ax.set_ylabel("max transferred population")
    ax.legend(frameon=False)
    return RenderedPanel(name, _save(fig, outdir, name),
                         {"strength": w, "max_transfer": mt})


def _panel_spectrum_scan(ds: Dataset, outdir: Path, name: str) -> list[RenderedPanel]:
    ratio = ds.numeric("ratio")
    out = []
    for part in ("re_e", "im_e"):
        vals = ds.numeric(part)
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        ax.plot(ratio, vals, ".", ms=1.5, color="tab:blue")
        ax.set_xlabel("t_inter / t_intra")
        ax.set_ylabel(f"{part} [J]")
        out.append(RenderedPanel(f"{name}_{part}",
                                 _save(fig, outdir, f"{name}_{part}"),
                                 {part: vals, "ratio": ratio}))
    return out


def render(dataset_dir, outdir=None, name: str | None = None) -> list[RenderedPanel]:
    """Render every recognized dataset in a solver output directory."""
    dataset_dir = Path(dataset_dir)
    outdir = Path(outdir) if outdir else dataset_dir / "figures"
    name = name or dataset_dir.name
    panels: list[RenderedPanel] = []
    report = {}
    plateau = dataset_dir / "plateau.json"
    if plateau.exists():
        report = json.loads(plateau.read_text())

    handlers = [
        ("population.csv", lambda ds: [_panel_population(ds, outdir,
                                                         f"{name}_population",
                                                         report)]),
        ("two_emitter.csv", lambda ds: [_panel_two_emitter(ds, outdir,
                                                           f"{name}_two_emitter")]),
        ("giant_atoms.csv", lambda ds: [_panel_two_emitter(ds, outdir,
                                                           f"{name}_giant_atoms")]),
        ("corner_transfer.csv", lambda ds: [_panel_two_emitter(
            ds, outdir, f"{name}_corner_transfer")]),
        ("ep_ring_locus.csv", lambda ds: [_panel_rings(ds, outdir,
                                                       f"{name}_ep_rings")]),
        ("bands.csv", lambda ds: _panel_bands(ds, outdir, f"{name}_bands")),
        ("qls_wavefunction.csv", lambda ds: [_panel_wavefunction(
            ds, outdir, f"{name}_qls")]),
        ("edge_state.csv", lambda ds: [_panel_wavefunction(
            ds, outdir, f"{name}_edge_state")]),
        ("corner_state.csv", lambda ds: [_panel_wavefunction(
            ds, outdir, f"{name}_corner_state")]),
        ("ensemble.csv", lambda ds: [_panel_ensemble(ds, outdir,
                                                     f"{name}_ensemble")]),
        ("kekule_spectrum.csv", lambda ds: _panel_spectrum_scan(
            ds, outdir, f"{name}_spectrum")),
    ]
    for filename, handler in handlers:
        path = dataset_dir / filename
        if path.exists():
            panels.extend(handler(load_dataset(path)))
    if not panels:
        raise MissingColumnError(f"no renderable dataset found in {dataset_dir}")
    return panels


def gallery(root, panels_by_run: dict[str, list[RenderedPanel]] | None = None) -> Path:
    """Static index of every figures/ directory under root."""
    root = Path(root)
    entries = []
    for figdir in sorted(root.glob("*/figures")):
        run = figdir.parent.name
        manifest = figdir.parent / "manifest.json"
        badge = ""
        if manifest.exists():
            meta = json.loads(manifest.read_text())
            badge = f"config {meta.get('config_sha256', '')[:12]}"
        else:
            badge = "missing manifest"
        for image in sorted(figdir.glob("*.png")):
            entries.append((run, image.relative_to(root), badge))
    body = "\n".join(
        f'<div class="panel"><h3>{html.escape(str(rel))}</h3>'
        f'<img src="{html.escape(str(rel))}" width="460"/>'
        f'<p>{html.escape(run)} &mdash; {html.escape(badge)}</p></div>'
        for run, rel, badge in entries)
    page = ("<!doctype html><html><head><meta charset='utf-8'>"
            "<title>pgqed gallery</title></head><body>"
            f"<h1>pgqed figure gallery ({len(entries)} panels)</h1>"
            f"{body}</body></html>\n")
    target = root / "index.html"
    target.write_text(page)
    return target
