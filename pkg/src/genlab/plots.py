"""Figure rendering for the CLI report paths.

Every function takes already-computed rows and writes one file; nothing here
recomputes or samples.  The Agg backend is forced so the CLI works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_STYLE = {
    "figure.figsize": (6.4, 4.0),
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def _new_axes(title, xlabel, ylabel):
    plt.rcParams.update(_STYLE)
    fig, ax = plt.subplots()
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return fig, ax


def _finish(fig, path):
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def save_density_figure(rows, path, title="density"):
    """rows: (k, ratio_float, rho_float_or_None)."""
    fig, ax = _new_axes(title, "k", "density")
    ks = [r[0] for r in rows]
    ax.plot(ks, [r[1] for r in rows], "o-", label="ratio |P_k|/|S_k|", markersize=3)
    rho = [(r[0], r[2]) for r in rows if r[2] is not None]
    if rho:
        ax.plot([r[0] for r in rho], [r[1] for r in rho], "s--",
                label="annular rho_k", markersize=3)
    ax.legend()
    _finish(fig, path)


def save_tv_figure(rows, path, title="walk equidistribution"):
    """rows: (k, tv_float); log scale shows the exponential decay."""
    fig, ax = _new_axes(title, "walk length k", "total variation to uniform")
    ax.semilogy([r[0] for r in rows], [max(r[1], 1e-300) for r in rows], "o-",
                markersize=3)
    _finish(fig, path)


def save_census_figure(rows, path, title="norm-ball census"):
    """rows: (k, total, parabolic)."""
    fig, ax = _new_axes(title, "norm bound k", "count")
    ks = [r[0] for r in rows]
    ax.plot(ks, [r[1] for r in rows], "o-", label="total", markersize=3)
    ax.plot(ks, [r[2] for r in rows], "s--", label="parabolic", markersize=3)
    ax.legend()
    _finish(fig, path)


def save_sampler_figure(counts, n_cells, samples, path, title="sampler uniformity"):
    """Histogram of per-cell hit counts against the uniform expectation."""
    fig, ax = _new_axes(title, "hits per element", "number of elements")
    ax.hist(list(counts.values()) + [0] * (n_cells - len(counts)),
            bins=30, alpha=0.8)
    ax.axvline(samples / n_cells, color="k", linestyle="--", label="uniform")
    ax.legend()
    _finish(fig, path)
