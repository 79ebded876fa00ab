"""Report files: one TSV record per check plus matplotlib figures."""
from __future__ import annotations

import re
from pathlib import Path
from typing import Sequence

from .checks import CheckResult
from .topology import ConvergenceProfile


def write_tsv(results: Sequence[CheckResult], path: Path) -> Path:
    lines = ["\t".join(CheckResult.TSV_FIELDS)] + [r.tsv() for r in results]
    path.write_text("\n".join(lines) + "\n")
    return path


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_summary(results: Sequence[CheckResult], path: Path) -> Path:
    """Candidates examined and candidates passing, per check (log scale)."""
    plt = _pyplot()
    rows = [r for r in results if r.candidates]
    fig, ax = plt.subplots(figsize=(8, 0.35 * len(rows) + 1.5))
    ys = range(len(rows))
    ax.barh(ys, [r.candidates for r in rows], color="0.8", label="candidates")
    ax.barh(ys, [r.passing or 0 for r in rows], height=0.4,
            color=["tab:green" if r.passed else "tab:red" for r in rows], label="passing")
    ax.set_yticks(list(ys))
    ax.set_yticklabels([r.name for r in rows], fontsize=7)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlabel("count")
    ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_convergence(profile: ConvergenceProfile, path: Path, title: str = "") -> Path:
    """Consecutive distances, and distances to the limit when known, on a log2 axis."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    pair_x = [i + 0.5 for i in range(len(profile.distances))]
    pos = [(x, d) for x, d in zip(pair_x, profile.distances) if d > 0]
    if pos:
        ax.plot(*zip(*pos), "o-", label="d(s_i, s_i+1)")
    if profile.limit_distances:
        lim = [(i, d) for i, d in enumerate(profile.limit_distances) if d > 0]
        if lim:
            ax.plot(*zip(*lim), "s--", label="d(s_i, limit)")
    ax.set_yscale("log", base=2)
    ax.set_xlabel("index")
    ax.set_ylabel("congruence distance")
    ax.set_title(title or "convergence profile", fontsize=9)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_").lower()


def write_report(results: Sequence[CheckResult], directory: str | Path,
                 profiles: Sequence[tuple[str, ConvergenceProfile]] = ()) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = [write_tsv(results, out / "report.tsv"), plot_summary(results, out / "summary.png")]
    for title, profile in profiles:
        written.append(plot_convergence(profile, out / f"convergence_{_slug(title)}.png", title))
    return written
