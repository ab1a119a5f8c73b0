"""Optional figure rendering for report runs (opt-in via --figures).

Plots mirror the delimited outputs; nothing here feeds back into any
analysis.  The Agg backend is forced so batch runs never need a display.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _target(directory: str, name: str) -> str:
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)


def resolvent_figure(profile, directory: str, name: str = "resolvent.png") -> str:
    path = _target(directory, name)
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(profile.radii, profile.deficiency, "o-")
    ax.set_xlabel("window radius")
    ax.set_ylabel("deficiency 1 - u(x0)")
    ax.set_title(f"resolvent deficiency, lambda={profile.lam:g}, verdict={profile.verdict}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def volume_figure(profile, report, directory: str, name: str = "volume.png") -> str:
    path = _target(directory, name)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.loglog(profile.rs, [max(v, 1e-300) for v in profile.volumes], "-")
    ax1.set_xlabel("r")
    ax1.set_ylabel("volume")
    ax1.set_title(f"ball volume ({profile.metric})")
    ax1.grid(True, which="both", alpha=0.3)
    rs = profile.rs
    integrand = [r / max(math.log(v), 1.0) if v > 0 else math.nan
                 for r, v in zip(rs, profile.volumes)]
    ax2.loglog(rs, integrand, "-")
    ax2.set_xlabel("r")
    ax2.set_ylabel("r / max(log V, 1)")
    ax2.set_title(f"growth integrand, {report.diagnostic}")
    ax2.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def ensemble_figure(ens, directory: str, name: str = "simulate.png") -> str:
    path = _target(directory, name)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.hist(ens.jumps, bins=40)
    ax1.set_xlabel("jumps per trajectory")
    ax1.set_ylabel("count")
    ax1.set_title("jump counts")
    counts = ens.status_counts
    ax2.bar(list(counts.keys()), list(counts.values()))
    ax2.set_ylabel("trajectories")
    ax2.set_title("terminal status")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
