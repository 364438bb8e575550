"""Matplotlib renderings saved next to the delimited outputs."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def save_ellipse_figure(loci, path) -> None:
    """(D, V) loci for a family of ellipticities.

    ``loci`` maps ellipticity -> (D array, V array).
    """
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for eta in sorted(loci):
        d, v = loci[eta]
        ax.plot(d, v, label=f"ellipticity {eta:g}")
    ax.set_xlabel("predictability D")
    ax.set_ylabel("visibility V")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_aspect("equal")
    ax.grid(alpha=0.3)
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_scan_figure(scan, path, fit=None) -> None:
    """Counts vs phase for one fringe scan, optionally overlaying the
    fitted sinusoid (fit = (v_hat, fitted_phase))."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(scan.phase_grid, scan.counts, "o", ms=4, label="counts")
    if fit is not None:
        v_hat, phase = fit
        dense = np.linspace(0.0, 2.0 * np.pi, 512)
        amp = float(np.mean(scan.counts))
        ax.plot(dense, amp * (1.0 + v_hat * np.cos(dense - phase)), "-",
                label=f"fit V={v_hat:.4f}")
    ax.set_xlabel("phase (rad)")
    ax.set_ylabel("counts")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_reconstruction_figure(recon: np.ndarray, eta: np.ndarray, path,
                               truth: np.ndarray = None,
                               rmse_value: float = None) -> None:
    """Panels: object (if given), reconstruction, ellipticity, |error|."""
    panels = []
    if truth is not None:
        panels.append(("object", truth, "gray", (0.0, 1.0)))
    panels.append(("reconstruction", recon, "gray", (0.0, 1.0)))
    panels.append(("ellipticity", eta, "viridis", (0.0, 1.0)))
    if truth is not None:
        panels.append(("abs error", np.abs(recon - truth), "Reds", (None, None)))

    fig, axes = plt.subplots(1, len(panels), figsize=(3.2 * len(panels), 3.4))
    if len(panels) == 1:
        axes = [axes]
    for ax, (title, data, cmap, (vmin, vmax)) in zip(axes, panels):
        im = ax.imshow(data, cmap=cmap, vmin=vmin, vmax=vmax)
        ax.set_title(title)
        ax.axis("off")
        fig.colorbar(im, ax=ax, fraction=0.046)
    if rmse_value is not None:
        fig.suptitle(f"rmse = {rmse_value:.5f}")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
