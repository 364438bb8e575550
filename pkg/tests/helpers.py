"""Independent brute-force oracles shared by the test modules.

Everything here rebuilds physics from explicit state vectors (kron products
and partial traces) or from dense numerical sweeps, never from the formulas
under test.
"""

import numpy as np


def random_marginal(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random normalized complex vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def joint_path_marginal_vector(c1, c2, m1, m2, phi) -> np.ndarray:
    """|psi> = c1 |path1> x m1 + c2 e^{-i phi} |path2> x m2 as a flat vector."""
    m1 = np.asarray(m1, dtype=complex)
    m2 = np.asarray(m2, dtype=complex)
    d = m1.size
    vec = np.zeros(2 * d, dtype=complex)
    vec[:d] = c1 * m1
    vec[d:] = c2 * np.exp(-1j * phi) * m2
    return vec


def partial_trace_path(psi: np.ndarray, dim_marginal: int) -> np.ndarray:
    """Trace the marginal factor out of |psi><psi|; returns the 2x2 path matrix."""
    rho_full = np.outer(psi, psi.conj())
    rho = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            block = rho_full[i * dim_marginal:(i + 1) * dim_marginal,
                             j * dim_marginal:(j + 1) * dim_marginal]
            rho[i, j] = np.trace(block)
    return rho


def minmax_visibility(prob_fn, grid_points: int = 4096) -> float:
    """Fringe contrast from a dense phase sweep of prob_fn."""
    phis = np.linspace(0.0, 2.0 * np.pi, grid_points, endpoint=False)
    p = np.asarray(prob_fn(phis), dtype=float)
    if p.shape != phis.shape:
        p = np.array([float(prob_fn(x)) for x in phis])
    hi, lo = p.max(), p.min()
    return (hi - lo) / (hi + lo)


def qiup_port_probability(p1, t, gamma, alpha, phi_total) -> float:
    """Signal one-port probability from the explicit branch state vector.

    Modes: signal in {s1, s2} x idler in {common, misaligned, sunk} x
    2-dim pump marginal.  The detected port takes (s1 + s2)/sqrt(2).
    """
    c1, c2 = np.sqrt(p1), np.sqrt(1.0 - p1)
    idler1 = np.array([t, 0.0, np.sqrt(max(0.0, 1.0 - t * t))])
    idler2 = np.array([alpha, np.sqrt(max(0.0, 1.0 - alpha * alpha)), 0.0])
    m1 = np.array([1.0, 0.0])
    m2 = np.array([gamma, np.sqrt(max(0.0, 1.0 - gamma * gamma))])
    branch1 = c1 * np.kron(idler1, m1).astype(complex)
    branch2 = c2 * np.exp(-1j * phi_total) * np.kron(idler2, m2)
    port_amp = (branch1 + branch2) / np.sqrt(2.0)
    return float(np.vdot(port_amp, port_amp).real)
