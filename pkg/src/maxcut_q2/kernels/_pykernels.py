"""Pure numpy implementations of the statevector and local-search kernels."""
import numpy as np

NAME = "python"


def cost_diagonal(n, src, dst, w, start=0, count=None):
    total = 1 << n
    m = total - start if count is None else count
    idx = np.arange(start, start + m, dtype=np.int64)
    out = np.zeros(m, dtype=np.float64)
    for i, j, wt in zip(src.tolist(), dst.tolist(), w.tolist()):
        out += wt * (((idx >> i) ^ (idx >> j)) & 1)
    return out


def apply_phase(psi, cost, gamma):
    psi *= np.exp(-1j * gamma * cost)


def apply_mixer(psi, n, beta):
    c, s = np.cos(beta), np.sin(beta)
    for k in range(n):
        v = psi.reshape(-1, 2, 1 << k)
        a0 = v[:, 0, :].copy()
        a1 = v[:, 1, :]
        v[:, 0, :] = c * a0 - 1j * s * a1
        v[:, 1, :] = c * a1 - 1j * s * a0


def one_exchange(indptr, indices, weights, spins, tol):
    n = spins.shape[0]
    flips = 0
    improved = True
    while improved:
        improved = False
        for i in range(n):
            lo, hi = indptr[i], indptr[i + 1]
            gain = float(spins[i]) * float(np.dot(weights[lo:hi], spins[indices[lo:hi]]))
            if gain > tol:
                spins[i] = -spins[i]
                flips += 1
                improved = True
    return flips
