"""Pure-Python/numpy versions of the compiled kernels (same signatures)."""

from collections import deque

import numpy as np

from ..errors import ConvergenceError


def jacobi_eigvalsh_batch(blocks, tol=1e-12, max_sweeps=60):
    """Eigenvalues (ascending) of a stack of complex Hermitian matrices, shape (B, m, m).

    Cyclic Jacobi with each rotation applied to the whole stack at once.
    """
    a = np.array(blocks, dtype=np.complex128, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected shape (B, m, m), got {a.shape}")
    nb, m, _ = a.shape
    if nb == 0 or m == 0:
        return np.empty((nb, m))
    norm2 = np.einsum("bij,bij->b", a, a.conj()).real
    iu = np.triu_indices(m, 1)
    rows = np.arange(m)

    for _ in range(max_sweeps + 1):
        off2 = (np.abs(a[:, iu[0], iu[1]]) ** 2).sum(axis=1)
        if np.all(2.0 * off2 <= tol * tol * norm2):
            break
        if _ == max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[:, p, q]
                g = np.abs(apq)
                live = g > 0.0
                if not live.any():
                    continue
                gs = np.where(live, g, 1.0)
                app = a[:, p, p].real
                aqq = a[:, q, q].real
                with np.errstate(over="ignore"):
                    theta = (aqq - app) / (2.0 * gs)
                    big = np.abs(theta) > 1e150
                    safe = np.where(big, 1.0, theta)
                    t = np.sign(safe) / (np.abs(safe) + np.sqrt(safe * safe + 1.0))
                t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # component-wise: complex division rescales and can overflow for subnormal g
                e = np.where(live, apq.real / gs + 1j * (apq.imag / gs), 1.0)

                others = rows[(rows != p) & (rows != q)]
                arp = a[:, others, p]
                arq = a[:, others, q] * e.conj()[:, None]
                nrp = c[:, None] * arp - s[:, None] * arq
                nrq = s[:, None] * arp + c[:, None] * arq
                a[:, others, p] = nrp
                a[:, p, others] = nrp.conj()
                a[:, others, q] = nrq
                a[:, q, others] = nrq.conj()
                a[:, p, p] = app - t * g
                a[:, q, q] = aqq + t * g
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0

    return np.sort(np.diagonal(a, axis1=1, axis2=2).real, axis=1)


def bfs_two_coloring(neighbors):
    """BFS from vertex 0 over an (N, d) neighbor table; negative entries are padding.

    Returns ``(reached, bipartite)``.
    """
    nbr = np.asarray(neighbors).tolist()
    n = len(nbr)
    if n == 0:
        return 0, True
    color = [-1] * n
    color[0] = 0
    queue = deque([0])
    reached = 1
    bipartite = True
    while queue:
        v = queue.popleft()
        for u in nbr[v]:
            if u < 0:
                continue
            if color[u] == -1:
                color[u] = 1 - color[v]
                reached += 1
                queue.append(u)
            elif color[u] == color[v]:
                bipartite = False
    return reached, bipartite
