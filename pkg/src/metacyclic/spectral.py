"""Fourier block-diagonalization, per-block eigenvalues and the Ramanujan verdict.

Conjugating the adjacency matrix by the unitary ``F_n (x) G_m`` with

    F_n[p, i] = exp(+2 pi i p i / n) / sqrt(n)
    G_m[a, r] = exp(-2 pi i a r / m) / sqrt(m)      (a = 0..m-1)

turns it into ``n`` Hermitian ``m x m`` blocks ``M_i``.  Entry ``(a, b)`` of
``M_i`` is ``2 cos(2 pi a / m) [a == b] + Omega(i, a, b)``, where ``Omega``
is a short sum of cosines (see :func:`omega_matrix`).
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, StructureError
from .group import GroupParams
from .kernels import jacobi_eigvalsh_batch

RAMANUJAN_BOUND = 2.0 * math.sqrt(3.0)
DEFAULT_TOL = 1e-9
HERMITIAN_TOL = 1e-12
TRIVIAL_TOL = 1e-8
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class HermitianBlock:
    index_i: int
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def _twist_exponents(p: GroupParams) -> np.ndarray:
    """``k^(alpha - xi) mod n`` for the xi that enter Omega."""
    count = p.alpha if p.regular else p.alpha // 2
    return np.array([pow(p.k, p.alpha - xi, p.n) for xi in range(count)], dtype=np.int64)


def _cos_frac(num, den) -> np.ndarray:
    # 2 cos(2 pi num / den) with num reduced exactly first
    return 2.0 * np.cos(2.0 * np.pi * (np.asarray(num) % den) / den)


def _phase_tensor(p: GroupParams, count: int) -> tuple[np.ndarray, np.ndarray]:
    """``exp(-2 pi i xi (a - b) / m)`` stacked over xi, plus the support mask."""
    a = np.arange(p.m)
    diff = a[:, None] - a[None, :]
    xi = np.arange(count)[:, None, None]
    phase = np.exp(-2j * np.pi * ((xi * diff) % p.m) / p.m)
    mask = (diff % (p.delta * p.t_period)) == 0
    return phase, mask


def omega_matrices(indices, p: GroupParams) -> np.ndarray:
    """Omega(i, a, b) for every requested block index i, shape ``(len, m, m)``.

    Regular k:   (t/m)  sum_{xi < alpha}   2cos(2 pi i k^(alpha-xi)/n) e^{-2 pi i xi (a-b)/m}
    Irregular k: (2t/m) sum_{xi < alpha/2} (same summand)
    and zero unless ``delta * t`` divides ``a - b``.
    """
    idx = np.atleast_1d(np.asarray(indices, dtype=np.int64))
    exps = _twist_exponents(p)
    coef = _cos_frac(np.multiply.outer(idx % p.n, exps), p.n)  # (len, count)
    phase, mask = _phase_tensor(p, len(exps))
    scale = p.delta * p.t_period / p.m
    out = scale * np.einsum("lx,xab->lab", coef, phase)
    out[:, ~mask] = 0.0
    return out


def omega_matrix(i: int, p: GroupParams) -> np.ndarray:
    return omega_matrices([i], p)[0]


def fourier_blocks(p: GroupParams) -> np.ndarray:
    """All ``n`` blocks as one ``(n, m, m)`` complex array."""
    blocks = omega_matrices(np.arange(p.n), p)
    diag = _cos_frac(np.arange(p.m), p.m)
    idx = np.arange(p.m)
    blocks[:, idx, idx] += diag
    return blocks


def fourier_block(i: int, p: GroupParams) -> HermitianBlock:
    if not 0 <= i < p.n:
        raise ParameterError("label-range", f"block index {i} outside [0, {p.n - 1}]")
    entries = omega_matrix(i, p)
    entries[np.diag_indices(p.m)] += _cos_frac(np.arange(p.m), p.m)
    return HermitianBlock(i, entries)


# -- numeric conjugation (independent of the closed form) --------------------

def fourier_conjugate(dense: np.ndarray, p: GroupParams) -> np.ndarray:
    """``(F_n (x) G_m) A (F_n (x) G_m)^*`` computed with FFTs along the packet axis."""
    n, m = p.n, p.m
    g = np.exp(-2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m) / math.sqrt(m)
    a4 = np.asarray(dense, dtype=complex).reshape(n, m, n, m)
    # left factor: sum_i w^{p i} A[i] == n * ifft over the packet axis
    y = np.fft.ifft(a4, axis=0) * math.sqrt(n)
    y = np.einsum("ca,pajb->pcjb", g, y)
    # right factor: sum_j Y[.., j, ..] w^{-q j}
    z = np.fft.fft(y, axis=2) / math.sqrt(n)
    z = np.einsum("pcjb,db->pcjd", z, g.conj())
    return z.reshape(n * m, n * m)


def split_blocks(conj: np.ndarray, p: GroupParams) -> tuple[np.ndarray, float]:
    """Diagonal blocks of a conjugated matrix and the Frobenius norm of the rest."""
    n, m = p.n, p.m
    z = conj.reshape(n, m, n, m)
    idx = np.arange(n)
    blocks = z[idx, :, idx, :].copy()
    rest = z.copy()
    rest[idx, :, idx, :] = 0.0
    return blocks, float(np.linalg.norm(rest))


@dataclass(frozen=True)
class ConjugationCheck:
    off_block_residual: float
    max_block_deviation: float


def verify_blocks(p: GroupParams, dense: np.ndarray | None = None) -> ConjugationCheck:
    """Compare the closed-form blocks with a numeric conjugation of the dense graph."""
    if dense is None:
        from .graph import build_bruteforce

        dense = build_bruteforce(p).dense
    numeric, residual = split_blocks(fourier_conjugate(dense, p), p)
    deviation = float(np.abs(numeric - fourier_blocks(p)).max())
    return ConjugationCheck(residual, deviation)


def diagonalize_full(p: GroupParams, verify: bool = False) -> list[HermitianBlock]:
    """The ``n`` Fourier blocks; ``verify`` cross-checks them against the dense route."""
    if verify:
        check = verify_blocks(p)
        if check.off_block_residual > RESIDUAL_TOL:
            raise StructureError(f"{p}: off-block residual {check.off_block_residual:.3e}")
        if check.max_block_deviation > RESIDUAL_TOL:
            raise StructureError(f"{p}: closed-form blocks deviate by {check.max_block_deviation:.3e}")
    return [HermitianBlock(i, b) for i, b in enumerate(fourier_blocks(p))]


# -- eigenvalues --------------------------------------------------------------

def _check_hermitian(entries: np.ndarray):
    if entries.ndim < 2 or entries.shape[-1] != entries.shape[-2]:
        raise ParameterError("not-square", f"expected square matrices, got shape {entries.shape}")
    scale = max(1.0, float(np.abs(entries).max(initial=0.0)))
    skew = float(np.abs(entries - np.conj(np.swapaxes(entries, -1, -2))).max(initial=0.0))
    if skew > HERMITIAN_TOL * scale:
        raise ParameterError("not-hermitian", f"matrix is not Hermitian (deviation {skew:.3e})")


def hermitian_eigenvalues(block: HermitianBlock | np.ndarray) -> np.ndarray:
    """Ascending eigenvalues via cyclic Jacobi."""
    entries = block.entries if isinstance(block, HermitianBlock) else np.asarray(block)
    _check_hermitian(entries)
    return jacobi_eigvalsh_batch(np.ascontiguousarray(entries, dtype=complex)[None])[0]


def batch_eigenvalues(blocks: np.ndarray) -> np.ndarray:
    blocks = np.ascontiguousarray(blocks, dtype=complex)
    _check_hermitian(blocks)
    return jacobi_eigvalsh_batch(blocks)


def block_spectra(p: GroupParams) -> np.ndarray:
    """``(n, m)`` eigenvalues, row ``i`` from block ``i``."""
    return batch_eigenvalues(fourier_blocks(p))


def _drop_nearest(values: np.ndarray, target: float) -> int:
    pos = int(np.argmin(np.abs(values - target)))
    if abs(values[pos] - target) > TRIVIAL_TOL:
        raise StructureError(f"trivial eigenvalue {target:+g} missing (closest {values[pos]:.12g})")
    return pos


def lambda_with_witness(eigenvalues, bipartite: bool, block_of=None) -> tuple[float, int | None]:
    """Largest nontrivial |eigenvalue| and the block it came from (if known)."""
    values = np.asarray(eigenvalues, dtype=float).ravel()
    blocks = None if block_of is None else np.asarray(block_of).ravel()
    keep = np.ones(values.size, dtype=bool)
    keep[_drop_nearest(values, 4.0)] = False
    if bipartite:
        masked = np.where(keep, values, np.inf)
        keep[_drop_nearest(masked, -4.0)] = False
    if not keep.any():
        return 0.0, None
    rest = np.flatnonzero(keep)
    best = rest[np.argmax(np.abs(values[rest]))]
    return float(abs(values[best])), (None if blocks is None else int(blocks[best]))


def lambda_of(eigenvalues, bipartite: bool) -> float:
    return lambda_with_witness(eigenvalues, bipartite)[0]


# -- reports ----------------------------------------------------------------

@dataclass
class SpectralReport:
    params: GroupParams
    bipartite: bool
    ramanujan: bool
    boundary: bool
    witness_blocks: dict[float, int]
    _block_eigs: np.ndarray | None = field(default=None, repr=False)
    _lambda: float | None = field(default=None, repr=False)

    @property
    def block_eigenvalues(self) -> np.ndarray:
        if self._block_eigs is None:
            self._block_eigs = block_spectra(self.params)
        return self._block_eigs

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.sort(self.block_eigenvalues.ravel())

    @property
    def lambda_x(self) -> float:
        if self._lambda is None:
            eigs = self.block_eigenvalues
            owners = np.repeat(np.arange(eigs.shape[0]), eigs.shape[1])
            self._lambda, _ = lambda_with_witness(eigs, self.bipartite, owners)
        return self._lambda

    def as_dict(self) -> dict:
        p = self.params
        return {
            "m": p.m, "n": p.n, "k": p.k, "alpha": p.alpha, "t": p.t_period,
            "regular": p.regular, "bipartite": self.bipartite,
            "lambda": self.lambda_x, "ramanujan": self.ramanujan, "boundary": self.boundary,
        }


def ramanujan_check(p: GroupParams, tol: float = DEFAULT_TOL, fast_path: bool = True,
                    allow_torus: bool = False) -> SpectralReport:
    """Ramanujan verdict for ``T(m, n, k)``.

    For ``m > 8`` block 0 already holds ``2 + 2cos(2 pi / m) > 2 sqrt 3`` so
    the verdict is settled without the other blocks; the full spectrum is
    still computed on first access to ``eigenvalues`` or ``lambda_x``.
    """
    from .graph import build_structured, is_bipartite

    if p.is_torus and not allow_torus:
        raise ParameterError("invalid-twist", f"k = {p.k} has order 1 mod {p.n}; a nontrivial twist is required")
    bipartite = is_bipartite(build_structured(p))

    if fast_path and p.m > 8:
        witness = 2.0 + 2.0 * math.cos(2.0 * math.pi / p.m)
        return SpectralReport(p, bipartite, False, abs(witness - RAMANUJAN_BOUND) <= tol, {witness: 0})

    eigs = block_spectra(p)
    owners = np.repeat(np.arange(p.n), p.m)
    lam, owner = lambda_with_witness(eigs, bipartite, owners)
    return SpectralReport(
        p, bipartite,
        ramanujan=lam <= RAMANUJAN_BOUND + tol,
        boundary=abs(lam - RAMANUJAN_BOUND) <= tol,
        witness_blocks={lam: owner},
        _block_eigs=eigs, _lambda=lam,
    )


def numeric_block_spectra(p: GroupParams) -> np.ndarray:
    """``(n, m)`` eigenvalues from the group-law block row, FFT and LAPACK.

    Shares nothing with the closed-form blocks or the Jacobi kernel.
    """
    from .graph import bruteforce_block_row

    row = bruteforce_block_row(p).astype(complex)
    g = np.exp(-2j * np.pi * np.outer(np.arange(p.m), np.arange(p.m)) / p.m) / math.sqrt(p.m)
    # block p of the conjugated matrix is G (sum_d A_0d w^(-p d)) G^*
    summed = np.fft.fft(row, axis=0)
    blocks = g[None] @ summed @ g.conj().T[None]
    return np.linalg.eigvalsh(blocks)


def dense_lambda(p: GroupParams, method: str = "full") -> float:
    """lambda(X) without the closed-form blocks.

    ``"full"`` eigensolves the dense brute-force matrix; ``"blocks"`` uses
    :func:`numeric_block_spectra` (much cheaper for large ``mn``).
    """
    from .graph import build_bruteforce, bruteforce_edges, is_bipartite
    from .kernels import bfs_two_coloring

    if method == "full":
        block = build_bruteforce(p)
        eigs = np.linalg.eigvalsh(block.dense.astype(float))
        return lambda_of(eigs, is_bipartite(block))
    if method == "blocks":
        _, dst, _ = bruteforce_edges(p)
        reached, bipartite = bfs_two_coloring(dst.reshape(4, p.order).T.copy())
        if reached != p.order:
            raise StructureError(f"{p} is disconnected")
        return lambda_of(numeric_block_spectra(p), bipartite)
    raise ParameterError("invalid-method", f"unknown method {method!r}")


def write_spectrum_csv(report: SpectralReport, fh: io.TextIOBase):
    fh.write("block_index,eigenvalue\n")
    for i, row in enumerate(report.block_eigenvalues):
        for value in row:
            fh.write(f"{i},{value:.12g}\n")


def report_json(report: SpectralReport) -> str:
    return json.dumps(report.as_dict())
