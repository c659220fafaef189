import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from src.model import QuadratureSystem

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10


def _orth(matrix: np.ndarray, tol: float) -> np.ndarray:
    if matrix.size == 0:
        return np.zeros((matrix.shape[0], 0))
    u, sv, _ = linalg.svd(matrix, full_matrices=False)
    return u[:, : int(np.sum(sv > tol))]


def _krylov_basis(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """
    Orthonormal basis of span{b, ab, a^2 b, ...} by a block staircase.

    ``a`` and ``b`` are expected to be normalized so that ``tol`` acts as a
    relative threshold.
    """
    n = a.shape[0]
    basis = _orth(b, tol)
    block = basis
    while block.shape[1] and basis.shape[1] < n:
        w = a @ block
        for _ in range(2):
            w = w - basis @ (basis.T @ w)
        block = _orth(w, tol)
        basis = np.hstack([basis, block])
    return basis


def _normalized(matrix: np.ndarray) -> np.ndarray:
    """Scale every nonzero column to unit norm."""
    norms = np.linalg.norm(matrix, axis=0)
    keep = norms > 0
    return matrix[:, keep] / norms[keep]


def _complement(basis: np.ndarray, n: int) -> np.ndarray:
    if basis.shape[1] == 0:
        return np.eye(n)
    if basis.shape[1] == n:
        return np.zeros((n, 0))
    return linalg.null_space(basis.T)


@dataclass(frozen=True)
class MinimalRealization:
    """
    Controllable and observable part of a system, in an orthonormal basis.

    ``hidden`` holds the drift eigenvalues (rates, not frequencies) removed
    as uncontrollable or unobservable.
    """

    drift: np.ndarray
    input_map: np.ndarray
    output_map: np.ndarray
    feedthrough: np.ndarray
    signal_map: np.ndarray
    hidden: np.ndarray

    @property
    def order(self) -> int:
        return self.drift.shape[0]


def minimal_realization(system: QuadratureSystem) -> MinimalRealization:
    """
    Remove the uncontrollable and unobservable modes of ``system``.

    Controllability is taken jointly from the noise inputs and the signal
    injection; observability from the readout rows.
    """
    a = system.drift
    n = a.shape[0]
    scale = np.linalg.norm(a) or 1.0
    a_scaled = a / scale

    drive = np.hstack([system.input_map, system.signal_map[:, None]])
    v_c = _krylov_basis(a_scaled, _normalized(drive), RANK_TOL)
    v_u = _complement(v_c, n)
    hidden = [linalg.eigvals(v_u.T @ a @ v_u)] if v_u.shape[1] else []

    a_c = v_c.T @ a @ v_c
    b_c = v_c.T @ system.input_map
    s_c = v_c.T @ system.signal_map
    c_c = system.output_map @ v_c

    r = a_c.shape[0]
    v_o = _krylov_basis(a_c.T / scale, _normalized(c_c.T), RANK_TOL)
    v_n = _complement(v_o, r)
    if v_n.shape[1]:
        hidden.append(linalg.eigvals(v_n.T @ a_c @ v_n))

    hidden_eigs = (
        np.concatenate(hidden) if hidden else np.zeros(0, dtype=complex)
    )
    logger.debug(
        f"Minimal realization: order {v_o.shape[1]} of {n}, "
        f"{hidden_eigs.size} hidden"
    )
    return MinimalRealization(
        drift=v_o.T @ a_c @ v_o,
        input_map=v_o.T @ b_c,
        output_map=c_c @ v_o,
        feedthrough=system.feedthrough,
        signal_map=v_o.T @ s_c,
        hidden=hidden_eigs.astype(complex),
    )
