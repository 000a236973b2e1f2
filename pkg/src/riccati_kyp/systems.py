"""Discrete-time linear system realizations.

A realization is the quadruple (A, B, C, D) of the recursion

    x[k+1] = A x[k] + B u[k]
    y[k]   = C x[k] + D u[k]

with complex state, input and output spaces of dimensions n, m, p. The module
provides the block system matrix, transfer-function evaluation, controllable
and unobservable subspaces, minimality and passivity checks, a grid bound on
the transfer-function norm over a sub-disc, the adjoint system, trajectory
simulation and per-step dissipation margins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPD, SingularResolvent
from .linops import ensure_hermitian, spectral_norm

__all__ = [
    "SystemRealization",
    "system_matrix",
    "TransferSample",
    "transfer_eval",
    "controllable_subspace",
    "unobservable_subspace",
    "MinimalityReport",
    "is_minimal",
    "adjoint",
    "PassivityReport",
    "is_passive",
    "schur_class_margin",
    "Trajectory",
    "simulate",
    "dissipation_check",
]


@dataclass
class SystemRealization:
    """State-space quadruple (A, B, C, D) over complex scalars.

    Shapes: A is n x n, B is n x m, C is p x n, D is p x m. Scalars and
    one-dimensional arrays are promoted to matrices, and everything is stored
    as complex even for real data.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.a = np.atleast_2d(np.asarray(self.a, dtype=complex))
        self.b = np.atleast_2d(np.asarray(self.b, dtype=complex))
        self.c = np.atleast_2d(np.asarray(self.c, dtype=complex))
        self.d = np.atleast_2d(np.asarray(self.d, dtype=complex))
        n = self.a.shape[0]
        if self.a.shape != (n, n):
            raise DimensionMismatch(f"state operator must be square, got {self.a.shape}")
        if self.b.shape[0] != n:
            raise DimensionMismatch(
                f"input operator has {self.b.shape[0]} rows, expected {n}"
            )
        if self.c.shape[1] != n:
            raise DimensionMismatch(
                f"output operator has {self.c.shape[1]} columns, expected {n}"
            )
        if self.d.shape != (self.c.shape[0], self.b.shape[1]):
            raise DimensionMismatch(
                f"feed-through has shape {self.d.shape}, expected "
                f"{(self.c.shape[0], self.b.shape[1])}"
            )
        for name, mat in (("A", self.a), ("B", self.b), ("C", self.c), ("D", self.d)):
            if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
                raise ValueError(f"{name} contains non-finite entries")

    @property
    def state_dim(self) -> int:
        return self.a.shape[0]

    @property
    def input_dim(self) -> int:
        return self.b.shape[1]

    @property
    def output_dim(self) -> int:
        return self.c.shape[0]


def system_matrix(sigma: SystemRealization) -> np.ndarray:
    """Assemble the block operator [[A, B], [C, D]] mapping X+U to X+Y."""
    return np.block([[sigma.a, sigma.b], [sigma.c, sigma.d]])


@dataclass
class TransferSample:
    """Transfer-function value D + lam C (I - lam A)^{-1} B at one point."""

    lam: complex
    value: np.ndarray
    norm: float


def transfer_eval(
    sigma: SystemRealization, lam: complex, singular_tol: float = 1e-12
) -> TransferSample:
    """Evaluate the transfer function at ``lam``.

    Raises SingularResolvent when I - lam A is singular to within
    ``singular_tol`` (relative smallest singular value), i.e. ``lam`` sits at
    or too close to a pole of the realization.
    """
    lam = complex(lam)
    n = sigma.state_dim
    resolvent = np.eye(n) - lam * sigma.a
    svals = np.linalg.svd(resolvent, compute_uv=False)
    if svals.size and float(svals[-1]) <= singular_tol * float(svals[0]):
        raise SingularResolvent(lam)
    value = sigma.d + lam * (sigma.c @ np.linalg.solve(resolvent, sigma.b))
    return TransferSample(lam=lam, value=value, norm=spectral_norm(value))


def _krylov_block(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[B, AB, ..., A^{n-1}B]; powers beyond n-1 add nothing by
    Cayley-Hamilton."""
    n = a.shape[0]
    blocks = []
    cur = b
    for _ in range(max(n, 1)):
        blocks.append(cur)
        cur = a @ cur
    return np.hstack(blocks)


def controllable_subspace(sigma: SystemRealization, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the span of {A^k B : 0 <= k <= n-1}.

    Rank decisions use singular values against ``tol`` times the largest one.
    Returns an n x r matrix; r = 0 yields an empty basis.
    """
    k = _krylov_block(sigma.a, sigma.b)
    u, s, _ = np.linalg.svd(k, full_matrices=False)
    if s.size == 0 or float(s[0]) == 0.0:
        return np.zeros((sigma.state_dim, 0), dtype=complex)
    rank = int(np.count_nonzero(s > tol * float(s[0])))
    return u[:, :rank]


def unobservable_subspace(sigma: SystemRealization, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the intersection of ker(C A^k), 0 <= k <= n-1.

    Dual of :func:`controllable_subspace` applied to (A*, C*): the
    unobservable subspace is the orthogonal complement of the range of the
    observability block matrix.
    """
    obs = _krylov_block(sigma.a.conj().T, sigma.c.conj().T).conj().T
    _, s, vh = np.linalg.svd(obs, full_matrices=True)
    if s.size == 0 or float(s[0]) == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol * float(s[0])))
    return vh[rank:].conj().T


@dataclass
class MinimalityReport:
    """Controllability/observability verdict with subspace dimensions."""

    minimal: bool
    controllable_dim: int
    unobservable_dim: int
    state_dim: int

    def __bool__(self) -> bool:
        return self.minimal


def is_minimal(sigma: SystemRealization, tol: float = 1e-10) -> MinimalityReport:
    """True iff the controllable subspace is the whole state space and the
    unobservable subspace is trivial, both decided at tolerance ``tol``."""
    cdim = controllable_subspace(sigma, tol).shape[1]
    udim = unobservable_subspace(sigma, tol).shape[1]
    return MinimalityReport(
        minimal=(cdim == sigma.state_dim and udim == 0),
        controllable_dim=cdim,
        unobservable_dim=udim,
        state_dim=sigma.state_dim,
    )


def adjoint(sigma: SystemRealization) -> SystemRealization:
    """The adjoint system (A*, C*, B*, D*) with input and output spaces
    swapped."""
    return SystemRealization(
        a=sigma.a.conj().T,
        b=sigma.c.conj().T,
        c=sigma.b.conj().T,
        d=sigma.d.conj().T,
    )


@dataclass
class PassivityReport:
    """Contraction verdict for the system matrix, with margin 1 - ||M||."""

    passive: bool
    margin: float
    system_norm: float

    def __bool__(self) -> bool:
        return self.passive


def is_passive(sigma: SystemRealization, tol: float = 1e-10) -> PassivityReport:
    """True iff the system matrix is a contraction within ``tol``."""
    norm = spectral_norm(system_matrix(sigma))
    return PassivityReport(passive=norm <= 1.0 + tol, margin=1.0 - norm, system_norm=norm)


def schur_class_margin(
    sigma: SystemRealization,
    grid_steps: int = 48,
    radius: float = 0.999,
    singular_tol: float = 1e-12,
) -> float:
    """Largest transfer-function norm over a polar grid of the disc
    ``|lam| <= radius``.

    This is a grid certificate, not a proof: the value bounds the norm only at
    the sampled points. Grid points with a numerically singular resolvent
    abort with SingularResolvent carrying the offending point; skipping them
    silently could mask norm blow-up near a pole.
    """
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie strictly between 0 and 1")
    if grid_steps < 1:
        raise ValueError("grid_steps must be positive")
    radii = np.linspace(radius / grid_steps, radius, grid_steps)
    angles = 2.0 * np.pi * np.arange(grid_steps) / grid_steps
    lams = np.concatenate(
        [[0.0 + 0.0j], (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()]
    )

    n = sigma.state_dim
    resolvents = np.eye(n)[None, :, :] - lams[:, None, None] * sigma.a[None, :, :]
    svals = np.linalg.svd(resolvents, compute_uv=False)
    bad = svals[:, -1] <= singular_tol * svals[:, 0]
    if np.any(bad):
        raise SingularResolvent(complex(lams[int(np.argmax(bad))]))
    rhs = np.broadcast_to(sigma.b, (lams.size, n, sigma.input_dim))
    x = np.linalg.solve(resolvents, rhs)
    values = sigma.d[None, :, :] + lams[:, None, None] * (sigma.c @ x)
    norms = np.linalg.svd(values, compute_uv=False)[:, 0]
    return float(norms.max())


@dataclass
class Trajectory:
    """A rollout: states x[0..N], inputs u[0..N-1], outputs y[0..N-1]."""

    states: np.ndarray
    inputs: np.ndarray
    outputs: np.ndarray

    @property
    def steps(self) -> int:
        return self.inputs.shape[0]


def simulate(
    sigma: SystemRealization, x0: np.ndarray, inputs: np.ndarray
) -> Trajectory:
    """Roll the recursion out exactly over the given input sequence."""
    x0 = np.asarray(x0, dtype=complex).reshape(-1)
    if x0.shape[0] != sigma.state_dim:
        raise DimensionMismatch(
            f"x0 has length {x0.shape[0]}, expected {sigma.state_dim}"
        )
    u = np.atleast_2d(np.asarray(inputs, dtype=complex))
    if u.shape[1] != sigma.input_dim:
        raise DimensionMismatch(
            f"inputs have width {u.shape[1]}, expected {sigma.input_dim}"
        )
    steps = u.shape[0]
    states = np.zeros((steps + 1, sigma.state_dim), dtype=complex)
    outputs = np.zeros((steps, sigma.output_dim), dtype=complex)
    states[0] = x0
    for k in range(steps):
        outputs[k] = sigma.c @ states[k] + sigma.d @ u[k]
        states[k + 1] = sigma.a @ states[k] + sigma.b @ u[k]
    return Trajectory(states=states, inputs=u.copy(), outputs=outputs)


def dissipation_check(
    trajectory: Trajectory, h: np.ndarray, tol: float = 1e-10
) -> np.ndarray:
    """Per-step storage margins along a trajectory for the weight ``h``.

    Margin at step k is ``||u_k||^2 - ||y_k||^2 - (x_{k+1}* H x_{k+1} -
    x_k* H x_k)``. When ``h`` satisfies the inequality conditions for the
    system that produced the trajectory, every margin is >= -tol.

    Raises NotPD when ``h`` is not positive definite.
    """
    h = ensure_hermitian(h)
    w = np.linalg.eigvalsh(h)
    if w.size == 0 or float(w[0]) <= 0.0:
        raise NotPD("storage weight must be positive definite")
    x = trajectory.states
    if x.shape[1] != h.shape[0]:
        raise DimensionMismatch(
            f"weight dimension {h.shape[0]} does not match state dimension {x.shape[1]}"
        )
    energy = np.real(np.einsum("ki,ij,kj->k", x.conj(), h, x))
    supply = np.sum(np.abs(trajectory.inputs) ** 2, axis=1) - np.sum(
        np.abs(trajectory.outputs) ** 2, axis=1
    )
    return supply - (energy[1:] - energy[:-1])
