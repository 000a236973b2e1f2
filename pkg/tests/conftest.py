"""Shared fixtures: the three worked example systems, random generators, and
an allpass-cascade builder for inner transfer functions."""

from __future__ import annotations

import numpy as np
import pytest

from riccati_kyp import (
    BlockNonneg,
    SystemRealization,
    psd_sqrt,
    range_projector,
    spectral_norm,
    system_matrix,
)


@pytest.fixture
def scalar_interval_system() -> SystemRealization:
    """Scalar system whose equality set is the point 3/64 and whose
    inequality set is the interval [3/64, 3/4]."""
    return SystemRealization(-0.125, 1.0, 0.1875, 0.5)


@pytest.fixture
def two_state_system() -> SystemRealization:
    """Two-state passive system with exactly four equality solutions."""
    a, b = 3.0 / 5.0, 4.0 / 5.0
    return SystemRealization([[0, a], [b, 0]], [[0], [a]], [[0, b]], [[0]])


@pytest.fixture
def coisometry_system() -> SystemRealization:
    """One-state, two-input system whose block matrix is a co-isometry; its
    transfer function is co-inner but not inner."""
    return SystemRealization([[0.0]], [[1.0, 0.0]], [[1.0]], [[0.0, 0.0]])


def two_state_re_solutions() -> list[np.ndarray]:
    """The four closed-form equality solutions of the two-state example,
    ordered: identity, the two incomparable ones, the diagonal maximal one."""
    a, b = 3.0 / 5.0, 4.0 / 5.0
    off = (b - a) * np.sqrt(b / a)
    h2 = (1.0 / a**2) * np.array([[(1 - a * b) * (b / a), off], [off, 1 - a * b]])
    h3 = (1.0 / a**2) * np.array([[(1 - a * b) * (b / a), -off], [-off, 1 - a * b]])
    h4 = (1.0 / a**4) * np.diag([b**4, a**2 * b**2])
    return [np.eye(2), h2, h3, h4]


def random_realization(
    rng: np.random.Generator, n: int, m: int, p: int, passive_norm: float | None = None
) -> SystemRealization:
    """Random complex realization; when ``passive_norm`` is given, the block
    matrix is rescaled to that norm."""
    scale = 1.0 / np.sqrt(2.0 * n)
    mats = [
        scale * (rng.standard_normal(s) + 1j * rng.standard_normal(s))
        for s in ((n, n), (n, m), (p, n), (p, m))
    ]
    sigma = SystemRealization(*mats)
    if passive_norm is not None:
        factor = passive_norm / spectral_norm(system_matrix(sigma))
        sigma = SystemRealization(*(factor * mat for mat in mats))
    return sigma


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def random_pd(rng: np.random.Generator, n: int, floor: float = 0.1) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g @ g.conj().T / n + floor * np.eye(n)


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    r = n if rank is None else rank
    g = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    return g @ g.conj().T


def random_block_nonneg(
    rng: np.random.Generator, n: int, m: int, deficient: bool = False
) -> tuple[BlockNonneg, np.ndarray]:
    """A PSD block operator built from a known projected contraction, which
    the factorization must recover exactly. Returns (block, contraction)."""
    rank_a = int(rng.integers(1, n + 1)) if deficient else n
    rank_d = int(rng.integers(1, m + 1)) if deficient else m
    alpha = random_psd(rng, n, rank_a)
    delta = random_psd(rng, m, rank_d)
    proj_a = range_projector(alpha)
    proj_d = range_projector(delta)
    g = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    gamma = proj_d @ g @ proj_a
    norm = spectral_norm(gamma)
    if norm > 0:
        gamma = gamma * (float(rng.uniform(0.2, 0.95)) / norm)
    beta = (psd_sqrt(delta) @ gamma @ psd_sqrt(alpha)).conj().T
    return BlockNonneg(alpha=alpha, beta=beta, delta=delta), gamma


def allpass_section(zero: complex) -> SystemRealization:
    """Degree-one allpass factor with unitary block matrix; |zero| < 1."""
    zero = complex(zero)
    r = np.sqrt(1.0 - abs(zero) ** 2)
    return SystemRealization([[np.conj(zero)]], [[r]], [[r]], [[-zero]])


def cascade(first: SystemRealization, second: SystemRealization) -> SystemRealization:
    """Series connection: the output of ``first`` drives ``second``."""
    n1, n2 = first.state_dim, second.state_dim
    a = np.block(
        [[first.a, np.zeros((n1, n2))], [second.b @ first.c, second.a]]
    )
    b = np.vstack([first.b, second.b @ first.d])
    c = np.hstack([second.d @ first.c, second.c])
    d = second.d @ first.d
    return SystemRealization(a, b, c, d)


def blaschke_system(
    zeros: list[complex], similarity: np.ndarray | None = None
) -> SystemRealization:
    """Minimal realization of a finite product of allpass factors, optionally
    conjugated by a state-space similarity."""
    sigma = allpass_section(zeros[0])
    for zero in zeros[1:]:
        sigma = cascade(sigma, allpass_section(zero))
    if similarity is not None:
        t = np.asarray(similarity, dtype=complex)
        t_inv = np.linalg.inv(t)
        sigma = SystemRealization(t @ sigma.a @ t_inv, t @ sigma.b, sigma.c @ t_inv, sigma.d)
    return sigma


def random_similarity(rng: np.random.Generator, n: int, strength: float = 0.3) -> np.ndarray:
    return np.eye(n) + strength * (
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    )
