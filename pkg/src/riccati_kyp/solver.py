"""Solution-set computation for the Riccati equality, extremal storage
operators, and the adjoint-inversion duality.

The equality is solved through the augmented feedback form: H satisfies the
equality conditions exactly when there is a K with

    beta(H) = delta(H) K      and      alpha(H) = K* delta(H) K,

together with H positive definite and delta(H) PSD. The augmented system is
polynomial in (H, K), so Newton iteration on it stays smooth across rank
changes of delta and reaches boundary solutions (delta singular) that a
pseudo-inverse formulation would make non-differentiable. Converged points
are validated through the membership test, deduplicated, and ordered
deterministically.

The minimal storage operator is computed by the monotone fixed-point
iteration H <- A* H A + C* C + beta(H)* pinv(delta(H)) beta(H) started from
zero, Newton-polished, and certified against rejection-sampled inequality
members. The maximal one is the inverse of the adjoint system's minimal one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    CertificateFailed,
    IterationDiverged,
    NoConvergence,
    NotMinimal,
    NotPD,
    NotScalar,
    SingularResolvent,
)
from .linops import Loewner, hermitian_part, loewner_compare, spectral_norm
from .riccati import (
    StorageOperator,
    _pinv_psd_part,
    as_storage,
    membership,
)
from .systems import SystemRealization, adjoint, is_minimal, schur_class_margin

__all__ = [
    "SolverConfig",
    "SolutionSet",
    "DualityReport",
    "re_residual_norm",
    "solve_re_scalar",
    "solve_re",
    "minimal_solution",
    "maximal_solution",
    "duality_check",
    "order_solutions",
    "sample_ri_members",
]


@dataclass
class SolverConfig:
    """Knobs for the equality solver and the extremal-solution routines."""

    max_dim: int = 6
    starts: int = 30
    iter_tol: float = 1e-12
    dedup_tol: float = 1e-7
    seed: int = 0
    max_iter: int = 60
    fp_max_iter: int = 10000
    newton_tol: float = 1e-12
    membership_tol: float = 1e-9
    equality_tol: float = 1e-8
    certificate_samples: int = 40
    duality_samples: int = 50
    validate_against_re: bool = True
    certificate_re_dim_cap: int = 3
    check_schur: bool = True
    schur_radius: float = 0.95
    schur_grid: int = 24


@dataclass
class SolutionSet:
    """Storage operators found by a solver, with pairwise order data.

    ``comparisons`` maps index pairs (i, j), i < j, to Loewner verdicts.
    ``minimal_index``/``maximal_index`` are set when one member is below /
    above every other member. ``provenance`` records, per member, the solver
    route, the final residual norm, and the iteration count.
    """

    members: list[StorageOperator] = field(default_factory=list)
    comparisons: dict[tuple[int, int], Loewner] = field(default_factory=dict)
    minimal_index: int | None = None
    maximal_index: int | None = None
    provenance: list[dict] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)


def _residual_ops(sigma: SystemRealization, h: np.ndarray):
    """alpha, beta, delta for an arbitrary Hermitian weight (no positivity
    requirement; the solver walks through indefinite territory)."""
    a, b, c, d = sigma.a, sigma.b, sigma.c, sigma.d
    alpha = hermitian_part(h - a.conj().T @ h @ a - c.conj().T @ c)
    beta = d.conj().T @ c + b.conj().T @ h @ a
    delta = hermitian_part(
        np.eye(sigma.input_dim) - d.conj().T @ d - b.conj().T @ h @ b
    )
    return alpha, beta, delta


def re_residual_norm(sigma: SystemRealization, h, rank_tol: float = 1e-12) -> float:
    """Norm of ``alpha - beta* pinv(delta) beta`` at ``h``; zero at equality
    solutions. Accepts any Hermitian weight, definite or not."""
    if isinstance(h, StorageOperator):
        hm = h.matrix
    else:
        hm = hermitian_part(np.atleast_2d(np.asarray(h, dtype=complex)))
    alpha, beta, delta = _residual_ops(sigma, hm)
    pinv = _pinv_psd_part(delta, rank_tol)
    return spectral_norm(alpha - beta.conj().T @ pinv @ beta)


# -- augmented Newton ---------------------------------------------------------


def _herm_pack(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    out = np.empty(n * n)
    out[:n] = np.real(np.diag(m))
    idx = n
    for i in range(n):
        for j in range(i + 1, n):
            out[idx] = m[i, j].real
            out[idx + 1] = m[i, j].imag
            idx += 2
    return out


def _herm_unpack(vec: np.ndarray, n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    np.fill_diagonal(m, vec[:n])
    idx = n
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = vec[idx] + 1j * vec[idx + 1]
            m[j, i] = vec[idx] - 1j * vec[idx + 1]
            idx += 2
    return m


def _herm_directions(n: int) -> list[np.ndarray]:
    dirs = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        dirs.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            e[j, i] = 1.0
            dirs.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0j
            e[j, i] = -1.0j
            dirs.append(e)
    return dirs


def _k_directions(m: int, n: int) -> list[np.ndarray]:
    dirs = []
    for unit in (1.0, 1.0j):
        for i in range(m):
            for j in range(n):
                f = np.zeros((m, n), dtype=complex)
                f[i, j] = unit
                dirs.append(f)
    return dirs


def _aug_residual(sigma: SystemRealization, h: np.ndarray, k: np.ndarray):
    alpha, beta, delta = _residual_ops(sigma, h)
    phi1 = hermitian_part(alpha - k.conj().T @ delta @ k)
    phi2 = beta - delta @ k
    return phi1, phi2, delta


def _pack_residual(phi1: np.ndarray, phi2: np.ndarray) -> np.ndarray:
    return np.concatenate(
        [_herm_pack(phi1), phi2.real.ravel(), phi2.imag.ravel()]
    )


def _newton_equality(
    sigma: SystemRealization,
    h0: np.ndarray,
    tol: float,
    max_iter: int,
):
    """Damped Newton iteration on the augmented equality system.

    Returns (h, residual_norm, iterations, converged). Rank-deficient
    Jacobians (delta singular at the solution) are handled by least-squares
    steps.
    """
    n, m = sigma.state_dim, sigma.input_dim
    a_mat, b_mat = sigma.a, sigma.b
    h = hermitian_part(h0)
    _, beta0, delta0 = _residual_ops(sigma, h)
    k = _pinv_psd_part(delta0, 1e-12) @ beta0

    h_dirs = _herm_directions(n)
    k_dirs = _k_directions(m, n)
    dim = len(h_dirs) + len(k_dirs)

    phi1, phi2, delta = _aug_residual(sigma, h, k)
    res = _pack_residual(phi1, phi2)
    res_norm = float(np.linalg.norm(res))
    iters = 0
    for iters in range(1, max_iter + 1):
        scale = 1.0 + float(np.linalg.norm(h))
        if res_norm <= tol * scale:
            return h, res_norm, iters - 1, True
        jac = np.empty((res.size, dim))
        col = 0
        for e in h_dirs:
            betab = b_mat.conj().T @ e @ b_mat
            d_phi1 = hermitian_part(
                e - a_mat.conj().T @ e @ a_mat + k.conj().T @ betab @ k
            )
            d_phi2 = b_mat.conj().T @ e @ a_mat + betab @ k
            jac[:, col] = _pack_residual(d_phi1, d_phi2)
            col += 1
        for f in k_dirs:
            d_phi1 = hermitian_part(
                -f.conj().T @ delta @ k - k.conj().T @ delta @ f
            )
            d_phi2 = -delta @ f
            jac[:, col] = _pack_residual(d_phi1, d_phi2)
            col += 1
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        step_h = _herm_unpack(step[: n * n], n)
        sk = step[n * n:]
        step_k = (sk[: m * n] + 1j * sk[m * n:]).reshape(m, n)

        damping = 1.0
        improved = False
        for _ in range(12):
            h_new = hermitian_part(h + damping * step_h)
            k_new = k + damping * step_k
            phi1, phi2, delta_new = _aug_residual(sigma, h_new, k_new)
            res_new = _pack_residual(phi1, phi2)
            new_norm = float(np.linalg.norm(res_new))
            if new_norm < res_norm:
                h, k, delta = h_new, k_new, delta_new
                res, res_norm = res_new, new_norm
                improved = True
                break
            damping *= 0.5
        if not improved:
            break
    scale = 1.0 + float(np.linalg.norm(h))
    return h, res_norm, iters, res_norm <= tol * scale


# -- fixed-point iteration ----------------------------------------------------


def _fixed_point_solve(
    sigma: SystemRealization,
    max_iter: int,
    tol: float,
    rank_tol: float = 1e-12,
    divergence_bound: float = 1e9,
):
    """Iterate H <- A* H A + C* C + beta* pinv(delta) beta from zero.

    The iterates increase monotonically toward the least inequality member
    whenever one exists; this convergence claim is validated empirically by
    certificates downstream, not assumed.
    """
    n = sigma.state_dim
    a_mat, c_mat = sigma.a, sigma.c
    h = np.zeros((n, n), dtype=complex)
    for it in range(1, max_iter + 1):
        _, beta, delta = _residual_ops(sigma, h)
        pinv = _pinv_psd_part(delta, rank_tol)
        h_next = hermitian_part(
            a_mat.conj().T @ h @ a_mat
            + c_mat.conj().T @ c_mat
            + beta.conj().T @ pinv @ beta
        )
        drift = spectral_norm(h_next - h)
        h = h_next
        if spectral_norm(h) > divergence_bound:
            raise IterationDiverged(
                f"fixed-point iterates exceeded {divergence_bound:.1e} in norm"
            )
        if drift <= tol * (1.0 + spectral_norm(h)):
            return h, it
    raise IterationDiverged(
        f"fixed-point iteration did not settle within {max_iter} steps"
    )


# -- sampling and certificates ------------------------------------------------


def _random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian_part(g / np.sqrt(2.0))


def sample_ri_members(
    sigma: SystemRealization,
    count: int,
    rng: np.random.Generator,
    anchors: list[np.ndarray],
    tol: float = 1e-9,
    require_margin: float | None = None,
    max_tries: int | None = None,
) -> list[np.ndarray]:
    """Rejection-sample inequality members around known ones.

    Candidates are Hermitian perturbations of convex combinations of the
    anchors; the feasible set is convex (it is cut out by a linear matrix
    inequality in H), so combinations of members stay inside and hit rates
    remain workable. The perturbation scale shrinks on rejection streaks,
    which keeps the sampler effective even when the member set is a single
    point. Anchors that pass the test are included in the output.
    """
    n = sigma.state_dim
    good_anchors = []
    for anc in anchors:
        try:
            verdict = membership(sigma, anc, tol=tol)
        except NotPD:
            continue
        if verdict.in_ri:
            good_anchors.append(hermitian_part(np.asarray(anc, dtype=complex)))
    if not good_anchors:
        return []

    samples = [anc.copy() for anc in good_anchors[: max(count, 1)]]
    spread = max(
        max(spectral_norm(x - y) for x in good_anchors for y in good_anchors),
        0.25 * max(spectral_norm(x) for x in good_anchors),
    )
    if max_tries is None:
        max_tries = 400 * count
    misses = 0
    tries = 0
    while len(samples) < count and tries < max_tries:
        tries += 1
        if len(good_anchors) >= 2:
            i, j = rng.integers(0, len(good_anchors), size=2)
            lam = rng.uniform()
            base = lam * good_anchors[i] + (1.0 - lam) * good_anchors[j]
        else:
            base = good_anchors[0]
        cand = hermitian_part(
            base + rng.uniform(0.0, 1.0) * spread * _random_hermitian(rng, n)
        )
        try:
            verdict = membership(sigma, cand, tol=tol)
        except NotPD:
            verdict = None
        accept = False
        if verdict is not None:
            if require_margin is None:
                accept = verdict.in_ri
            else:
                accept = verdict.diagnostics.lmi_min_eig >= require_margin
        if accept:
            samples.append(cand)
            misses = 0
        else:
            misses += 1
            if misses >= 25:
                spread *= 0.5
                misses = 0
    return samples[:count]


def _certify_extremal(
    sigma: SystemRealization,
    candidate: np.ndarray,
    side: str,
    config: SolverConfig,
    extra_members: list[np.ndarray] | None = None,
) -> None:
    """Check the candidate against sampled inequality members (and optional
    explicitly known members); raise CertificateFailed on any violation."""
    rng = np.random.default_rng(config.seed + (1 if side == "minimal" else 2))
    samples = sample_ri_members(
        sigma,
        config.certificate_samples,
        rng,
        anchors=[candidate],
        tol=config.membership_tol,
    )
    if extra_members:
        samples = samples + [np.asarray(m, dtype=complex) for m in extra_members]
    cmp_tol = 100.0 * config.membership_tol * max(1.0, spectral_norm(candidate))
    wanted = (
        (Loewner.LESS_EQUAL, Loewner.EQUAL)
        if side == "minimal"
        else (Loewner.GREATER_EQUAL, Loewner.EQUAL)
    )
    for idx, sample in enumerate(samples):
        verdict = loewner_compare(candidate, sample, tol=cmp_tol)
        if verdict not in wanted:
            raise CertificateFailed(
                f"sampled inequality member {idx} is not on the "
                f"{side}-certified side (got {verdict.value})"
            )


# -- public solvers -----------------------------------------------------------


def solve_re_scalar(sigma: SystemRealization, tol: float = 1e-9) -> SolutionSet:
    """Closed-form equality solutions for one-dimensional systems.

    On the region where delta(h) > 0, clearing the denominator of
    ``alpha(h) = |beta(h)|^2 / delta(h)`` leaves a real polynomial of degree
    at most two; its positive roots are screened through the membership test.
    The boundary point where delta vanishes is examined separately since the
    cleared polynomial does not decide it.
    """
    if not (sigma.state_dim == 1 and sigma.input_dim == 1 and sigma.output_dim == 1):
        raise NotScalar(
            f"closed form requires scalar dimensions, got "
            f"(n, m, p) = {(sigma.state_dim, sigma.input_dim, sigma.output_dim)}"
        )
    a = complex(sigma.a[0, 0])
    b = complex(sigma.b[0, 0])
    c = complex(sigma.c[0, 0])
    d = complex(sigma.d[0, 0])

    # alpha(h) = a1 h + a0, delta(h) = d1 h + d0, |beta(h)|^2 = q2 h^2 + q1 h + q0
    a1, a0 = 1.0 - abs(a) ** 2, -abs(c) ** 2
    d1, d0 = -abs(b) ** 2, 1.0 - abs(d) ** 2
    beta0 = np.conj(d) * c
    beta1 = np.conj(b) * a
    q2 = abs(beta1) ** 2
    q1 = 2.0 * float(np.real(np.conj(beta0) * beta1))
    q0 = abs(beta0) ** 2

    coeffs = np.array(
        [a1 * d1 - q2, a1 * d0 + a0 * d1 - q1, a0 * d0 - q0]
    )
    coeff_scale = max(1.0, float(np.abs(coeffs).max()))
    if float(np.abs(coeffs).max()) <= 1e-14 * coeff_scale:
        raise ValueError(
            "the equality degenerates to a continuum of solutions "
            "(uncontrollable and unobservable scalar system)"
        )

    candidates: list[float] = []
    nonzero = np.trim_zeros(coeffs, "f")
    if nonzero.size > 1:
        for root in np.roots(nonzero):
            if abs(root.imag) <= 1e-9 * (1.0 + abs(root.real)) and root.real > 1e-12:
                candidates.append(float(root.real))
    if abs(b) > 0:
        boundary = d0 / abs(b) ** 2  # where delta vanishes
        if boundary > 1e-12:
            candidates.append(float(boundary))

    members: list[StorageOperator] = []
    provenance: list[dict] = []
    for h in sorted(candidates):
        if any(abs(h - float(s.matrix[0, 0].real)) <= 1e-7 * (1.0 + h) for s in members):
            continue
        try:
            verdict = membership(sigma, h, tol=tol)
        except NotPD:
            continue
        if verdict.in_re:
            storage = as_storage(h)
            members.append(storage)
            provenance.append(
                {
                    "route": "scalar-closed-form",
                    "residual": re_residual_norm(sigma, storage.matrix),
                    "iterations": 0,
                }
            )
    return order_solutions(SolutionSet(members=members, provenance=provenance))


def _solution_sort_key(h: np.ndarray):
    return (
        float(np.real(np.trace(h))),
        tuple(h.real.ravel()),
        tuple(h.imag.ravel()),
    )


def solve_re(
    sigma: SystemRealization, config: SolverConfig | None = None
) -> SolutionSet:
    """Find equality solutions by multi-start Newton on the augmented system.

    Starts combine the fixed-point limit (the minimal candidate), the inverse
    of the adjoint's fixed-point limit (the maximal candidate), scaled
    identities, and seeded random Hermitian perturbations between the two
    extremal candidates. Converged points are membership-validated,
    deduplicated at ``dedup_tol * (1 + |trace|)``, and sorted by trace and
    then lexicographically by entries, so output order is independent of
    scheduling. The returned set is what was found; completeness is not
    claimed beyond the scalar closed form.
    """
    cfg = config or SolverConfig()
    n = sigma.state_dim
    if n > cfg.max_dim:
        raise ValueError(
            f"state dimension {n} exceeds the solver cap {cfg.max_dim}"
        )
    if not is_minimal(sigma):
        warnings.warn(
            "equality solving on a non-minimal system; solution structure "
            "theory assumes minimality",
            RuntimeWarning,
            stacklevel=2,
        )
    rng = np.random.default_rng(cfg.seed)

    anchors: list[np.ndarray] = []
    try:
        h_lo, _ = _fixed_point_solve(sigma, cfg.fp_max_iter, cfg.iter_tol)
        anchors.append(h_lo)
    except IterationDiverged:
        pass
    try:
        h_adj, _ = _fixed_point_solve(adjoint(sigma), cfg.fp_max_iter, cfg.iter_tol)
        w = np.linalg.eigvalsh(h_adj)
        if float(w[0]) > 1e-12 * max(float(np.abs(w).max()), 1.0):
            anchors.append(hermitian_part(np.linalg.inv(h_adj)))
    except IterationDiverged:
        pass

    eye = np.eye(n, dtype=complex)
    starts: list[np.ndarray] = list(anchors)
    starts.extend([eye, 0.25 * eye, 0.5 * eye, 2.0 * eye, 4.0 * eye])
    if len(anchors) == 2:
        starts.append(0.5 * (anchors[0] + anchors[1]))
        spread = max(spectral_norm(anchors[1] - anchors[0]), 0.1)
        base_lo, base_hi = anchors
    else:
        spread = 1.0
        base_lo = base_hi = anchors[0] if anchors else eye
    for _ in range(cfg.starts):
        lam = rng.uniform()
        base = lam * base_lo + (1.0 - lam) * base_hi
        starts.append(
            hermitian_part(
                base + rng.uniform(0.05, 0.6) * spread * _random_hermitian(rng, n)
            )
        )

    candidates: list[tuple[np.ndarray, float, int, str]] = []
    best_res = np.inf
    any_converged = False
    for idx, h0 in enumerate(starts):
        h, res, iters, ok = _newton_equality(
            sigma, h0, tol=cfg.newton_tol, max_iter=cfg.max_iter
        )
        best_res = min(best_res, res)
        if not ok:
            continue
        # polish: a short second pass at full precision
        h, res, extra, _ = _newton_equality(
            sigma, h, tol=1e-14, max_iter=6
        )
        any_converged = True
        candidates.append((h, res, iters + extra, f"newton(start={idx})"))
    if not any_converged:
        raise NoConvergence(best_res)

    validated: list[tuple[np.ndarray, float, int, str]] = []
    for h, res, iters, route in sorted(candidates, key=lambda t: t[1]):
        try:
            verdict = membership(
                sigma, h, tol=cfg.membership_tol, eq_tol=cfg.equality_tol
            )
        except NotPD:
            continue
        if not verdict.in_re:
            continue
        dup = any(
            spectral_norm(h - u[0])
            <= cfg.dedup_tol * (1.0 + abs(float(np.real(np.trace(u[0])))))
            for u in validated
        )
        if not dup:
            validated.append((h, res, iters, route))

    validated.sort(key=lambda t: _solution_sort_key(t[0]))
    members = [as_storage(h) for h, _, _, _ in validated]
    provenance = [
        {"route": route, "residual": res, "iterations": iters}
        for _, res, iters, route in validated
    ]
    return order_solutions(SolutionSet(members=members, provenance=provenance))


def _require_schur(sigma: SystemRealization, cfg: SolverConfig) -> None:
    try:
        margin = schur_class_margin(
            sigma, grid_steps=cfg.schur_grid, radius=cfg.schur_radius
        )
    except SingularResolvent as exc:
        raise IterationDiverged(
            f"transfer function has a pole inside the sampled disc ({exc}); "
            f"no inequality member can exist"
        ) from exc
    if margin > 1.0 + 1e-8:
        raise IterationDiverged(
            f"transfer-function norm reaches {margin:.6f} > 1 on the sampled "
            f"disc; no inequality member can exist"
        )


def minimal_solution(
    sigma: SystemRealization, config: SolverConfig | None = None
) -> StorageOperator:
    """The least storage operator among the inequality members.

    Runs the monotone fixed-point iteration from zero, Newton-polishes the
    limit, verifies equality membership (the minimal member always satisfies
    the equality), and certifies minimality against rejection-sampled
    inequality members plus, for small dimensions, the full equality solution
    set. The iteration's convergence to the least member is an empirical
    claim validated by these certificates; CertificateFailed means a genuine
    violation was observed, not a tolerance hiccup.
    """
    cfg = config or SolverConfig()
    if not is_minimal(sigma):
        raise NotMinimal("extremal solutions require a minimal system")
    if cfg.check_schur:
        _require_schur(sigma, cfg)

    h_fp, fp_iters = _fixed_point_solve(sigma, cfg.fp_max_iter, cfg.iter_tol)
    h, res, _, ok = _newton_equality(
        sigma, h_fp, tol=cfg.newton_tol, max_iter=cfg.max_iter
    )
    if not ok:
        h, res = h_fp, re_residual_norm(sigma, h_fp)

    try:
        storage = as_storage(h)
    except NotPD as exc:
        raise CertificateFailed(
            "fixed-point limit is not positive definite"
        ) from exc
    verdict = membership(
        sigma, storage, tol=cfg.membership_tol, eq_tol=cfg.equality_tol
    )
    if not verdict.in_re:
        raise CertificateFailed(
            f"fixed-point limit is not an equality solution "
            f"(equality residual {verdict.diagnostics.equality_residual:.3e})"
        )

    extra = None
    if cfg.validate_against_re and sigma.state_dim <= cfg.certificate_re_dim_cap:
        re_cfg = replace(cfg, validate_against_re=False, check_schur=False)
        extra = [m.matrix for m in solve_re(sigma, re_cfg).members]
    _certify_extremal(sigma, storage.matrix, "minimal", cfg, extra_members=extra)
    return storage


def maximal_solution(
    sigma: SystemRealization, config: SolverConfig | None = None
) -> StorageOperator:
    """The greatest storage operator among the inequality members.

    By the adjoint-inversion duality this is the inverse of the adjoint
    system's minimal solution; the result is certified from above against
    sampled inequality members of the original system.
    """
    cfg = config or SolverConfig()
    minimal_adj = minimal_solution(adjoint(sigma), cfg)
    h_max = hermitian_part(minimal_adj.inv_sqrt @ minimal_adj.inv_sqrt)
    storage = as_storage(h_max)
    extra = None
    if cfg.validate_against_re and sigma.state_dim <= cfg.certificate_re_dim_cap:
        re_cfg = replace(cfg, validate_against_re=False, check_schur=False)
        extra = [m.matrix for m in solve_re(sigma, re_cfg).members]
    _certify_extremal(sigma, storage.matrix, "maximal", cfg, extra_members=extra)
    return storage


@dataclass
class DualityReport:
    """Outcome of the adjoint-inversion checks.

    ``samples_ok[i]`` records whether the i-th sampled inequality member's
    inverse passed membership for the adjoint system. ``re_inversion_equal``
    records whether inverting the equality set reproduced the adjoint's
    equality set; the theory does not promise it does.
    """

    sample_count: int
    samples_ok: list[bool]
    failure_count: int
    re_inversion_equal: bool
    re_members: list[np.ndarray]
    re_adjoint_members: list[np.ndarray]


def _sets_match(
    first: list[np.ndarray], second: list[np.ndarray], tol: float
) -> bool:
    if len(first) != len(second):
        return False
    unused = list(range(len(second)))
    for f in first:
        hit = None
        for j in unused:
            if spectral_norm(f - second[j]) <= tol * (1.0 + spectral_norm(f)):
                hit = j
                break
        if hit is None:
            return False
        unused.remove(hit)
    return True


def duality_check(
    sigma: SystemRealization, config: SolverConfig | None = None
) -> DualityReport:
    """Verify inversion duality on samples and compare the equality sets.

    For sampled inequality members H of the system, checks that H^{-1} is an
    inequality member of the adjoint system with a minimal associated system.
    Also computes both equality sets and reports whether inversion maps one
    onto the other (it need not).
    """
    cfg = config or SolverConfig()
    if not is_minimal(sigma):
        raise NotMinimal("the duality statements assume a minimal system")
    adj = adjoint(sigma)

    h_min = minimal_solution(sigma, replace(cfg, validate_against_re=False))
    h_max = maximal_solution(sigma, replace(cfg, validate_against_re=False))
    rng = np.random.default_rng(cfg.seed + 7)
    samples = sample_ri_members(
        sigma,
        cfg.duality_samples,
        rng,
        anchors=[h_min.matrix, h_max.matrix],
        tol=cfg.membership_tol,
        require_margin=0.0,
    )

    samples_ok: list[bool] = []
    for h in samples:
        w, v = np.linalg.eigh(h)
        inv = hermitian_part((v / w) @ v.conj().T)
        try:
            verdict = membership(adj, inv, tol=cfg.membership_tol)
            samples_ok.append(bool(verdict.in_ri_circ))
        except NotPD:
            samples_ok.append(False)

    scalar = sigma.state_dim == 1 and sigma.input_dim == 1 and sigma.output_dim == 1
    if scalar:
        re_set = solve_re_scalar(sigma)
        re_adj = solve_re_scalar(adj)
    else:
        re_cfg = replace(cfg, validate_against_re=False, check_schur=False)
        re_set = solve_re(sigma, re_cfg)
        re_adj = solve_re(adj, re_cfg)
    re_members = [m.matrix for m in re_set.members]
    re_adjoint_members = [m.matrix for m in re_adj.members]
    inverted = []
    for h in re_members:
        w, v = np.linalg.eigh(h)
        inverted.append(hermitian_part((v / w) @ v.conj().T))
    equal = _sets_match(inverted, re_adjoint_members, tol=1e-6)

    return DualityReport(
        sample_count=len(samples),
        samples_ok=samples_ok,
        failure_count=int(sum(1 for ok in samples_ok if not ok)),
        re_inversion_equal=equal,
        re_members=re_members,
        re_adjoint_members=re_adjoint_members,
    )


def order_solutions(solution_set: SolutionSet, tol: float = 1e-9) -> SolutionSet:
    """Fill pairwise Loewner comparisons and flag extremal members.

    A member is flagged minimal (maximal) when it compares below (above)
    every other member; with incomparable pairs present no flag may be set.
    """
    members = solution_set.members
    comparisons: dict[tuple[int, int], Loewner] = {}
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            cmp_tol = tol * max(
                1.0, spectral_norm(members[i].matrix), spectral_norm(members[j].matrix)
            )
            comparisons[(i, j)] = loewner_compare(
                members[i].matrix, members[j].matrix, tol=cmp_tol
            )

    def _dominates(i: int, j: int) -> Loewner:
        if i < j:
            return comparisons[(i, j)]
        flipped = comparisons[(j, i)]
        if flipped is Loewner.LESS_EQUAL:
            return Loewner.GREATER_EQUAL
        if flipped is Loewner.GREATER_EQUAL:
            return Loewner.LESS_EQUAL
        return flipped

    minimal_index = None
    maximal_index = None
    for i in range(len(members)):
        if all(
            _dominates(i, j) in (Loewner.LESS_EQUAL, Loewner.EQUAL)
            for j in range(len(members))
            if j != i
        ):
            minimal_index = i
            break
    for i in range(len(members)):
        if all(
            _dominates(i, j) in (Loewner.GREATER_EQUAL, Loewner.EQUAL)
            for j in range(len(members))
            if j != i
        ):
            maximal_index = i
            break
    if len(members) == 1:
        minimal_index = maximal_index = 0

    return SolutionSet(
        members=members,
        comparisons=comparisons,
        minimal_index=minimal_index,
        maximal_index=maximal_index,
        provenance=solution_set.provenance,
    )
