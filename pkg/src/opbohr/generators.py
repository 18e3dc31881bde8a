"""Seeded, reproducible factories for the instance families the checkers need.

Every family re-verifies its certified properties at generation time (norm
grids, positivity, coefficient bounds) and raises ``GenerationError`` if a
check fails, which would indicate a bug rather than bad luck.  Identical
``FamilySpec`` values produce bit-identical instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ContractError, GenerationError, InvalidInputError
from .funcalc import ColligationSpec, herglotz_transfer_grid, matrix_exp
from .linalg import adjoint, hermitize, operator_norm
from .series import (
    HarmonicSeries,
    HoloSeries,
    ScalarSeries,
    SubordinationWitness,
    coeffs_from_circle_samples,
)

FAMILY_IDS = (
    "schur_holo",
    "schur_harmonic",
    "commuting_harmonic",
    "exterior_diag",
    "exterior_colligation",
    "convex_diag",
    "starlike_diag",
    "subordination",
)

CERT_SLACK = 1e-9
CERT_RADIUS = 0.97


@dataclass(frozen=True)
class FamilySpec:
    """Recipe for one reproducible instance."""

    family_id: str
    dim: int = 2
    aux_dim: int = 4
    order: int = 64
    seed: int = 0
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.family_id not in FAMILY_IDS:
            raise InvalidInputError(f"unknown family id: {self.family_id!r}")
        if self.dim < 1 or self.aux_dim < 1 or self.order < 0:
            raise InvalidInputError("dim and aux_dim must be >= 1, order >= 0")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def derive_seed(master_seed: int, *indices: int) -> int:
    """Stable per-trial seed from a master seed and index path."""
    ss = np.random.SeedSequence([int(master_seed), *(int(i) for i in indices)])
    return int(ss.generate_state(1, np.uint64)[0])


def random_unitary(n: int, seed) -> np.ndarray:
    """Seeded unitary from the QR phase-fixed complex Gaussian construction."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    rng = _rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


@dataclass(frozen=True)
class SchurRealization:
    """Block colligation of a (d+k) x (d+k) unitary.

    The transfer function z -> A + z B (I - z D)^(-1) C maps the disk into
    the norm-one ball.
    """

    unitary: np.ndarray
    dim: int

    @property
    def aux_dim(self) -> int:
        return self.unitary.shape[0] - self.dim

    def blocks(self):
        d = self.dim
        u = self.unitary
        return u[:d, :d], u[:d, d:], u[d:, :d], u[d:, d:]

    def transfer_grid(self, zs) -> np.ndarray:
        a, b, c, dd = self.blocks()
        z = np.asarray(zs, dtype=np.complex128).ravel()
        eye = np.eye(self.aux_dim, dtype=np.complex128)
        lhs = eye[None, :, :] - z[:, None, None] * dd[None, :, :]
        x = np.linalg.solve(lhs, np.broadcast_to(c, (z.size, *c.shape)))
        return a[None, :, :] + z[:, None, None] * (b[None, :, :] @ x)


def _circle(nodes: int, rho: float) -> np.ndarray:
    return rho * np.exp(2j * math.pi * np.arange(nodes) / nodes)


def _extract(eval_grid_fn, order: int, rho: float | None = None,
             min_nodes: int = 512) -> np.ndarray:
    # For unit-ball functions the DFT scale factor rho^-n amplifies roundoff,
    # so the radius grows with the order (amplification capped near 1e3) and
    # the node count keeps the aliasing term rho^(M-n) far below it.
    if rho is None:
        rho = 10.0 ** (-3.0 / max(order, 8))
    nodes = max(8 * order, min_nodes)
    return coeffs_from_circle_samples(eval_grid_fn(_circle(nodes, rho)), rho, order)


def _cert_grid(spec: FamilySpec, radius: float = CERT_RADIUS) -> np.ndarray:
    points = int(spec.params.get("cert_points", 96))
    return _circle(points, radius)


def _diag_frame_stack(w: np.ndarray, diag_vals: np.ndarray) -> np.ndarray:
    """Stack of W diag(diag_vals[n]) W* over the leading axis of diag_vals."""
    return (w[None, :, :] * diag_vals[:, None, :]) @ adjoint(w)[None, :, :]


def _scalar_schur_coeffs(rng: np.random.Generator, aux_dim: int, order: int):
    real = SchurRealization(random_unitary(1 + aux_dim, rng), dim=1)
    coeffs = _extract(real.transfer_grid, order, min_nodes=512)[:, 0, 0]
    return coeffs, real


# ---------------------------------------------------------------------------
# family builders
# ---------------------------------------------------------------------------

def _build_schur_holo(spec: FamilySpec, rng):
    real = SchurRealization(random_unitary(spec.dim + spec.aux_dim, rng), dim=spec.dim)
    coeffs = _extract(real.transfer_grid, spec.order)
    instance = HoloSeries(coeffs)
    grid = _cert_grid(spec)
    sup = float(operator_norm(real.transfer_grid(grid)).max())
    if sup > 1.0 + CERT_SLACK:
        raise GenerationError(f"schur_holo sample exceeds the unit ball: sup {sup:.12f}")
    aux = {"eval": real.transfer_grid, "realization": real, "sup_cert": sup}
    return instance, aux


def _build_schur_harmonic(spec: FamilySpec, rng):
    g = SchurRealization(random_unitary(spec.dim + spec.aux_dim, rng), dim=spec.dim)
    h = SchurRealization(random_unitary(spec.dim + spec.aux_dim, rng), dim=spec.dim)
    t = float(rng.uniform(0.0, 1.0))
    gc = _extract(g.transfer_grid, spec.order)
    hc = _extract(h.transfer_grid, spec.order)
    analytic = t * gc
    analytic[0] = t * gc[0] + (1.0 - t) * adjoint(hc[0])
    coanalytic = (1.0 - t) * hc[1:]
    instance = HarmonicSeries(analytic=analytic, coanalytic=coanalytic)

    def eval_exact(zs):
        return t * g.transfer_grid(zs) + (1.0 - t) * adjoint(h.transfer_grid(zs))

    grid = _cert_grid(spec)
    sup = float(operator_norm(eval_exact(grid)).max())
    if sup > 1.0 + CERT_SLACK:
        raise GenerationError(f"schur_harmonic sample exceeds the unit ball: sup {sup:.12f}")
    return instance, {"eval": eval_exact, "t": t, "sup_cert": sup}


def _build_commuting_harmonic(spec: FamilySpec, rng):
    d, order = spec.dim, spec.order
    w = random_unitary(d, rng)
    aux_k = max(2, min(spec.aux_dim, 4))
    ts = rng.uniform(0.0, 1.0, size=d)
    g_coeffs = np.empty((d, order + 1), dtype=np.complex128)
    h_coeffs = np.empty((d, order + 1), dtype=np.complex128)
    g_reals, h_reals = [], []
    for i in range(d):
        g_coeffs[i], gr = _scalar_schur_coeffs(rng, aux_k, order)
        h_coeffs[i], hr = _scalar_schur_coeffs(rng, aux_k, order)
        g_reals.append(gr)
        h_reals.append(hr)
    a_diag = ts[None, :] * g_coeffs.T
    a_diag[0] += (1.0 - ts) * np.conj(h_coeffs[:, 0])
    b_diag = (1.0 - ts)[None, :] * h_coeffs.T[1:]
    instance = HarmonicSeries(
        analytic=_diag_frame_stack(w, a_diag),
        coanalytic=_diag_frame_stack(w, b_diag),
    )

    def eval_exact(zs):
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        slices = np.empty((zs.size, d), dtype=np.complex128)
        for i in range(d):
            gv = g_reals[i].transfer_grid(zs)[:, 0, 0]
            hv = h_reals[i].transfer_grid(zs)[:, 0, 0]
            slices[:, i] = ts[i] * gv + (1.0 - ts[i]) * np.conj(hv)
        return _diag_frame_stack(w, slices)

    grid = _cert_grid(spec)
    sup = float(operator_norm(eval_exact(grid)).max())
    if sup > 1.0 + CERT_SLACK:
        raise GenerationError(f"commuting_harmonic sample exceeds the unit ball: sup {sup:.12f}")
    return instance, {"eval": eval_exact, "t": ts, "frame": w, "sup_cert": sup}


def _build_exterior_diag(spec: FamilySpec, rng):
    d, order = spec.dim, spec.order
    w = random_unitary(d, rng)
    c_lo, c_hi = spec.params.get("c_range", (0.1, 2.0))
    b_lo, b_hi = spec.params.get("beta_range", (0.0, 0.9))
    cs = rng.uniform(c_lo, c_hi, size=d)
    betas = rng.uniform(b_lo, b_hi, size=d)

    def slice_values(zs):
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        return np.exp(cs[None, :] * (1.0 + betas[None, :] * zs[:, None])
                      / (1.0 - betas[None, :] * zs[:, None]))

    def eval_exact(zs):
        return _diag_frame_stack(w, slice_values(zs))

    nodes = max(4 * order + 4, 512)
    diag_coeffs = np.fft.fft(slice_values(_circle(nodes, 0.5)), axis=0)[: order + 1] / nodes
    diag_coeffs *= (0.5 ** -np.arange(order + 1))[:, None]
    instance = HoloSeries(_diag_frame_stack(w, diag_coeffs))

    grid = _cert_grid(spec)
    low = float(np.abs(slice_values(grid)).min())
    if low < 1.0 - CERT_SLACK:
        raise GenerationError(f"exterior_diag sample dips inside the unit ball: min {low:.12f}")
    return instance, {"eval": eval_exact, "c": cs, "beta": betas, "frame": w, "min_cert": low}


def _build_exterior_colligation(spec: FamilySpec, rng):
    k, d = spec.aux_dim, spec.dim
    u = random_unitary(k, rng)
    v = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
    lo, hi = spec.params.get("v_norm_sq_range", (0.2, 2.0))
    target = float(rng.uniform(lo, hi))
    v *= math.sqrt(target) / operator_norm(v)
    instance = ColligationSpec(k=k, U=u, V=v)

    grid = _cert_grid(spec, radius=0.95)
    logs = herglotz_transfer_grid(instance, grid)
    re_min = float(min(np.linalg.eigvalsh(hermitize(lg))[0] for lg in logs))
    if re_min < -CERT_SLACK:
        raise GenerationError(f"colligation sample has Re(log f) dipping below 0: {re_min:.3e}")
    sv_min = float(min(np.linalg.svd(matrix_exp(lg), compute_uv=False)[-1] for lg in logs))
    if sv_min < 1.0 - CERT_SLACK:
        raise GenerationError(f"colligation sample dips inside the unit ball: {sv_min:.12f}")
    return instance, {"re_log_min": re_min, "abs_min": sv_min, "v_norm_sq": target}


def _build_convex_diag(spec: FamilySpec, rng):
    d, order = spec.dim, spec.order
    w = random_unitary(d, rng)
    b_lo, b_hi = spec.params.get("beta_range", (0.0, 0.85))
    k_lo, k_hi = spec.params.get("cond_range", (1.0, 6.0))
    betas = rng.uniform(b_lo, b_hi, size=d)
    kappa = float(rng.uniform(k_lo, k_hi))
    moduli = np.exp(rng.uniform(0.0, math.log(max(kappa, 1.0 + 1e-12)), size=d))
    phases = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size=d))
    # the multiplier shares the diagonalizing frame, so every slice is a
    # scaled scalar convex map and the subordination bounds hold slice-wise
    ts = moduli * phases
    diag_coeffs = np.zeros((order + 1, d), dtype=np.complex128)
    n = np.arange(1, order + 1, dtype=np.float64)
    diag_coeffs[1:] = ts[None, :] * betas[None, :] ** (n[:, None] - 1.0)
    instance = HoloSeries(_diag_frame_stack(w, diag_coeffs))

    def eval_exact(zs):
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        vals = ts[None, :] * zs[:, None] / (1.0 - betas[None, :] * zs[:, None])
        return _diag_frame_stack(w, vals)

    return instance, {"eval": eval_exact, "beta": betas, "multipliers": ts, "frame": w}


def _build_starlike_diag(spec: FamilySpec, rng):
    d, order = spec.dim, spec.order
    if spec.params.get("frame_identity", False):
        w = np.eye(d, dtype=np.complex128)
    else:
        w = random_unitary(d, rng)
    if "zeta" in spec.params:
        zetas = np.asarray(spec.params["zeta"], dtype=np.complex128).ravel()
        if zetas.size != d or np.any(np.abs(np.abs(zetas) - 1.0) > 1e-12):
            raise InvalidInputError("planted zeta values must be d unimodular numbers")
    else:
        zetas = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size=d))
    diag_coeffs = np.zeros((order + 1, d), dtype=np.complex128)
    n = np.arange(1, order + 1, dtype=np.float64)
    diag_coeffs[1:] = n[:, None] * zetas[None, :] ** (n[:, None] - 1.0)
    instance = HoloSeries(_diag_frame_stack(w, diag_coeffs))

    norms = operator_norm(instance.coeffs[1:])
    if np.any(norms > n + 1e-9):
        raise GenerationError("starlike_diag sample violates the coefficient growth bound")

    def eval_exact(zs):
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        vals = zs[:, None] / (1.0 - zetas[None, :] * zs[:, None]) ** 2
        return _diag_frame_stack(w, vals)

    return instance, {"eval": eval_exact, "zeta": zetas, "frame": w}


def _build_subordination(spec: FamilySpec, rng):
    order = spec.order
    if "constant" in spec.params:
        s = float(spec.params["constant"])
        if not (0.0 <= s < 1.0):
            raise InvalidInputError("constant contraction factor must lie in [0, 1)")
        b0 = s * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        phi = np.zeros(order + 1, dtype=np.complex128)
        if order >= 1:
            phi[1] = b0
        eval_b = lambda zs: np.full(np.asarray(zs).size, b0, dtype=np.complex128)
    else:
        aux_k = max(2, min(spec.aux_dim, 6))
        b_coeffs, real = _scalar_schur_coeffs(rng, aux_k, max(order - 1, 0))
        phi = np.zeros(order + 1, dtype=np.complex128)
        phi[1 : 1 + min(order, b_coeffs.size)] = b_coeffs[: max(order, 0)]
        eval_b = lambda zs: real.transfer_grid(zs)[:, 0, 0]

    boundary = _circle(720, 0.999)
    bound = float(np.abs(boundary * eval_b(boundary)).max())
    if bound > 1.0 + CERT_SLACK:
        raise GenerationError(f"subordination witness exceeds the unit ball: {bound:.12f}")
    witness = SubordinationWitness(phi=ScalarSeries(phi), certified_bound=min(bound, 1.0))
    return witness, {"eval_phi": lambda zs: np.asarray(zs).ravel() * eval_b(np.asarray(zs).ravel())}


_BUILDERS = {
    "schur_holo": _build_schur_holo,
    "schur_harmonic": _build_schur_harmonic,
    "commuting_harmonic": _build_commuting_harmonic,
    "exterior_diag": _build_exterior_diag,
    "exterior_colligation": _build_exterior_colligation,
    "convex_diag": _build_convex_diag,
    "starlike_diag": _build_starlike_diag,
    "subordination": _build_subordination,
}

_PAIRABLE = {"schur_holo", "convex_diag", "starlike_diag"}


def sample(spec: FamilySpec, with_aux: bool = False):
    """Draw the instance described by ``spec``.

    Families in {schur_holo, convex_diag, starlike_diag} accept
    ``params["with_witness"] = True`` and then return the pair
    (series, SubordinationWitness), with the witness drawn from the same
    seeded stream.
    """
    rng = _rng(spec.seed)
    builder = _BUILDERS[spec.family_id]
    instance, aux = builder(spec, rng)
    if spec.params.get("with_witness", False):
        if spec.family_id not in _PAIRABLE:
            raise ContractError(f"{spec.family_id} does not produce (series, witness) pairs")
        wspec = FamilySpec(
            family_id="subordination",
            dim=1,
            aux_dim=spec.aux_dim,
            order=spec.order,
            seed=spec.seed,
            params={k: v for k, v in spec.params.items() if k == "constant"},
        )
        witness, waux = _build_subordination(wspec, rng)
        aux = {**aux, "witness_aux": waux}
        instance = (instance, witness)
    return (instance, aux) if with_aux else instance


# ---------------------------------------------------------------------------
# ad-hoc instance sources used by the lemma-1 and metric checks
# ---------------------------------------------------------------------------

def gaussian_coeff_sequence(dim: int, order: int, seed) -> np.ndarray:
    """Random matrix sequence scaled so the square sum sits below the identity."""
    rng = _rng(seed)
    h = rng.standard_normal((order + 1, dim, dim)) + 1j * rng.standard_normal((order + 1, dim, dim))
    gram = np.sum(adjoint(h) @ h, axis=0)
    top = float(np.linalg.eigvalsh(hermitize(gram))[-1])
    return h / math.sqrt(top * (1.0 + 1e-12))


def ordered_triples(count: int, seed, scale: float = 5.0) -> np.ndarray:
    """(count, 3) array of (alpha, beta, gamma) with 0 <= gamma <= alpha <= beta."""
    rng = _rng(seed)
    draws = np.sort(rng.uniform(0.0, scale, size=(count, 3)), axis=1)
    return np.stack([draws[:, 1], draws[:, 2], draws[:, 0]], axis=1)


# ---------------------------------------------------------------------------
# planted extremal instances
# ---------------------------------------------------------------------------

def mobius_scalar_coeffs(a: float, order: int) -> np.ndarray:
    """Coefficients of (a - z)/(1 - a z): a, then -(1-a^2) a^(n-1)."""
    if not (0.0 <= a < 1.0):
        raise InvalidInputError("Mobius parameter must lie in [0, 1)")
    c = np.empty(order + 1, dtype=np.complex128)
    c[0] = a
    if order >= 1:
        c[1:] = -(1.0 - a * a) * a ** np.arange(order, dtype=np.float64)
    return c


def mobius_series(a: float, dim: int, order: int) -> HoloSeries:
    return HoloSeries.from_scalar(mobius_scalar_coeffs(a, order), dim)


def koebe_scalar_coeffs(order: int) -> np.ndarray:
    """Coefficients n of z/(1-z)^2."""
    return np.arange(order + 1, dtype=np.complex128)


def koebe_series(dim: int, order: int) -> HoloSeries:
    return HoloSeries.from_scalar(koebe_scalar_coeffs(order), dim)


def identity_witness(order: int) -> SubordinationWitness:
    """The witness phi(z) = z (subordination by the identity map)."""
    phi = np.zeros(order + 1, dtype=np.complex128)
    if order >= 1:
        phi[1] = 1.0
    return SubordinationWitness(phi=ScalarSeries(phi), certified_bound=0.999)
