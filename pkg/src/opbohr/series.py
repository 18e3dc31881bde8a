"""Truncated matrix-coefficient power series.

A holomorphic series stores coefficients A_0..A_N as a single complex array of
shape (N+1, d, d).  A harmonic series adds coanalytic coefficients B_1..B_N
whose adjoints multiply conj(z)^n during evaluation.  Subordination composition
follows the coefficient algebra B_k = sum over n of alpha_k^(n) A_n, where
alpha^(n) are the Taylor coefficients of the n-th power of the inner map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DomainError, InvalidInputError
from .linalg import DEFAULT_TOL, ToleranceProfile, adjoint, all_finite, as_matrix


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, order="C")  # own the buffer before locking it
    a.flags.writeable = False
    return a


def _check_coeff_stack(coeffs, name: str) -> np.ndarray:
    a = np.asarray(coeffs, dtype=np.complex128)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise InvalidInputError(f"{name} must have shape (N+1, d, d), got {a.shape}")
    if not all_finite(a):
        raise InvalidInputError(f"{name} has non-finite entries")
    return a


@dataclass(frozen=True)
class HoloSeries:
    """Truncated holomorphic series sum of A_n z^n with matrix coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _freeze(_check_coeff_stack(self.coeffs, "coeffs")))

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @staticmethod
    def from_scalar(scalar_coeffs, dim: int) -> "HoloSeries":
        """Scalar coefficients times the identity."""
        c = np.asarray(scalar_coeffs, dtype=np.complex128).ravel()
        return HoloSeries(c[:, None, None] * np.eye(dim)[None, :, :])


@dataclass(frozen=True)
class HarmonicSeries:
    """Truncated harmonic series: analytic A_0..A_N plus coanalytic B_1..B_N.

    Evaluation adds adjoint(B_n) * conj(z)^n, so the stored arrays are the
    B_n themselves.
    """

    analytic: np.ndarray
    coanalytic: np.ndarray

    def __post_init__(self):
        a = _check_coeff_stack(self.analytic, "analytic")
        b = _check_coeff_stack(self.coanalytic, "coanalytic")
        if a.shape[1] != b.shape[1]:
            raise InvalidInputError("analytic and coanalytic dims differ")
        if b.shape[0] != a.shape[0] - 1:
            raise InvalidInputError(
                "coanalytic part must carry orders 1..N (one fewer than analytic)"
            )
        object.__setattr__(self, "analytic", _freeze(a))
        object.__setattr__(self, "coanalytic", _freeze(b))

    @property
    def dim(self) -> int:
        return self.analytic.shape[1]

    @property
    def order(self) -> int:
        return self.analytic.shape[0] - 1


@dataclass(frozen=True)
class ScalarSeries:
    """Truncated scalar power series."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128).ravel()
        if c.size == 0:
            raise InvalidInputError("scalar series needs at least the constant term")
        if not all_finite(c):
            raise InvalidInputError("scalar series has non-finite entries")
        object.__setattr__(self, "coeffs", _freeze(c))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1


@dataclass(frozen=True)
class SubordinationWitness:
    """A disk self-map phi with phi(0) = 0, plus its certified sup bound.

    ``certified_bound`` is the sampled supremum of |phi| near the boundary of
    the disk; generators keep it <= 1 by construction and the constructor
    enforces it as a safety net.
    """

    phi: ScalarSeries
    certified_bound: float
    tol: ToleranceProfile = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        if self.phi.coeffs[0] != 0:
            raise InvalidInputError("subordination witness requires phi(0) = 0")
        if not (0.0 <= self.certified_bound <= 1.0 + self.tol.eq_tol):
            raise InvalidInputError(
                f"certified bound {self.certified_bound} is not a sub-unit sup estimate"
            )


def evaluate(f: HoloSeries | HarmonicSeries, z: complex) -> np.ndarray:
    """Evaluate a series at a single point of the open unit disk (Horner)."""
    if abs(z) >= 1.0:
        raise DomainError(f"|z| must be < 1, got {abs(z):.6g}")
    z = complex(z)
    if isinstance(f, HarmonicSeries):
        coeffs = f.analytic
    else:
        coeffs = f.coeffs
    acc = coeffs[-1].copy()
    for n in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * z + coeffs[n]
    if isinstance(f, HarmonicSeries):
        zb = np.conj(z)
        co = adjoint(f.coanalytic)
        tail = co[-1].copy()
        for n in range(co.shape[0] - 2, -1, -1):
            tail = tail * zb + co[n]
        acc = acc + tail * zb
    return acc


def evaluate_grid(f: HoloSeries | HarmonicSeries, zs) -> np.ndarray:
    """Vectorized evaluation on a 1-D array of points, returning (len, d, d)."""
    z = np.asarray(zs, dtype=np.complex128).ravel()
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("all evaluation points must satisfy |z| < 1")
    if isinstance(f, HarmonicSeries):
        coeffs = f.analytic
    else:
        coeffs = f.coeffs
    n = coeffs.shape[0]
    powers = z[:, None] ** np.arange(n)[None, :]
    out = np.tensordot(powers, coeffs, axes=(1, 0))
    if isinstance(f, HarmonicSeries):
        zb = np.conj(z)
        cpow = zb[:, None] ** np.arange(1, n)[None, :]
        out = out + np.tensordot(cpow, adjoint(f.coanalytic), axes=(1, 0))
    return out


def derivative(f: HoloSeries) -> HoloSeries:
    """Termwise derivative; a constant series differentiates to the zero series."""
    if f.order == 0:
        return HoloSeries(np.zeros_like(f.coeffs))
    n = np.arange(1, f.order + 1, dtype=np.float64)
    return HoloSeries(f.coeffs[1:] * n[:, None, None])


def scalar_power_coeffs(phi: ScalarSeries, t: int, order: int) -> ScalarSeries:
    """Coefficients of phi^t up to ``order`` by repeated Cauchy products.

    Requires phi(0) = 0 and t >= 1, so the result vanishes below order t.
    """
    if t < 1:
        raise ContractError("power must be a positive integer")
    c = np.array(phi.coeffs[: order + 1])
    if c.size and abs(c[0]) > 1e-12:
        raise ContractError("scalar_power_coeffs requires phi(0) = 0")
    if c.size:
        c[0] = 0.0
    c = np.pad(c, (0, max(0, order + 1 - c.size)))
    acc = c.copy()
    for _ in range(t - 1):
        acc = np.convolve(acc, c)[: order + 1]
    return ScalarSeries(acc)


def compose_subordination(f: HoloSeries, w: SubordinationWitness, order: int) -> HoloSeries:
    """Coefficients of f(phi(z)) up to ``order``.

    B_0 = A_0 and B_k = sum over n = 1..k of alpha_k^(n) A_n, with alpha^(n)
    the coefficients of phi^n.  Powers of phi are built incrementally, one
    truncated Cauchy product per step.
    """
    phi = np.zeros(order + 1, dtype=np.complex128)
    src = w.phi.coeffs[: order + 1]
    phi[: src.size] = src
    phi[0] = 0.0

    out = np.zeros((order + 1, f.dim, f.dim), dtype=np.complex128)
    out[0] = f.coeffs[0]
    power = phi.copy()
    for n in range(1, min(order, f.order) + 1):
        if n > 1:
            power = np.convolve(power, phi)[: order + 1]
        out += power[:, None, None] * f.coeffs[n][None, :, :]
    out[0] = f.coeffs[0]  # phi(0) = 0 keeps the constant term exact
    return HoloSeries(out)


def coeffs_from_circle_samples(samples: np.ndarray, rho: float, order: int) -> np.ndarray:
    """Taylor coefficients from equispaced samples on |z| = rho (DFT).

    ``samples`` has shape (M, d, d) taken at z_m = rho * exp(2*pi*i*m/M).
    """
    samples = np.asarray(samples, dtype=np.complex128)
    m = samples.shape[0]
    if m <= 2 * order:
        raise ContractError("need more than 2N sample points to extract N coefficients")
    spec = np.fft.fft(samples, axis=0)[: order + 1] / m
    scale = rho ** -np.arange(order + 1, dtype=np.float64)
    return spec * scale[:, None, None]


def coeffs_via_cauchy_integral(eval_fn, order: int, rho: float, nodes: int) -> HoloSeries:
    """Extract A_0..A_N of an analytic matrix function by a Cauchy integral.

    The trapezoid rule on the circle |z| = rho aliases coefficient n by at most
    sup-norm * rho^(M-n) / (1 - rho^M), so nodes must exceed 2N.
    """
    if not (0.0 < rho < 1.0):
        raise DomainError("extraction radius must lie in (0, 1)")
    if nodes <= 2 * order:
        raise ContractError("nodes must exceed twice the requested order")
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    zs = rho * np.exp(1j * theta)
    first = np.asarray(eval_fn(zs[0]), dtype=np.complex128)
    first = as_matrix(first, "eval_fn output")
    samples = np.empty((nodes, *first.shape), dtype=np.complex128)
    samples[0] = first
    for i in range(1, nodes):
        samples[i] = eval_fn(zs[i])
    return HoloSeries(coeffs_from_circle_samples(samples, rho, order))


def koebe_transform(f: HoloSeries, a: complex, order: int,
                    rho: float = 0.7, nodes: int | None = None) -> HoloSeries:
    """Renormalized disk-automorphism composite of f centered at a.

    G(z) = (1-|a|^2)^(-1) f'(a)^(-1) (f((z+a)/(1+conj(a) z)) - f(a)), computed
    by evaluation and coefficient re-extraction rather than coefficient
    algebra, which is unstable at high order.  The construction forces
    G(0) = 0 and G'(0) = I up to extraction error.
    """
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError("center must lie in the open unit disk")
    if nodes is None:
        nodes = max(4 * order + 4, 256)
    if nodes <= 2 * order:
        raise ContractError("nodes must exceed twice the requested order")
    fprime_a = evaluate(derivative(f), a)
    sv = np.linalg.svd(fprime_a, compute_uv=False)
    if sv[-1] <= 1e-13 * max(1.0, sv[0]):
        raise ContractError("f'(a) is numerically singular")
    fa = evaluate(f, a)

    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    zs = rho * np.exp(1j * theta)
    ws = (zs + a) / (1.0 + np.conj(a) * zs)
    diff = evaluate_grid(f, ws) - fa[None, :, :]
    d = f.dim
    flat = diff.transpose(1, 0, 2).reshape(d, nodes * d)
    solved = np.linalg.solve(fprime_a, flat).reshape(d, nodes, d).transpose(1, 0, 2)
    samples = solved / (1.0 - abs(a) ** 2)
    return HoloSeries(coeffs_from_circle_samples(samples, rho, order))
