"""Matrix exponential/logarithm, contour-integral logarithm, and unitary
colligation evaluation.

The logarithm comes in two routes that cross-check each other:

* ``log_eig_normal`` diagonalizes a normal matrix and applies a scalar branch
  logarithm to the eigenvalues (the oracle path);
* ``log_riesz_dunford`` evaluates the resolvent integral
  (1/2*pi*i) * integral of log(xi) (xi I - M)^(-1) d(xi) over a circle by
  trapezoidal quadrature, which converges geometrically for analytic
  integrands on circles.

A branch is described by the direction of the ray excluded from the plane;
the angle pi reproduces the principal branch on the slit plane C \\ (-inf, 0].
A finite spectrum can never separate 0 from infinity in the plane, so the
only operative preconditions for a matrix logarithm are that 0 lies outside
the spectrum and that the spectrum stays off the chosen branch ray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm as _scipy_expm, schur as _schur

from .errors import (
    BranchCutError,
    ContourError,
    ContractError,
    DomainError,
    InvalidInputError,
    NumericError,
    RangeError,
)
from .linalg import (
    DEFAULT_TOL,
    ToleranceProfile,
    adjoint,
    all_finite,
    as_matrix,
    hermitize,
    operator_norm,
)

# exp(x) overflows double precision near 709; stay far below it.
EXP_NORM_CAP = 300.0


@dataclass(frozen=True)
class BranchCut:
    """Logarithm branch determined by the excluded ray {t e^(i angle) : t >= 0}."""

    angle: float = math.pi

    def __post_init__(self):
        if not (-math.pi < self.angle <= math.pi):
            raise InvalidInputError("branch angle must lie in (-pi, pi]")

    def ray_distance(self, z: complex) -> float:
        """Euclidean distance from z to the excluded ray."""
        w = complex(z) * np.exp(-1j * self.angle)
        if w.real >= 0.0:
            return abs(w.imag)
        return abs(w)

    def log(self, values):
        """Scalar branch logarithm with argument in (angle - 2*pi, angle]."""
        v = np.asarray(values, dtype=np.complex128)
        arg = self.angle - np.mod(self.angle - np.angle(v), 2.0 * math.pi)
        return np.log(np.abs(v)) + 1j * arg


PRINCIPAL_CUT = BranchCut(math.pi)


@dataclass(frozen=True)
class ContourSpec:
    """A single positively oriented circle with a trapezoidal node count."""

    center: complex
    radius: float
    nodes: int = 512

    def __post_init__(self):
        if not (self.radius > 0):
            raise InvalidInputError("contour radius must be positive")
        if self.nodes < 16:
            raise InvalidInputError("contour needs at least 16 nodes")


@dataclass(frozen=True)
class ColligationSpec:
    """Unitary U on a k-dimensional space plus V mapping dimension d into it.

    Generates the exterior-valued function exp((1/2) V*(I+zU)(I-zU)^(-1) V);
    its logarithm has constant term (1/2) V*V and higher coefficients V* U^n V.
    """

    k: int
    U: np.ndarray
    V: np.ndarray
    tol: ToleranceProfile = DEFAULT_TOL

    def __post_init__(self):
        u = as_matrix(self.U, "U")
        v = np.asarray(self.V, dtype=np.complex128)
        if u.shape != (self.k, self.k):
            raise InvalidInputError(f"U must be {self.k}x{self.k}")
        if v.ndim != 2 or v.shape[0] != self.k:
            raise InvalidInputError("V must map the d-dimensional space into the k-dimensional one")
        if not all_finite(v):
            raise InvalidInputError("V has non-finite entries")
        if operator_norm(adjoint(u) @ u - np.eye(self.k)) > self.tol.eq_tol:
            raise InvalidInputError("U is not unitary within tolerance")
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "V", v)

    @property
    def dim(self) -> int:
        return self.V.shape[1]


def matrix_exp(m, norm_cap: float = EXP_NORM_CAP) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with a Pade core via SciPy)."""
    a = as_matrix(m)
    if operator_norm(a) > norm_cap:
        raise RangeError(f"||M|| exceeds the exp cap {norm_cap}")
    return np.asarray(_scipy_expm(a), dtype=np.complex128)


def _normal_eigensystem(m: np.ndarray, tol: ToleranceProfile):
    """Unitary diagonalization of a normal matrix via a complex Schur form."""
    norm = operator_norm(m)
    defect = operator_norm(m @ adjoint(m) - adjoint(m) @ m)
    if defect > tol.eq_tol * max(1.0, norm**2):
        raise ContractError(f"matrix is not normal within tolerance (defect {defect:.3e})")
    if np.allclose(m, adjoint(m), atol=tol.eq_tol * max(1.0, norm)):
        w, z = np.linalg.eigh(hermitize(m))
        return w.astype(np.complex128), z
    t, z = _schur(m, output="complex")
    off = t - np.diag(np.diag(t))
    if operator_norm(off) > math.sqrt(max(tol.eq_tol, 1e-300)) * max(1.0, norm):
        raise NumericError("Schur form of a nominally normal matrix is far from diagonal")
    return np.diag(t), z


def log_eig_normal(m, cut: BranchCut = PRINCIPAL_CUT,
                   tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Logarithm of a normal matrix through its eigenvalues.

    The spectrum must exclude 0 and stay off the branch ray; exp of the result
    reconstructs the input within quad_tol * ||M||.
    """
    a = as_matrix(m)
    w, z = _normal_eigensystem(a, tol)
    scale = max(1.0, float(np.abs(w).max()))
    for lam in w:
        if cut.ray_distance(complex(lam)) <= tol.eq_tol * scale:
            raise BranchCutError(
                f"eigenvalue {complex(lam):.6g} touches the branch ray at angle {cut.angle:.6g}"
            )
    return z @ np.diag(cut.log(w)) @ adjoint(z)


def auto_contour(m, nodes: int = 512, factor: float = 1.25) -> ContourSpec:
    """Circle centered at the spectral centroid with radius factor * spread.

    Deterministic; the result may still violate ``log_riesz_dunford``'s
    geometric preconditions, in which case that call rejects it.
    """
    a = as_matrix(m)
    eigs = np.linalg.eigvals(a)
    center = complex(eigs.mean())
    spread = float(np.abs(eigs - center).max())
    radius = factor * spread if spread > 0 else 0.25 * max(1.0, abs(center))
    return ContourSpec(center=center, radius=radius, nodes=nodes)


def _check_contour_geometry(eigs: np.ndarray, contour: ContourSpec, cut: BranchCut) -> None:
    gap = np.abs(eigs - contour.center)
    slack = 1e-12 * max(1.0, contour.radius)
    if float(gap.max()) >= contour.radius - slack:
        raise ContourError(
            f"contour (center {contour.center:.6g}, radius {contour.radius:.6g}) "
            f"does not strictly enclose the spectrum (max |lambda - c| = {gap.max():.6g})"
        )
    if abs(contour.center) <= contour.radius + slack:
        raise ContourError("closed disk bounded by the contour must exclude 0")
    if cut.ray_distance(contour.center) <= contour.radius + slack:
        raise ContourError("closed disk bounded by the contour meets the branch ray")


def _trapezoid_log(m: np.ndarray, contour: ContourSpec, cut: BranchCut, nodes: int) -> np.ndarray:
    d = m.shape[0]
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    rot = np.exp(1j * phi)
    xi = contour.center + contour.radius * rot
    lhs = xi[:, None, None] * np.eye(d)[None, :, :] - m[None, :, :]
    rhs = np.broadcast_to(np.eye(d, dtype=np.complex128), (nodes, d, d))
    try:
        resolvents = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            "near-singular resolvent at a quadrature node; move or shrink the contour"
        ) from exc
    residual = float(np.abs(lhs @ resolvents - rhs).max())
    if residual > 1e-6:
        raise NumericError(
            f"resolvent solve residual {residual:.3e}; move or shrink the contour"
        )
    weights = cut.log(xi) * rot * (contour.radius / nodes)
    return np.tensordot(weights, resolvents, axes=(0, 0))


def log_riesz_dunford(m, contour: ContourSpec | None = None,
                      cut: BranchCut = PRINCIPAL_CUT,
                      tol: ToleranceProfile = DEFAULT_TOL,
                      max_nodes: int = 65536) -> np.ndarray:
    """Contour-integral logarithm over a circle enclosing the spectrum.

    Starts at ``contour.nodes`` quadrature points and doubles the count until
    two successive results agree within quad_tol * max(1, ||result||).
    """
    a = as_matrix(m)
    if contour is None:
        contour = auto_contour(a)
    eigs = np.linalg.eigvals(a)
    _check_contour_geometry(eigs, contour, cut)
    nodes = contour.nodes
    current = _trapezoid_log(a, contour, cut, nodes)
    while True:
        if nodes >= max_nodes:
            raise NumericError(f"quadrature did not converge within {max_nodes} nodes")
        nodes *= 2
        refined = _trapezoid_log(a, contour, cut, nodes)
        if operator_norm(refined - current) <= tol.quad_tol * max(1.0, operator_norm(refined)):
            return refined
        current = refined


def herglotz_transfer(c: ColligationSpec, z: complex) -> np.ndarray:
    """(1/2) V*(I+zU)(I-zU)^(-1) V, the logarithm of the realized function.

    Its real part is positive semidefinite for every |z| < 1.
    """
    if abs(z) >= 1.0:
        raise DomainError(f"|z| must be < 1, got {abs(z):.6g}")
    eye = np.eye(c.k, dtype=np.complex128)
    try:
        w = np.linalg.solve(eye - z * c.U, c.V)
    except np.linalg.LinAlgError as exc:  # unreachable for |z| < 1 and unitary U
        raise NumericError(f"(I - zU) solve failed: {exc}") from exc
    return 0.5 * adjoint(c.V) @ (w + z * (c.U @ w))


def herglotz_transfer_grid(c: ColligationSpec, zs) -> np.ndarray:
    """Vectorized ``herglotz_transfer`` over a 1-D array of points."""
    z = np.asarray(zs, dtype=np.complex128).ravel()
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("all evaluation points must satisfy |z| < 1")
    eye = np.eye(c.k, dtype=np.complex128)
    lhs = eye[None, :, :] - z[:, None, None] * c.U[None, :, :]
    w = np.linalg.solve(lhs, np.broadcast_to(c.V, (z.size, *c.V.shape)))
    inner = w + z[:, None, None] * (c.U[None, :, :] @ w)
    return 0.5 * adjoint(c.V)[None, :, :] @ inner


def exterior_realization_eval(c: ColligationSpec, z: complex) -> np.ndarray:
    """exp(herglotz_transfer(c, z)); at z = 0 this is exp((1/2) V*V) >= I."""
    return matrix_exp(herglotz_transfer(c, z))


def colligation_log_coeff(c: ColligationSpec, n: int) -> np.ndarray:
    """Taylor coefficient V* U^n V of the realized logarithm, for n >= 1.

    The constant term is (1/2) V*V, not V* U^0 V; asking for n = 0 is a
    contract error that points the caller there.
    """
    if n < 1:
        raise ContractError("n = 0 coefficient is (1/2) V*V (the realized log at 0)")
    return adjoint(c.V) @ np.linalg.matrix_power(c.U, n) @ c.V
