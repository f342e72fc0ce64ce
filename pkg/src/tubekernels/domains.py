"""Tube-type domain invariants, Jordan polynomial, and line-bundle Poisson kernels.

Full kernel evaluators exist for the unit disk (rank 1) and the type I_{n,n}
matrix ball {z : ||z||_op < 1}, whose Shilov boundary is U(n).  The remaining
tube-type families appear in the catalog as (rank, multiplicity, eta, genus)
records only.

Conventions pinned here:

* Jordan polynomial: disk h(z, w) = 1 - z conj(w); type I h(z, w) =
  det(I - z w*).  Restricted to z = w = diag(a_1..a_r) this is
  prod_j (1 - a_j^2), the defining torus normalization.
* Poisson kernel: [h(z,z) / |h(z,u)|^2]^((lam+eta-nu)/2) * h(z,u)^(-nu),
  principal branch on the positive real base, exact integer power for the
  h(z,u) factor.
* Cocycle: j(g, z) = det(Cz + D), so the canonical automorphy factor obeys
  J_g(z)^(1/p) = j(g, z)^(-1) and the Jordan polynomial transforms as
  h(g.z, g.w) = j(g,z)^(-1) h(z,w) conj(j(g,w))^(-1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidArgumentError, SingularActionError, SingularKernelError

__all__ = [
    "DomainSpec",
    "LineBundleParams",
    "KernelPoint",
    "AdmissibilityReport",
    "catalog_record",
    "jordan_h",
    "poisson_kernel",
    "poisson_kernel_batch",
    "hua_eigenvalue",
    "casimir_eigenvalue",
    "check_admissibility",
    "moebius_typeI",
    "cocycle_j",
    "random_group_element",
    "kernel_covariance_residual",
    "cocycle_residual",
    "h_covariance_residual",
]

_GROUP_TOL = 1e-10
_UNITARY_TOL = 1e-12


def _eta_of(m: float, r: int) -> float:
    return 0.5 * m * (r - 1) + 1.0


def _genus_of(m: float, r: int) -> float:
    return m * (r - 1) + 2.0


@dataclass(frozen=True)
class DomainSpec:
    """Invariants of one tube-type domain realization."""

    kind: str
    rank: int
    multiplicity: float
    eta: float
    genus: float
    matrix_size: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidArgumentError(f"rank must be >= 1, got {self.rank}")
        if abs(self.eta - _eta_of(self.multiplicity, self.rank)) > 1e-12:
            raise InvalidArgumentError("eta must equal (m/2)(r-1) + 1")
        if abs(self.genus - 2.0 * self.eta) > 1e-12:
            raise InvalidArgumentError("genus must equal m(r-1) + 2 = 2*eta")

    @classmethod
    def disk(cls) -> "DomainSpec":
        """Unit disk (rank 1; the multiplicity plays no role at r = 1)."""
        return cls(kind="disk", rank=1, multiplicity=2.0, eta=1.0, genus=2.0, matrix_size=1)

    @classmethod
    def type_i(cls, n: int) -> "DomainSpec":
        if n < 1:
            raise InvalidArgumentError(f"type I requires n >= 1, got {n}")
        return cls(
            kind="typeI",
            rank=n,
            multiplicity=2.0,
            eta=float(n),
            genus=2.0 * n,
            matrix_size=n,
        )


def catalog_record(kind: str, n: int) -> dict:
    """(rank, multiplicity, eta, genus) record for every tube-type family.

    Only ``disk`` and ``typeI`` carry kernel evaluators; the others are
    bookkeeping entries (``typeIV`` requires n >= 3, ``e7`` ignores n).
    """
    if kind == "disk":
        r, m = 1, 2.0
    elif kind == "typeI":
        r, m = n, 2.0
    elif kind == "typeII":
        r, m = n, 4.0
    elif kind == "typeIII":
        r, m = n, 1.0
    elif kind == "typeIV":
        if n < 3:
            raise InvalidArgumentError("typeIV record requires n >= 3")
        r, m = 2, float(n - 2)
    elif kind == "e7":
        r, m = 3, 8.0
    else:
        raise InvalidArgumentError(f"unknown domain kind {kind!r}")
    if r < 1:
        raise InvalidArgumentError(f"rank must be >= 1, got {r}")
    return {
        "kind": kind,
        "rank": r,
        "multiplicity": m,
        "eta": _eta_of(m, r),
        "genus": _genus_of(m, r),
        "has_kernel": kind in ("disk", "typeI"),
    }


@dataclass(frozen=True)
class LineBundleParams:
    """Spectral parameter lambda and integer line-bundle twist nu."""

    lam: complex
    nu: int

    def __post_init__(self):
        if int(self.nu) != self.nu:
            raise InvalidArgumentError(f"nu must be an integer, got {self.nu}")
        object.__setattr__(self, "nu", int(self.nu))


def _as_matrix(spec: DomainSpec, z) -> np.ndarray:
    n = spec.matrix_size
    zm = np.asarray(z, dtype=complex)
    if zm.ndim == 0:
        zm = zm.reshape(1, 1)
    if zm.shape != (n, n):
        raise InvalidArgumentError(f"expected a {n}x{n} matrix, got shape {zm.shape}")
    return zm


def _spectral_norm(z: np.ndarray) -> float:
    return float(np.linalg.norm(z, 2))


def _unitary_defect(u: np.ndarray) -> float:
    n = u.shape[0]
    return float(np.max(np.abs(u @ u.conj().T - np.eye(n))))


@dataclass(frozen=True)
class KernelPoint:
    """Interior point z (spectral norm < 1) and Shilov point u (unitary)."""

    z: np.ndarray
    u: np.ndarray

    def __init__(self, z, u, spec: DomainSpec | None = None):
        zm = np.asarray(z, dtype=complex)
        um = np.asarray(u, dtype=complex)
        if zm.ndim == 0:
            zm = zm.reshape(1, 1)
        if um.ndim == 0:
            um = um.reshape(1, 1)
        if zm.shape != um.shape or zm.ndim != 2 or zm.shape[0] != zm.shape[1]:
            raise InvalidArgumentError(f"z and u must be square matrices of equal size, got {zm.shape}, {um.shape}")
        if spec is not None and zm.shape != (spec.matrix_size, spec.matrix_size):
            raise InvalidArgumentError(f"point size {zm.shape} does not match domain size {spec.matrix_size}")
        if _spectral_norm(zm) >= 1.0:
            raise InvalidArgumentError("z must have spectral norm < 1")
        if _unitary_defect(um) > _UNITARY_TOL:
            raise InvalidArgumentError("u is not unitary within 1e-12")
        object.__setattr__(self, "z", zm)
        object.__setattr__(self, "u", um)


def jordan_h(spec: DomainSpec, z, w) -> complex:
    """Jordan determinant polynomial h(z, w), holomorphic in z, conjugate in w."""
    zm = _as_matrix(spec, z)
    wm = _as_matrix(spec, w)
    if spec.matrix_size == 1:
        return complex(1.0 - zm[0, 0] * np.conj(wm[0, 0]))
    return complex(np.linalg.det(np.eye(spec.matrix_size) - zm @ wm.conj().T))


def _int_power(w: complex, k: int) -> complex:
    """w**k for integer k: branch-free (repeated multiplication under the hood)."""
    return complex(w) ** int(k)


def poisson_kernel(spec: DomainSpec, params: LineBundleParams, pt: KernelPoint) -> complex:
    """Line-bundle Poisson kernel P_{lam,nu}(z, u).

    [h(z,z)/|h(z,u)|^2]^((lam+eta-nu)/2) * h(z,u)^(-nu); the first factor uses
    the principal branch on its positive real base, the second is an exact
    integer power.
    """
    h_zz = jordan_h(spec, pt.z, pt.z)
    h_zu = jordan_h(spec, pt.z, pt.u)
    if abs(h_zu) < 1e-300:
        raise SingularKernelError("h(z, u) = 0: kernel is singular at this boundary point")
    base = h_zz.real / abs(h_zu) ** 2
    if base <= 0.0:
        raise SingularKernelError(f"nonpositive kernel base {base}; z is not interior")
    s = (params.lam + spec.eta - params.nu) / 2.0
    return complex(np.exp(s * np.log(base))) * _int_power(h_zu, -params.nu)


def poisson_kernel_batch(spec: DomainSpec, params: LineBundleParams, z, u_batch: np.ndarray) -> np.ndarray:
    """Vectorized kernel values against a stack of Shilov points (B, n, n)."""
    n = spec.matrix_size
    zm = _as_matrix(spec, z)
    us = np.asarray(u_batch, dtype=complex)
    if us.ndim != 3 or us.shape[1:] != (n, n):
        raise InvalidArgumentError(f"u_batch must have shape (B, {n}, {n}), got {us.shape}")
    h_zz = jordan_h(spec, zm, zm).real
    h_zu = np.linalg.det(np.eye(n) - np.einsum("ij,bkj->bik", zm, us.conj()))
    if np.any(np.abs(h_zu) < 1e-300):
        raise SingularKernelError("h(z, u) = 0 for some sample")
    base = h_zz / np.abs(h_zu) ** 2
    s = (params.lam + spec.eta - params.nu) / 2.0
    out = np.exp(s * np.log(base))
    if params.nu != 0:
        out = out * h_zu ** (-params.nu)
    return out


def hua_eigenvalue(spec: DomainSpec, params: LineBundleParams) -> complex:
    """(lam^2 - (eta - nu)^2) / (4p) with p the genus."""
    return (params.lam**2 - (spec.eta - params.nu) ** 2) / (4.0 * spec.genus)


def casimir_eigenvalue(spec: DomainSpec, params: LineBundleParams) -> complex:
    """(lam^2 - (eta - nu)^2) / (4r) with r the rank."""
    return (params.lam**2 - (spec.eta - params.nu) ** 2) / (4.0 * spec.rank)


@dataclass(frozen=True)
class AdmissibilityReport:
    condition_13: bool
    condition_14: bool

    @property
    def admissible(self) -> bool:
        return self.condition_13 and self.condition_14


_INT_TOL = 1e-9


def _is_positive_integer(v: complex) -> bool:
    if abs(v.imag) > _INT_TOL:
        return False
    nearest = round(v.real)
    return nearest >= 1 and abs(v.real - nearest) <= _INT_TOL


def _is_positive_even_integer(v: complex) -> bool:
    if abs(v.imag) > _INT_TOL:
        return False
    nearest = round(v.real)
    return nearest >= 2 and nearest % 2 == 0 and abs(v.real - nearest) <= _INT_TOL


def check_admissibility(spec: DomainSpec, params: LineBundleParams) -> AdmissibilityReport:
    """Exact membership tests of the two spectral-parameter conditions.

    condition_13 holds iff -lam - (m/2)(-r + 2 + j) is not in {1, 2, ...}
    for j = 0, 1; condition_14 holds iff -lam + eta - |nu| is not in
    {2, 4, 6, ...}.  Nonreal lam passes both.
    """
    lam = complex(params.lam)
    m = spec.multiplicity
    r = spec.rank
    cond13 = True
    for j in (0, 1):
        v = -lam - (m / 2.0) * (-r + 2 + j)
        if _is_positive_integer(v):
            cond13 = False
    w = -lam + spec.eta - abs(params.nu)
    cond14 = not _is_positive_even_integer(w)
    return AdmissibilityReport(condition_13=cond13, condition_14=cond14)


# ---------------------------------------------------------------------------
# Type I_{n,n} group action
# ---------------------------------------------------------------------------


def _group_blocks(g: np.ndarray):
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2:
        raise InvalidArgumentError(f"group element must be a 2n x 2n matrix, got {g.shape}")
    n = g.shape[0] // 2
    jmat = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    defect = np.max(np.abs(g.conj().T @ jmat @ g - jmat))
    if defect > _GROUP_TOL:
        raise InvalidArgumentError(f"matrix is not in the type-I group: |g*Jg - J| = {defect:.2e}")
    return g[:n, :n], g[:n, n:], g[n:, :n], g[n:, n:]


def _denominator(g: np.ndarray, z):
    a, b, c, d = _group_blocks(g)
    n = a.shape[0]
    zm = np.asarray(z, dtype=complex)
    if zm.ndim == 0:
        zm = zm.reshape(1, 1)
    if zm.shape != (n, n):
        raise InvalidArgumentError(f"z must be {n}x{n}, got {zm.shape}")
    denom = c @ zm + d
    sv = np.linalg.svd(denom, compute_uv=False)
    if sv[-1] <= 1e-14 * sv[0]:
        raise SingularActionError("Cz + D is singular")
    return a, b, zm, denom


def moebius_typeI(g: np.ndarray, z) -> np.ndarray:
    """Fractional-linear action g.z = (Az + B)(Cz + D)^(-1) on the matrix ball."""
    a, b, zm, denom = _denominator(g, z)
    return np.linalg.solve(denom.T, (a @ zm + b).T).T


def cocycle_j(g: np.ndarray, z) -> complex:
    """Holomorphic cocycle j(g, z) = det(Cz + D)."""
    _, _, _, denom = _denominator(g, z)
    return complex(np.linalg.det(denom))


def random_group_element(n: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """Exponential of a random Lie-algebra element of the type-I group.

    The element is rescaled to operator norm <= scale, keeping Cz + D well
    conditioned in tests.
    """
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = 0.5 * (x - x.conj().T)
    d = 0.5 * (y - y.conj().T)
    xi = np.block([[a, b], [b.conj().T, d]])
    nrm = np.linalg.norm(xi, 2)
    if nrm > scale:
        xi *= scale / nrm
    return scipy.linalg.expm(xi)


def cocycle_residual(g1: np.ndarray, g2: np.ndarray, z) -> float:
    """Relative defect of the multiplicative identity j(g1 g2, z) = j(g1, g2.z) j(g2, z)."""
    lhs = cocycle_j(np.asarray(g1) @ np.asarray(g2), z)
    rhs = cocycle_j(g1, moebius_typeI(g2, z)) * cocycle_j(g2, z)
    return abs(lhs - rhs) / abs(lhs)


def h_covariance_residual(spec: DomainSpec, g: np.ndarray, z, w) -> float:
    """Relative defect of h(g.z, g.w) = j(g,z)^(-1) h(z,w) conj(j(g,w))^(-1)."""
    gz = moebius_typeI(g, z)
    gw = moebius_typeI(g, w)
    lhs = jordan_h(spec, gz, gw)
    rhs = jordan_h(spec, z, w) / (cocycle_j(g, z) * np.conj(cocycle_j(g, w)))
    return abs(lhs - rhs) / abs(lhs)


def kernel_covariance_residual(
    spec: DomainSpec, params: LineBundleParams, g: np.ndarray, z, u
) -> float:
    """Relative defect of the kernel transformation law under the group action.

    P(g.z, g.u) = P(z, u) * j(g,z)^nu * |j(g,u)|^(lam+eta-nu) * conj(j(g,u))^nu,
    which is the printed covariance identity written through
    J_g(.)^(1/p) = j(g, .)^(-1); every factor is branch-free for integer nu.
    """
    gz = moebius_typeI(g, z)
    gu = moebius_typeI(g, u)
    lhs = poisson_kernel(spec, params, KernelPoint(gz, gu, spec))
    p0 = poisson_kernel(spec, params, KernelPoint(z, u, spec))
    jz = cocycle_j(g, z)
    ju = cocycle_j(g, u)
    s = params.lam + spec.eta - params.nu
    rhs = p0 * _int_power(jz, params.nu) * np.exp(s * np.log(abs(ju))) * _int_power(np.conj(ju), params.nu)
    return abs(lhs - rhs) / abs(lhs)
