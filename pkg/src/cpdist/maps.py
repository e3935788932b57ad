"""Completely positive maps between matrix algebras, in the Heisenberg picture.

Conventions
-----------
A cp map ``T`` with input algebra of d_in x d_in matrices and output algebra
of d_out x d_out matrices acts as

    T(a) = sum_i  K_i† a K_i,

with Kraus operators ``K_i`` of shape (d_in, d_out); equivalently each K_i is
a linear map from the d_out-dimensional Hilbert space into the
d_in-dimensional one. ``T`` is unital iff sum_i K_i† K_i = identity.

The Choi matrix follows the domain-factor-first convention,

    J(T) = sum_{ij} E_ij ⊗ T(E_ij),

a (d_in * d_out)-dimensional Hermitian matrix, psd iff T is completely
positive. Differences of cp maps are carried around as :class:`HermMap`
(a Hermitian Choi block plus dimensions).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    as_matrix,
    check_hermitian,
    eigh,
    hermitian_part,
    operator_norm,
)

__all__ = [
    "CpMap",
    "HermMap",
    "choi_from_kraus",
    "kraus_from_choi",
    "is_completely_positive",
    "identity_channel",
    "unitary_channel",
    "depolarizing_channel",
    "random_channel",
    "compose",
    "difference",
    "check_density",
    "check_positive_operator",
    "random_density",
    "channel_to_dict",
    "channel_from_dict",
]

# Choi eigenvalues below this magnitude are treated as numerically zero when
# extracting Kraus operators.
KRAUS_CUTOFF = 1e-10

# Complete positivity gate: minimum Choi eigenvalue must not fall below this.
CP_EIG_FLOOR = -1e-9


def choi_from_kraus(kraus, d_in: int, d_out: int) -> np.ndarray:
    """Choi matrix sum_ij E_ij ⊗ T(E_ij) of the map with the given Kraus family."""
    side = d_in * d_out
    j = np.zeros((side, side), dtype=np.complex128)
    for k in kraus:
        k = as_matrix(k)
        if k.shape != (d_in, d_out):
            raise ValueError(
                f"Kraus operator has shape {k.shape}, expected {(d_in, d_out)}"
            )
        # J = sum_m w_m w_m† with w_m the conjugated row-major flattening of K_m.
        w = k.conj().reshape(-1)
        j += np.outer(w, w.conj())
    return j


def kraus_from_choi(choi, d_in: int, d_out: int, cutoff: float = KRAUS_CUTOFF):
    """Kraus family of a cp map from its Choi matrix.

    Eigenvalues below `cutoff` are dropped; eigenvalues below the complete
    positivity floor raise ValueError. The zero map yields an empty list.
    """
    j = check_hermitian(choi)
    side = d_in * d_out
    if j.shape != (side, side):
        raise ValueError(
            f"Choi matrix has shape {j.shape}, expected {(side, side)}"
        )
    w, u = eigh(j)
    if w.size and w[0] < CP_EIG_FLOOR:
        raise ValueError(
            f"Choi matrix is not positive semidefinite (min eigenvalue {w[0]:.3e}); "
            "the map is not completely positive"
        )
    kraus = []
    for lam, vec in zip(w, u.T):
        if lam > cutoff:
            kraus.append(np.sqrt(lam) * vec.conj().reshape(d_in, d_out))
    return kraus


@dataclass
class CpMap:
    """A completely positive map held as a Kraus family plus cached Choi matrix."""

    d_in: int
    d_out: int
    kraus: list = field(default_factory=list)
    choi: np.ndarray | None = None

    def __post_init__(self):
        if self.d_in < 1 or self.d_out < 1:
            raise ValueError("dimensions must be positive")
        self.kraus = [as_matrix(k) for k in self.kraus]
        for k in self.kraus:
            if k.shape != (self.d_in, self.d_out):
                raise ValueError(
                    f"Kraus operator has shape {k.shape}, "
                    f"expected {(self.d_in, self.d_out)}"
                )
        rebuilt = choi_from_kraus(self.kraus, self.d_in, self.d_out)
        if self.choi is None:
            self.choi = rebuilt
        else:
            self.choi = check_hermitian(self.choi)
            if np.abs(self.choi - rebuilt).max() > 1e-10:
                raise ValueError("cached Choi matrix is inconsistent with the Kraus family")

    @classmethod
    def from_kraus(cls, kraus, d_in: int | None = None, d_out: int | None = None) -> "CpMap":
        ops = [as_matrix(k) for k in kraus]
        if not ops and (d_in is None or d_out is None):
            raise ValueError("empty Kraus family needs explicit dimensions")
        if d_in is None:
            d_in = ops[0].shape[0]
        if d_out is None:
            d_out = ops[0].shape[1]
        return cls(d_in=d_in, d_out=d_out, kraus=ops)

    @classmethod
    def from_choi(cls, choi, d_in: int, d_out: int, cutoff: float = KRAUS_CUTOFF) -> "CpMap":
        kraus = kraus_from_choi(choi, d_in, d_out, cutoff)
        return cls(d_in=d_in, d_out=d_out, kraus=kraus)

    @property
    def kraus_rank(self) -> int:
        w, _ = eigh(self.choi)
        return int(np.count_nonzero(w > KRAUS_CUTOFF))

    def apply(self, a) -> np.ndarray:
        """Evaluate T(a) = sum_i K_i† a K_i for a d_in x d_in argument."""
        a = as_matrix(a)
        if a.shape != (self.d_in, self.d_in):
            raise ValueError(
                f"argument has shape {a.shape}, expected {(self.d_in, self.d_in)}"
            )
        out = np.zeros((self.d_out, self.d_out), dtype=np.complex128)
        for k in self.kraus:
            out += k.conj().T @ a @ k
        return out

    def at_identity(self) -> np.ndarray:
        """T(1) = sum_i K_i† K_i, the cp-map cb-norm witness block."""
        out = np.zeros((self.d_out, self.d_out), dtype=np.complex128)
        for k in self.kraus:
            out += k.conj().T @ k
        return hermitian_part(out)

    def rescaled(self, factor: float) -> "CpMap":
        """The cp map factor * T, realized by scaling the Kraus family by sqrt(factor)."""
        if factor < 0:
            raise ValueError("cp maps can only be rescaled by nonnegative factors")
        root = np.sqrt(factor)
        return CpMap(self.d_in, self.d_out, [root * k for k in self.kraus])

    def is_unital(self, atol: float = 1e-10) -> bool:
        return np.abs(self.at_identity() - np.eye(self.d_out)).max() <= atol


@dataclass
class HermMap:
    """A Hermitian-preserving map (typically a difference of cp maps) via its Choi matrix."""

    d_in: int
    d_out: int
    choi: np.ndarray

    def __post_init__(self):
        side = self.d_in * self.d_out
        self.choi = check_hermitian(self.choi)
        if self.choi.shape != (side, side):
            raise ValueError(
                f"Choi matrix has shape {self.choi.shape}, expected {(side, side)}"
            )

    def apply(self, a) -> np.ndarray:
        """Evaluate the map on a d_in x d_in argument by contracting the Choi matrix."""
        a = as_matrix(a)
        if a.shape != (self.d_in, self.d_in):
            raise ValueError(
                f"argument has shape {a.shape}, expected {(self.d_in, self.d_in)}"
            )
        j4 = self.choi.reshape(self.d_in, self.d_out, self.d_in, self.d_out)
        return np.einsum("ij,ikjl->kl", a, j4)


def difference(t1: CpMap, t2: CpMap) -> HermMap:
    """The Hermitian-preserving map T1 - T2 (dimensions must match)."""
    if (t1.d_in, t1.d_out) != (t2.d_in, t2.d_out):
        raise ValueError(
            f"dimension mismatch: ({t1.d_in},{t1.d_out}) vs ({t2.d_in},{t2.d_out})"
        )
    return HermMap(t1.d_in, t1.d_out, t1.choi - t2.choi)


def is_completely_positive(f) -> tuple[bool, float]:
    """(verdict, minimum Choi eigenvalue) for a CpMap or HermMap.

    The verdict allows eigenvalues down to the roundoff floor -1e-9.
    """
    j = f.choi if hasattr(f, "choi") else f
    w, _ = eigh(j)
    min_eig = float(w[0]) if w.size else 0.0
    return (min_eig >= CP_EIG_FLOOR, min_eig)


def identity_channel(d: int) -> CpMap:
    """The identity map on d x d matrices."""
    return CpMap(d, d, [np.eye(d, dtype=np.complex128)])


def unitary_channel(u) -> CpMap:
    """Conjugation a ↦ u† a u by a unitary (or isometry-shaped) matrix."""
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise ValueError("unitary_channel expects a square matrix")
    d = u.shape[0]
    if np.abs(u.conj().T @ u - np.eye(d)).max() > 1e-10:
        raise ValueError("matrix is not unitary")
    return CpMap(d, d, [u])


def depolarizing_channel(d: int) -> CpMap:
    """The completely depolarizing map a ↦ tr(a)/d * identity."""
    kraus = []
    scale = 1.0 / np.sqrt(d)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[i, j] = scale
            kraus.append(e)
    return CpMap(d, d, kraus)


def random_channel(d: int, n: int, m: int, seed, allow_degenerate: bool = False) -> CpMap:
    """Haar-random unital channel from d x d matrices to n x n matrices with m Kraus terms.

    Draws a Haar isometry V: C^n → C^d ⊗ C^m by QR of a complex Gaussian
    matrix (R-diagonal phases fixed so the draw is the unique Haar point) and
    slices it into Kraus operators; the result satisfies T(1) = 1 exactly.

    Requires d*m >= n (no isometry otherwise). Kraus rank equals m almost
    surely when m <= d*n; larger m forces a rank-deficient family, which is
    refused unless allow_degenerate=True.
    """
    if d < 1 or n < 1 or m < 1:
        raise ValueError("dimensions must be positive")
    if d * m < n:
        raise ValueError(f"no isometry with d*m = {d * m} < n = {n}")
    if m > d * n and not allow_degenerate:
        raise ValueError(
            f"m = {m} exceeds the maximal Kraus rank d*n = {d * n}; "
            "pass allow_degenerate=True to draw anyway"
        )
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d * m, n)) + 1j * rng.standard_normal((d * m, n))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    v = q * phases[np.newaxis, :]
    slices = v.reshape(d, m, n)
    return CpMap(d, n, [np.ascontiguousarray(slices[:, i, :]) for i in range(m)])


def compose(s: CpMap, t: CpMap) -> CpMap:
    """The composition S ∘ T acting as a ↦ S(T(a)).

    T maps d x d matrices to n x n matrices, S maps n x n matrices onward;
    the Kraus family of the composition is all products K_i L_j with K_i
    from T and L_j from S.
    """
    if t.d_out != s.d_in:
        raise ValueError(
            f"cannot compose: inner dimensions differ ({t.d_out} vs {s.d_in})"
        )
    kraus = [k @ l for k in t.kraus for l in s.kraus]
    return CpMap(t.d_in, s.d_out, kraus)


def check_density(rho, atol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix (Hermitian, psd up to roundoff, unit trace)."""
    r = check_positive_operator(rho, atol)
    tr = float(np.trace(r).real)
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density matrix has trace {tr!r}, expected 1")
    return r


def check_positive_operator(rho, atol: float = 1e-10) -> np.ndarray:
    """Validate a psd operator (Hermitian, eigenvalues ≥ -atol); returns it symmetrized."""
    r = check_hermitian(rho)
    w, _ = eigh(r)
    if w.size and w[0] < -atol:
        raise ValueError(f"operator is not psd (min eigenvalue {w[0]:.3e})")
    return r


def random_density(dim: int, rng, rank: int | None = None) -> np.ndarray:
    """Random full-trace density matrix from a Wishart draw of the given rank."""
    rng = np.random.default_rng(rng)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _complex_to_pairs(mat: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def _pairs_to_complex(rows, shape, what: str) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError(f"{what}: expected a matrix of [re, im] pairs")
    if shape is not None and arr.shape[:2] != shape:
        raise ValueError(f"{what}: expected shape {shape}, got {arr.shape[:2]}")
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_dict(t: CpMap) -> dict:
    """JSON-ready dict {"d_in", "d_out", "kraus"} with entries as [re, im] pairs."""
    return {
        "d_in": int(t.d_in),
        "d_out": int(t.d_out),
        "kraus": [_complex_to_pairs(k) for k in t.kraus],
    }


def channel_from_dict(obj: dict) -> CpMap:
    """Inverse of channel_to_dict; raises ValueError on malformed input."""
    if not isinstance(obj, dict):
        raise ValueError("channel document must be a JSON object")
    try:
        d_in = int(obj["d_in"])
        d_out = int(obj["d_out"])
        kraus_rows = obj["kraus"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"channel document missing or malformed field: {exc}") from exc
    if not isinstance(kraus_rows, list):
        raise ValueError("channel field 'kraus' must be a list of matrices")
    kraus = [
        _pairs_to_complex(rows, (d_in, d_out), f"kraus[{i}]")
        for i, rows in enumerate(kraus_rows)
    ]
    return CpMap(d_in, d_out, kraus)
