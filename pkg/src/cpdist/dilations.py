"""Stinespring dilations of cp maps, and constructive moves between them.

A dilation of ``T`` (mapping d x d matrices to n x n matrices) is an operator

    V : C^n → C^d ⊗ C^m      with      V† (a ⊗ 1_m) V = T(a),

stored as a (d*m, n) matrix whose rows are indexed (d-factor, multiplicity)
with the d-factor major. The representation on the dilation space is always
the canonical amplification a ↦ a ⊗ 1_m, so only the multiplicity m is kept.
Slicing V along the multiplicity index recovers a Kraus family and vice
versa; the minimal dilation uses the Kraus family extracted from the Choi
eigendecomposition, so m equals the Kraus rank.

Two constructions produce dilations of *different* maps living in one common
representation space, which is what distance-of-dilation computations need:

* :func:`common_pair_from_contraction` pads the minimal dilations of two maps
  into multiplicity m1 + m2 and rotates the second one by a contraction
  w : C^m2 → C^m1 together with its defect sqrt(1 - w† w).
* :func:`triangle_dilations` splices two such common pairs (for T1,T2 and
  T2,T3) into a single multiplicity m̂1 + m̂2 + m̂3 representation carrying
  all three maps at once, preserving both pairwise overlaps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, operator_norm, psd_sqrt
from .maps import CpMap

__all__ = [
    "Dilation",
    "Contraction",
    "dilation_from_kraus",
    "minimal_dilation",
    "verify_dilation",
    "intertwiner_from_minimal",
    "common_pair_from_contraction",
    "triangle_dilations",
]

# A pair (V, T) is accepted as a dilation when the worst block residual
# max_ab ||V_a† V_b - T(E_ab)|| stays below this.
DILATION_RTOL = 1e-8

# intertwiner_from_minimal refuses pairs whose Kraus spans disagree by more
# than this (they would not dilate the same map).
INTERTWINER_RTOL = 1e-6


@dataclass
class Dilation:
    """An isometry-like dilation operator V: C^n → C^d ⊗ C^m."""

    d: int
    n: int
    m: int
    v: np.ndarray

    def __post_init__(self):
        if self.d < 1 or self.n < 1 or self.m < 0:
            raise ValueError("dilation dimensions must be positive (m may be 0)")
        self.v = as_matrix(self.v)
        if self.v.shape != (self.d * self.m, self.n):
            raise ValueError(
                f"dilation operator has shape {self.v.shape}, "
                f"expected {(self.d * self.m, self.n)}"
            )

    def kraus_slices(self) -> list:
        """Kraus family K_i[a, :] = V[(a, i), :] read off the multiplicity index."""
        r = self.v.reshape(self.d, self.m, self.n)
        return [np.ascontiguousarray(r[:, i, :]) for i in range(self.m)]

    def map(self) -> CpMap:
        """The cp map this operator dilates."""
        return CpMap(self.d, self.n, self.kraus_slices())

    def padded(self, extra: int) -> "Dilation":
        """Same map, multiplicity enlarged by `extra` zero slots."""
        if extra < 0:
            raise ValueError("padding must be nonnegative")
        r = self.v.reshape(self.d, self.m, self.n)
        out = np.zeros((self.d, self.m + extra, self.n), dtype=np.complex128)
        out[:, : self.m, :] = r
        return Dilation(self.d, self.n, self.m + extra, out.reshape(-1, self.n))


@dataclass
class Contraction:
    """A contraction w: C^m2 → C^m1 (operator norm at most 1 up to roundoff)."""

    w: np.ndarray

    def __post_init__(self):
        self.w = as_matrix(self.w)
        norm = operator_norm(self.w)
        if norm > 1.0 + 1e-10:
            raise ValueError(f"contraction violation: operator norm {norm!r} > 1")

    @property
    def m1(self) -> int:
        return self.w.shape[0]

    @property
    def m2(self) -> int:
        return self.w.shape[1]

    def defect(self) -> np.ndarray:
        """sqrt(1 - w† w), the defect operator on C^m2."""
        gram = self.w.conj().T @ self.w
        return psd_sqrt(np.eye(self.m2) - gram)


def dilation_from_kraus(kraus, d: int, n: int) -> Dilation:
    """Stack a Kraus family into the dilation operator with multiplicity len(kraus)."""
    ops = [as_matrix(k) for k in kraus]
    m = len(ops)
    out = np.zeros((d, m, n), dtype=np.complex128)
    for i, k in enumerate(ops):
        if k.shape != (d, n):
            raise ValueError(f"Kraus operator has shape {k.shape}, expected {(d, n)}")
        out[:, i, :] = k
    return Dilation(d, n, m, out.reshape(d * m, n))


def minimal_dilation(t: CpMap) -> Dilation:
    """The minimal dilation of `t`: multiplicity equals the Kraus rank.

    Built from the Kraus family of the Choi eigendecomposition, so repeated
    calls are deterministic and two equal maps get identical minimal data.
    """
    from .maps import kraus_from_choi

    kraus = kraus_from_choi(t.choi, t.d_in, t.d_out)
    return dilation_from_kraus(kraus, t.d_in, t.d_out)


def verify_dilation(dil: Dilation, t: CpMap) -> float:
    """Worst-case residual max_ab || V_a† V_b - T(E_ab) || over matrix units.

    V_a is the a-th d-factor block row of V; the pair (dil, t) is a genuine
    dilation iff the residual vanishes.
    """
    if (dil.d, dil.n) != (t.d_in, t.d_out):
        raise ValueError(
            f"dimension mismatch: dilation ({dil.d},{dil.n}) vs map ({t.d_in},{t.d_out})"
        )
    blocks = dil.v.reshape(dil.d, dil.m, dil.n)
    e = np.zeros((dil.d, dil.d), dtype=np.complex128)
    worst = 0.0
    for a in range(dil.d):
        for b in range(dil.d):
            e[a, b] = 1.0
            res = operator_norm(blocks[a].conj().T @ blocks[b] - t.apply(e))
            e[a, b] = 0.0
            worst = max(worst, res)
    return worst


def intertwiner_from_minimal(minimal: Dilation, dil: Dilation,
                             residual_tol: float = INTERTWINER_RTOL) -> np.ndarray:
    """Isometry u: C^m̂ → C^m with (1_d ⊗ u) V̂ = V for dilations of one map.

    Solves K_j = sum_i u_ji K̂_i in least squares over the flattened Kraus
    families and refuses (ValueError) if the residual exceeds `residual_tol`,
    which happens exactly when the two operators do not dilate the same map.
    """
    if (minimal.d, minimal.n) != (dil.d, dil.n):
        raise ValueError("dilations act between different spaces")
    mhat, m = minimal.m, dil.m
    if mhat == 0:
        u = np.zeros((m, 0), dtype=np.complex128)
        if operator_norm(dil.v) > residual_tol:
            raise ValueError("dilations do not dilate the same map (zero vs nonzero)")
        return u
    khat = minimal.v.reshape(minimal.d, mhat, minimal.n)
    kmat = dil.v.reshape(dil.d, m, dil.n)
    a = khat.transpose(1, 0, 2).reshape(mhat, -1).T      # (d*n, mhat)
    b = kmat.transpose(1, 0, 2).reshape(m, -1).T         # (d*n, m)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)            # (mhat, m)
    u = x.T
    residual = np.abs(a @ x - b).max()
    if residual > residual_tol:
        raise ValueError(
            f"dilations do not dilate the same map (intertwiner residual {residual:.3e})"
        )
    # u is automatically an isometry because the minimal Kraus family is a
    # basis of the common span; roundoff aside, u† u = 1_m̂ .
    return u


def _mix_slices(coeff: np.ndarray, slices: np.ndarray) -> np.ndarray:
    """Rows L_i = sum_j coeff_ij K_j for a stacked Kraus tensor (m, d, n)."""
    if slices.shape[0] == 0:
        return np.zeros((coeff.shape[0],) + slices.shape[1:], dtype=np.complex128)
    return np.einsum("ij,jab->iab", coeff, slices)


def common_pair_from_contraction(t1: CpMap, t2: CpMap, contraction: Contraction):
    """Dilations of T1 and T2 in one common representation, steered by a contraction.

    With minimal dilations V̂1 (multiplicity m1) and V̂2 (multiplicity m2) and
    a contraction w: C^m2 → C^m1, builds on multiplicity m1 + m2:

        V1 = V̂1 ⊕ 0,
        V2 = (1 ⊗ w) V̂2  ⊕  (1 ⊗ sqrt(1 - w† w)) V̂2,

    so that V1† V2 = sum_ij w_ij K̂_i^(1)† K̂_j^(2). Both operators dilate
    their maps exactly; the choice of w only moves the overlap.
    """
    if (t1.d_in, t1.d_out) != (t2.d_in, t2.d_out):
        raise ValueError("maps must share input and output dimensions")
    d, n = t1.d_in, t1.d_out
    min1 = minimal_dilation(t1)
    min2 = minimal_dilation(t2)
    m1, m2 = min1.m, min2.m
    if contraction.w.shape != (m1, m2):
        raise ValueError(
            f"contraction has shape {contraction.w.shape}, "
            f"expected {(m1, m2)} from the minimal multiplicities"
        )
    k1 = min1.v.reshape(d, m1, n).transpose(1, 0, 2)     # (m1, d, n)
    k2 = min2.v.reshape(d, m2, n).transpose(1, 0, 2)     # (m2, d, n)

    total = m1 + m2
    v1 = np.zeros((d, total, n), dtype=np.complex128)
    v1[:, :m1, :] = k1.transpose(1, 0, 2)

    v2 = np.zeros((d, total, n), dtype=np.complex128)
    v2[:, :m1, :] = _mix_slices(contraction.w, k2).transpose(1, 0, 2)
    v2[:, m1:, :] = _mix_slices(contraction.defect(), k2).transpose(1, 0, 2)

    d1 = Dilation(d, n, total, v1.reshape(d * total, n))
    d2 = Dilation(d, n, total, v2.reshape(d * total, n))
    return d1, d2


def triangle_dilations(t1: CpMap, t2: CpMap, t3: CpMap, pair12, pair23):
    """Three dilations in one representation preserving both pairwise overlaps.

    `pair12` = (V1, V2) must be a common-representation pair for (T1, T2) and
    `pair23` = (W2, W3) one for (T2, T3); all five inputs must agree on the
    underlying spaces. The output (Ṽ1, Ṽ2, Ṽ3) lives on multiplicity
    m̂1 + m̂2 + m̂3 (the minimal multiplicities) and satisfies

        Ṽ2† Ṽ1 = V2† V1      and      Ṽ2† Ṽ3 = W2† W3,

    so the operator-norm triangle inequality chains through Ṽ2:
    ||Ṽ1 - Ṽ3|| ≤ ||V1 - V2|| + ||W2 - W3||.
    """
    for t, name in ((t1, "t1"), (t2, "t2"), (t3, "t3")):
        if (t.d_in, t.d_out) != (t1.d_in, t1.d_out):
            raise ValueError(f"map {name} acts between different spaces")
    v1, v2 = pair12
    w2, w3 = pair23
    for dil, t, name in ((v1, t1, "pair12[0]"), (v2, t2, "pair12[1]"),
                         (w2, t2, "pair23[0]"), (w3, t3, "pair23[1]")):
        res = verify_dilation(dil, t)
        if res > DILATION_RTOL:
            raise ValueError(f"{name} does not dilate its map (residual {res:.3e})")
    if v1.m != v2.m or w2.m != w3.m:
        raise ValueError("each pair must share one representation space")

    d, n = t1.d_in, t1.d_out
    min1, min2, min3 = minimal_dilation(t1), minimal_dilation(t2), minimal_dilation(t3)
    mh1, mh2, mh3 = min1.m, min2.m, min3.m

    u1 = intertwiner_from_minimal(min1, v1)              # (v1.m, mh1)
    u2 = intertwiner_from_minimal(min2, v2)              # (v2.m, mh2)
    u2b = intertwiner_from_minimal(min2, w2)             # (w2.m, mh2)
    u3 = intertwiner_from_minimal(min3, w3)              # (w3.m, mh3)

    k1 = min1.v.reshape(d, mh1, n).transpose(1, 0, 2)
    k2 = min2.v.reshape(d, mh2, n).transpose(1, 0, 2)
    k3 = min3.v.reshape(d, mh3, n).transpose(1, 0, 2)
    sl1 = v1.v.reshape(d, v1.m, n).transpose(1, 0, 2)
    sl3 = w3.v.reshape(d, w3.m, n).transpose(1, 0, 2)

    total = mh1 + mh2 + mh3

    def assemble(first, second, third):
        out = np.zeros((d, total, n), dtype=np.complex128)
        if first is not None:
            out[:, :mh1, :] = first.transpose(1, 0, 2)
        if second is not None:
            out[:, mh1:mh1 + mh2, :] = second.transpose(1, 0, 2)
        if third is not None:
            out[:, mh1 + mh2:, :] = third.transpose(1, 0, 2)
        return out.reshape(d * total, n)

    # Ṽ1: defect part on the first slot, the pair12 overlap pulled back to
    # the minimal multiplicity of T2 on the middle slot.
    c1 = u1.conj().T @ u2 @ u2.conj().T @ u1             # (mh1, mh1)
    s1 = psd_sqrt(np.eye(mh1) - c1)
    v1_first = _mix_slices(s1, k1)
    v1_mid = _mix_slices(u2.conj().T, sl1)               # rows: sum_j conj(u2)_ji K_j^(V1)
    tilde1 = Dilation(d, n, total, assemble(v1_first, v1_mid, None))

    # Ṽ2: the minimal dilation of T2 sits in the middle slot.
    tilde2 = Dilation(d, n, total, assemble(None, k2, None))

    # Ṽ3: mirror image of Ṽ1 through pair23.
    c3 = u3.conj().T @ u2b @ u2b.conj().T @ u3           # (mh3, mh3)
    s3 = psd_sqrt(np.eye(mh3) - c3)
    v3_mid = _mix_slices(u2b.conj().T, sl3)
    v3_third = _mix_slices(s3, k3)
    tilde3 = Dilation(d, n, total, assemble(None, v3_mid, v3_third))

    return tilde1, tilde2, tilde3
