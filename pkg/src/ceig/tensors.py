"""Value types and contraction algebra for piezoelectric-type tensors.

A piezoelectric-type tensor is an order-3 real tensor A = (a_ijk) that is
symmetric in its last two indices. The symmetric fourth-order companion
of A is built by summing products of horizontal slices and then fully
symmetrising; its quartic form on the unit sphere encodes the squared
largest coupling constant of A (see :mod:`ceig.spectral`).

Dense row-major storage throughout: dimensions in every intended use are
tiny (n <= 5), so n^3 / n^4 arrays beat any folded scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadLength,
    DimensionMismatch,
    NonFinite,
    ParseError,
    SymmetryViolation,
)
from .jacobi import jacobi_eigh

_PERMS4 = (
    (0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3), (0, 2, 3, 1), (0, 3, 1, 2), (0, 3, 2, 1),
    (1, 0, 2, 3), (1, 0, 3, 2), (1, 2, 0, 3), (1, 2, 3, 0), (1, 3, 0, 2), (1, 3, 2, 0),
    (2, 0, 1, 3), (2, 0, 3, 1), (2, 1, 0, 3), (2, 1, 3, 0), (2, 3, 0, 1), (2, 3, 1, 0),
    (3, 0, 1, 2), (3, 0, 2, 1), (3, 1, 0, 2), (3, 1, 2, 0), (3, 2, 0, 1), (3, 2, 1, 0),
)


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PiezoTensor:
    """Order-3, dimension-n real tensor with a_ijk == a_ikj exactly.

    Instances are immutable; construct through :func:`make_piezo` (or the
    arithmetic operators below, which preserve the symmetry bit-exactly).
    """

    n: int
    entries: np.ndarray

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise BadLength(f"dimension must be a positive integer, got {self.n!r}")
        arr = np.asarray(self.entries, dtype=float)
        if arr.shape != (self.n, self.n, self.n):
            raise BadLength(
                f"expected {self.n}^3 entries, got array of shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise NonFinite("tensor entries must be finite")
        if not np.array_equal(arr, arr.transpose(0, 2, 1)):
            raise SymmetryViolation("entries are not symmetric in the last two indices")
        object.__setattr__(self, "entries", _freeze(arr))

    def slice(self, i):
        """Horizontal slice A(i, :, :), a symmetric n x n matrix."""
        return self.entries[i]

    def __add__(self, other):
        if not isinstance(other, PiezoTensor):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"dimension mismatch: {self.n} vs {other.n}")
        return PiezoTensor(self.n, self.entries + other.entries)

    def __sub__(self, other):
        if not isinstance(other, PiezoTensor):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"dimension mismatch: {self.n} vs {other.n}")
        return PiezoTensor(self.n, self.entries - other.entries)

    def __mul__(self, t):
        return PiezoTensor(self.n, self.entries * float(t))

    __rmul__ = __mul__

    def __neg__(self):
        return PiezoTensor(self.n, -self.entries)


@dataclass(frozen=True)
class SymTensor4:
    """Fully symmetric order-4 tensor; entries invariant under all 24
    index permutations, enforced exactly at construction."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise BadLength(f"dimension must be a positive integer, got {self.n!r}")
        arr = np.asarray(self.entries, dtype=float)
        if arr.shape != (self.n,) * 4:
            raise BadLength(
                f"expected {self.n}^4 entries, got array of shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise NonFinite("tensor entries must be finite")
        for perm in _PERMS4[1:]:
            if not np.array_equal(arr, arr.transpose(perm)):
                raise SymmetryViolation(
                    f"entries are not invariant under index permutation {perm}"
                )
        object.__setattr__(self, "entries", _freeze(arr))

    def __sub__(self, other):
        if not isinstance(other, SymTensor4):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"dimension mismatch: {self.n} vs {other.n}")
        # Entry-wise difference of two exactly symmetric arrays stays
        # exactly symmetric, so the constructor check passes.
        return SymTensor4(self.n, self.entries - other.entries)

    def __neg__(self):
        return SymTensor4(self.n, -self.entries)

    def __mul__(self, t):
        return SymTensor4(self.n, self.entries * float(t))

    __rmul__ = __mul__


def make_piezo(n, raw, mode="strict"):
    """Build a PiezoTensor from n^3 raw values in lexicographic layout.

    ``strict`` requires a_ijk == a_ikj to already hold bit-for-bit;
    ``auto_symmetrize`` averages the two orderings,
    e_ijk = (raw_ijk + raw_ikj) / 2.
    """
    if not isinstance(n, int) or n < 1:
        raise BadLength(f"dimension must be a positive integer, got {n!r}")
    arr = np.asarray(raw, dtype=float).reshape(-1)
    if arr.size != n ** 3:
        raise BadLength(f"expected {n ** 3} values for n={n}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("raw entries must be finite")
    arr = arr.reshape(n, n, n)
    if mode == "strict":
        if not np.array_equal(arr, arr.transpose(0, 2, 1)):
            bad = np.argwhere(arr != arr.transpose(0, 2, 1))[0]
            i, j, k = (int(v) + 1 for v in bad)
            raise SymmetryViolation(
                f"strict mode: raw[{i},{j},{k}] != raw[{i},{k},{j}]"
            )
        return PiezoTensor(n, arr)
    if mode == "auto_symmetrize":
        return PiezoTensor(n, 0.5 * (arr + arr.transpose(0, 2, 1)))
    raise ValueError(f"unknown mode {mode!r}")


def _check_vec(v, n, label="vector"):
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != n:
        raise DimensionMismatch(f"{label} has length {v.size}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise NonFinite(f"{label} must be finite")
    return v


def apply_yy(A, y):
    """Vector with i-th entry sum_jk a_ijk y_j y_k (unit norm not required)."""
    y = _check_vec(y, A.n, "y")
    return np.einsum("ijk,j,k->i", A.entries, y, y)


def apply_xay(A, x, y):
    """Vector with i-th entry sum_jk a_jki x_j y_k."""
    x = _check_vec(x, A.n, "x")
    y = _check_vec(y, A.n, "y")
    return np.einsum("jki,j,k->i", A.entries, x, y)


def form_xayy(A, x, y):
    """Trilinear form sum_ijk a_ijk x_i y_j y_k."""
    x = _check_vec(x, A.n, "x")
    y = _check_vec(y, A.n, "y")
    via_right = float(np.dot(x, apply_yy(A, y)))
    via_left = float(np.dot(y, apply_xay(A, x, y)))
    # The two contraction orders are the same sum reordered.
    scale = max(1.0, abs(via_right))
    assert abs(via_right - via_left) <= 1e-12 * scale, (via_right, via_left)
    return via_right


def lift(A):
    """Symmetric fourth-order companion of a piezoelectric-type tensor.

    First forms the partially symmetric product tensor
    b_{abcd} = sum_i a_iab a_icd, then averages the three pairings
    (ab|cd), (ac|bd), (ad|bc) and canonicalises entries over sorted index
    tuples so the full 24-permutation symmetry holds bit-exactly.
    """
    a = A.entries
    b = np.einsum("iab,icd->abcd", a, a)
    # transpose axes are the inverse permutations of the index maps
    # (a,b,c,d)->(a,c,b,d) and (a,b,c,d)->(a,d,b,c)
    bbar = (b + b.transpose(0, 2, 1, 3) + b.transpose(0, 2, 3, 1)) / 3.0
    # Gather every entry from its index-sorted representative; this turns
    # ulp-level reordering noise into exact permutation invariance.
    idx = np.indices((A.n,) * 4)
    srt = np.sort(idx.reshape(4, -1), axis=0).reshape(idx.shape)
    canon = bbar[srt[0], srt[1], srt[2], srt[3]]
    return SymTensor4(A.n, canon)


def eval_quartic(T, y):
    """Full quadruple contraction T y^4."""
    y = _check_vec(y, T.n, "y")
    return float(np.einsum("ijkl,i,j,k,l->", T.entries, y, y, y, y))


def apply_cubic(T, y):
    """Vector with i-th entry sum_jkl t_ijkl y_j y_k y_l."""
    y = _check_vec(y, T.n, "y")
    return np.einsum("ijkl,j,k,l->i", T.entries, y, y, y)


def sub(T1, T2):
    """Entry-wise difference of two symmetric fourth-order tensors."""
    return T1 - T2


def unfold_gram(E):
    """Gram matrix G_pq = sum_jk e_pjk e_qjk of the slice unfolding."""
    return np.einsum("pjk,qjk->pq", E.entries, E.entries)


def unfold_spectral_norm(E):
    """Spectral norm of the n x n^2 matrix of concatenated slices E(i,:,:).

    Computed as the root of the largest eigenvalue of the n x n Gram
    matrix of the unfolding (cyclic Jacobi); the Gram route is agnostic
    to the concatenation axis, which the two unfolding orientations share.
    """
    w, _ = jacobi_eigh(unfold_gram(E), tol=1e-12)
    return float(np.sqrt(max(w[-1], 0.0)))


# ---------------------------------------------------------------------------
# Tensor text format
#
# UTF-8, line-oriented. '#' starts a comment. The first non-comment line is
# 'n <dim>' optionally followed by 'strict'. Entry lines are
# 'i j k value' with 1-based indices; omitted entries are zero. A line
# 'name <text>' names the tensor. Unless 'strict' is present the loader
# symmetrises the raw values over the last two indices.


def parse_tensor_text(text, path="<string>"):
    """Parse the tensor text format. Returns (PiezoTensor, name or None)."""
    n = None
    strict = False
    name = None
    raw = None
    seen = set()
    header_line = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if n is None:
            if fields[0] != "n" or len(fields) not in (2, 3):
                raise ParseError(path, line_no, "expected header 'n <dim> [strict]'")
            try:
                n = int(fields[1])
            except ValueError:
                raise ParseError(path, line_no, f"bad dimension {fields[1]!r}") from None
            if n < 1:
                raise ParseError(path, line_no, "dimension must be >= 1")
            if len(fields) == 3:
                if fields[2] != "strict":
                    raise ParseError(path, line_no, f"unknown header flag {fields[2]!r}")
                strict = True
            raw = np.zeros((n, n, n))
            header_line = line_no
            continue
        if fields[0] == "name":
            name = body[len("name"):].strip()
            if not name:
                raise ParseError(path, line_no, "empty name")
            continue
        if len(fields) != 4:
            raise ParseError(path, line_no, "expected 'i j k value'")
        try:
            i, j, k = (int(f) for f in fields[:3])
        except ValueError:
            raise ParseError(path, line_no, f"bad index in {body!r}") from None
        try:
            value = float(fields[3])
        except ValueError:
            raise ParseError(path, line_no, f"bad value {fields[3]!r}") from None
        if not (1 <= i <= n and 1 <= j <= n and 1 <= k <= n):
            raise ParseError(path, line_no, f"index out of range for n={n}")
        if (i, j, k) in seen:
            raise ParseError(path, line_no, f"duplicate entry ({i},{j},{k})")
        seen.add((i, j, k))
        raw[i - 1, j - 1, k - 1] = value
    if n is None:
        raise ParseError(path, 0, "missing 'n <dim>' header")
    mode = "strict" if strict else "auto_symmetrize"
    try:
        tensor = make_piezo(n, raw, mode=mode)
    except SymmetryViolation as exc:
        raise ParseError(path, header_line, str(exc)) from exc
    return tensor, name


def format_tensor_text(A, name=None, strict=True):
    """Render a PiezoTensor in the text format (nonzero entries only)."""
    lines = [f"n {A.n} strict" if strict else f"n {A.n}"]
    if name:
        lines.append(f"name {name}")
    for (i, j, k), v in np.ndenumerate(A.entries):
        if v != 0.0:
            lines.append(f"{i + 1} {j + 1} {k + 1} {float(v)!r}")
    return "\n".join(lines) + "\n"
