"""Exact rational scalars, tensor-space operators and operator-valued polynomials.

Every object here is immutable once built. Scalars are ``gmpy2.mpq``; matrices
are numpy object arrays of ``mpq`` marked read-only.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

__all__ = [
    "ZERO",
    "ONE",
    "scalar",
    "format_scalar",
    "exact_matrix",
    "TensorShape",
    "TensorOperator",
    "OperatorPolynomial",
    "ScalarPolynomial",
    "tensor_embed",
    "embed_operator",
    "permute_tensor_factors",
    "site_block_operator",
    "poly_eval",
    "poly_left_substitute",
]

ZERO = mpq(0)
ONE = mpq(1)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def scalar(value) -> mpq:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``mpq``, ``fractions.Fraction`` and strings ``"p"`` or
    ``"p/q"``. Floats are refused: they would smuggle rounding in.
    """
    if isinstance(value, mpq):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string 'p/q'")
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match is None:
            raise ValueError(f"not a rational literal: {value!r}")
        num, den = match.groups()
        if den is not None and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return mpq(int(num), int(den) if den is not None else 1)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact scalar")


def format_scalar(value) -> str:
    return str(scalar(value))


def exact_matrix(rows) -> np.ndarray:
    """Build a read-only object array of ``mpq`` from nested rows."""
    arr = np.array([[scalar(x) for x in row] for row in rows], dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d array of scalars")
    arr.flags.writeable = False
    return arr


def _zeros(n: int, m: int | None = None) -> np.ndarray:
    return np.full((n, n if m is None else m), ZERO, dtype=object)


def _eye(n: int) -> np.ndarray:
    out = _zeros(n)
    for i in range(n):
        out[i, i] = ONE
    return out


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TensorShape:
    """Ordered local dimensions of a tensor product of site spaces."""

    local_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.local_dims)
        if not dims:
            raise ValueError("a tensor shape needs at least one factor")
        if any(d <= 0 for d in dims):
            raise ValueError(f"local dimensions must be positive, got {dims}")
        object.__setattr__(self, "local_dims", dims)

    @property
    def n_sites(self) -> int:
        return len(self.local_dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.local_dims)

    def multi_index(self, flat: int) -> tuple[int, ...]:
        """Per-site indices of basis vector ``flat`` (site 0 most significant)."""
        out = []
        for d in reversed(self.local_dims):
            flat, r = divmod(flat, d)
            out.append(r)
        return tuple(reversed(out))

    def flat_index(self, idx: Sequence[int]) -> int:
        flat = 0
        for i, d in zip(idx, self.local_dims):
            flat = flat * d + i
        return flat

    def sub(self, sites: Sequence[int]) -> TensorShape:
        return TensorShape(tuple(self.local_dims[s] for s in sites))

    def __str__(self) -> str:
        return "x".join(map(str, self.local_dims))


class TensorOperator:
    """Dense square matrix over the rationals acting on a tensor-product space."""

    __slots__ = ("shape", "mat")
    __array_ufunc__ = None  # keep numpy from hijacking `ndarray @ op`

    def __init__(self, shape: TensorShape, mat):
        if not isinstance(shape, TensorShape):
            shape = TensorShape(tuple(shape))
        if not isinstance(mat, np.ndarray) or mat.dtype != object:
            mat = exact_matrix(mat)
        n = shape.total_dim
        if mat.shape != (n, n):
            raise ValueError(f"matrix {mat.shape} does not fit shape {shape} (dim {n})")
        if mat.flags.writeable:
            mat = _frozen(mat)
        self.shape = shape
        self.mat = mat

    @classmethod
    def identity(cls, shape: TensorShape) -> TensorOperator:
        return cls(shape, _eye(shape.total_dim))

    @classmethod
    def zeros(cls, shape: TensorShape) -> TensorOperator:
        return cls(shape, _zeros(shape.total_dim))

    @classmethod
    def diagonal(cls, shape: TensorShape, values: Iterable) -> TensorOperator:
        values = [scalar(v) for v in values]
        if len(values) != shape.total_dim:
            raise ValueError("wrong number of diagonal entries")
        out = _zeros(shape.total_dim)
        for i, v in enumerate(values):
            out[i, i] = v
        return cls(shape, out)

    @property
    def dim(self) -> int:
        return self.shape.total_dim

    def _check_shape(self, other: TensorOperator) -> None:
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __matmul__(self, other):
        if isinstance(other, TensorOperator):
            self._check_shape(other)
            return TensorOperator(self.shape, self.mat @ other.mat)
        if isinstance(other, OperatorPolynomial):
            return OperatorPolynomial(other.shape, [self @ c for c in other.coeffs])
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        self._check_shape(other)
        return TensorOperator(self.shape, self.mat + other.mat)

    def __sub__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        self._check_shape(other)
        return TensorOperator(self.shape, self.mat - other.mat)

    def __neg__(self):
        return TensorOperator(self.shape, -self.mat)

    def __mul__(self, c):
        if isinstance(c, (TensorOperator, OperatorPolynomial)):
            return NotImplemented
        return TensorOperator(self.shape, self.mat * scalar(c))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> TensorOperator:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = TensorOperator.identity(self.shape)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.mat == other.mat))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TensorOperator(shape={self.shape}, dim={self.dim})"

    def entry(self, i: int, j: int) -> mpq:
        return self.mat[i, j]

    def is_zero(self) -> bool:
        return not bool(np.any(self.mat != ZERO))

    def diagonal_entries(self) -> list[mpq]:
        return [self.mat[i, i] for i in range(self.dim)]

    def is_diagonal(self) -> bool:
        off = self.mat.copy()
        for i in range(self.dim):
            off[i, i] = ZERO
        return not bool(np.any(off != ZERO))

    def is_lower_triangular(self) -> bool:
        return not bool(np.any(np.triu(self.mat != ZERO, k=1)))

    def first_difference(self, other: TensorOperator):
        """``(row, col, mine, theirs)`` of the first differing entry, or None."""
        self._check_shape(other)
        diff = np.argwhere(self.mat != other.mat)
        if len(diff) == 0:
            return None
        i, j = (int(x) for x in diff[0])
        return i, j, self.mat[i, j], other.mat[i, j]

    def inverse_diagonal(self) -> TensorOperator:
        """Inverse of a diagonal operator; raises ZeroDivisionError on a zero pivot."""
        if not self.is_diagonal():
            raise ValueError("inverse_diagonal needs a diagonal operator")
        vals = []
        for i, v in enumerate(self.diagonal_entries()):
            if v == 0:
                raise ZeroDivisionError(f"zero diagonal entry at index {i}")
            vals.append(ONE / v)
        return TensorOperator.diagonal(self.shape, vals)

    def inverse(self) -> TensorOperator:
        """Exact Gauss-Jordan inverse."""
        n = self.dim
        a = np.array(self.mat, dtype=object)
        inv = _eye(n)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r, col] != 0), None)
            if pivot is None:
                raise ZeroDivisionError("singular operator")
            if pivot != col:
                a[[col, pivot]] = a[[pivot, col]]
                inv[[col, pivot]] = inv[[pivot, col]]
            p = a[col, col]
            a[col] = a[col] / p
            inv[col] = inv[col] / p
            for r in range(n):
                if r != col and a[r, col] != 0:
                    f = a[r, col]
                    a[r] = a[r] - f * a[col]
                    inv[r] = inv[r] - f * inv[col]
        return TensorOperator(self.shape, inv)

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.local_dims),
            "rows": self.dim,
            "cols": self.dim,
            "entries": [[str(x) for x in row] for row in self.mat],
        }

    @classmethod
    def from_json(cls, doc: dict) -> TensorOperator:
        shape = TensorShape(tuple(doc["shape"]))
        op = cls(shape, exact_matrix(doc["entries"]))
        if op.dim != doc["rows"] or op.dim != doc["cols"]:
            raise ValueError("rows/cols metadata disagree with entries")
        return op


def _as_local(local_op) -> np.ndarray:
    if isinstance(local_op, TensorOperator):
        return local_op.mat
    if isinstance(local_op, np.ndarray) and local_op.dtype == object:
        return local_op
    return exact_matrix(local_op)


def permute_tensor_factors(op: TensorOperator, perm) -> TensorOperator:
    """Move tensor slot ``perm.inverse()(j)`` to slot ``j``.

    With ``perm`` a :class:`~yangtwist.permutation.SitePermutation` (or any
    sequence of images), slot ``j`` of the result carries the factor that sat
    in slot ``perm^-1(j)`` of ``op``; the local dimensions move with it.
    """
    images = tuple(getattr(perm, "images", perm))
    n = op.shape.n_sites
    if len(images) != n:
        raise ValueError(f"permutation of length {len(images)} on {n} sites")
    inv = [0] * n
    for i, j in enumerate(images):
        inv[j] = i
    dims = op.shape.local_dims
    new_shape = TensorShape(tuple(dims[inv[j]] for j in range(n)))
    if images == tuple(range(n)):
        return op
    t = op.mat.reshape(dims + dims)
    axes = inv + [n + k for k in inv]
    out = np.ascontiguousarray(t.transpose(axes)).reshape(op.dim, op.dim)
    return TensorOperator(new_shape, out)


def embed_operator(local_op, sites: Sequence[int], shape: TensorShape) -> TensorOperator:
    """Embed an operator acting on ``sites`` (in that tensor order) into ``shape``."""
    sites = list(sites)
    if len(set(sites)) != len(sites):
        raise ValueError("repeated site in embedding")
    if any(not 0 <= s < shape.n_sites for s in sites):
        raise IndexError(f"site out of range for {shape.n_sites} sites")
    mat = _as_local(local_op)
    block_dim = math.prod(shape.local_dims[s] for s in sites)
    if mat.shape != (block_dim, block_dim):
        raise ValueError(
            f"operator of size {mat.shape} does not act on sites {sites} of shape {shape}"
        )
    rest = [s for s in range(shape.n_sites) if s not in sites]
    rest_dim = math.prod(shape.local_dims[s] for s in rest)
    full = np.kron(mat, _eye(rest_dim)) if rest else np.array(mat, dtype=object)
    order = sites + rest
    ordered = TensorOperator(TensorShape(tuple(shape.local_dims[s] for s in order)), full)
    return permute_tensor_factors(ordered, order)


def tensor_embed(local_op, site: int, shape: TensorShape) -> TensorOperator:
    """``Id x ... x local_op x ... x Id`` with ``local_op`` in slot ``site`` (0-based)."""
    mat = _as_local(local_op)
    d = shape.local_dims[site]
    if mat.shape != (d, d):
        raise ValueError(f"site {site} has dimension {d}, got a {mat.shape} operator")
    left = math.prod(shape.local_dims[:site])
    right = math.prod(shape.local_dims[site + 1 :])
    full = np.kron(np.kron(_eye(left), mat), _eye(right))
    return TensorOperator(shape, full)


def site_block_operator(shape: TensorShape, site: int, blocks: Sequence[TensorOperator]):
    """Operator acting as ``blocks[i]`` on the other sites when ``site`` is in basis state ``i``.

    This is the sum over ``i`` of ``|i><i|`` (on ``site``) tensor ``blocks[i]``.
    """
    d = shape.local_dims[site]
    if len(blocks) != d:
        raise ValueError(f"need {d} blocks, got {len(blocks)}")
    rest = [s for s in range(shape.n_sites) if s != site]
    if not rest:
        return TensorOperator.diagonal(shape, [b.mat[0, 0] for b in blocks])
    rest_dim = math.prod(shape.local_dims[s] for s in rest)
    full = _zeros(d * rest_dim)
    for i, blk in enumerate(blocks):
        if blk.dim != rest_dim:
            raise ValueError("block dimension mismatch")
        full[i * rest_dim : (i + 1) * rest_dim, i * rest_dim : (i + 1) * rest_dim] = blk.mat
    ordered = TensorOperator(TensorShape((d,) + tuple(shape.local_dims[s] for s in rest)), full)
    return permute_tensor_factors(ordered, [site] + rest)


class ScalarPolynomial:
    """Univariate polynomial with rational coefficients, lowest power first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_roots(cls, roots: Iterable) -> ScalarPolynomial:
        out = cls([1])
        for r in roots:
            out = out * cls([-scalar(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> mpq:
        x = scalar(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_spoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return ScalarPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return ScalarPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_spoly(other))

    def __rsub__(self, other):
        return _as_spoly(other) - self

    def __mul__(self, other):
        other = _as_spoly(other)
        if not self.coeffs or not other.coeffs:
            return ScalarPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ScalarPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            other = _as_spoly(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def shifted(self, c) -> ScalarPolynomial:
        """The polynomial ``u -> p(u + c)``."""
        return ScalarPolynomial(_shift_coeffs(self.coeffs, scalar(c), ZERO))

    def divmod(self, divisor: ScalarPolynomial) -> tuple[ScalarPolynomial, ScalarPolynomial]:
        if not divisor.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        lead = divisor.coeffs[-1]
        dd = divisor.degree
        quot = [ZERO] * max(len(rem) - dd, 0)
        for k in range(len(rem) - dd - 1, -1, -1):
            q = rem[k + dd] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[k + j] -= q * c
        return ScalarPolynomial(quot), ScalarPolynomial(rem[:dd])

    def __repr__(self) -> str:
        return f"ScalarPolynomial({[str(c) for c in self.coeffs]})"


def _as_spoly(x) -> ScalarPolynomial:
    if isinstance(x, ScalarPolynomial):
        return x
    if isinstance(x, (TensorOperator, OperatorPolynomial)):
        raise TypeError("expected a scalar polynomial")
    return ScalarPolynomial([x])


def _shift_coeffs(coeffs: Sequence, c: mpq, zero):
    """Coefficients of ``p(u + c)`` given those of ``p``; works for matrix coefficients."""
    n = len(coeffs)
    out = [zero] * n
    for i, a in enumerate(coeffs):
        for j in range(i + 1):
            w = math.comb(i, j) * c ** (i - j)
            if w:
                out[j] = out[j] + a * w
    return out


class OperatorPolynomial:
    """Polynomial in the spectral parameter with :class:`TensorOperator` coefficients."""

    __slots__ = ("shape", "coeffs")
    __array_ufunc__ = None

    def __init__(self, shape: TensorShape, coeffs: Iterable[TensorOperator] = ()):
        cs = list(coeffs)
        for c in cs:
            if c.shape != shape:
                raise ValueError(f"coefficient shape {c.shape} differs from {shape}")
        while cs and cs[-1].is_zero():
            cs.pop()
        self.shape = shape
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, shape: TensorShape) -> OperatorPolynomial:
        return cls(shape)

    @classmethod
    def constant(cls, op: TensorOperator) -> OperatorPolynomial:
        return cls(op.shape, [op])

    @classmethod
    def linear(cls, const: TensorOperator, slope: TensorOperator) -> OperatorPolynomial:
        """``const + u * slope``."""
        return cls(const.shape, [const, slope])

    @classmethod
    def from_scalar(cls, p: ScalarPolynomial, shape: TensorShape) -> OperatorPolynomial:
        eye = TensorOperator.identity(shape)
        return cls(shape, [eye * c for c in p.coeffs])

    @classmethod
    def diagonal(cls, shape: TensorShape, polys: Sequence[ScalarPolynomial]) -> OperatorPolynomial:
        """Diagonal polynomial whose ``i``-th diagonal entry is ``polys[i]``."""
        if len(polys) != shape.total_dim:
            raise ValueError("one polynomial per basis vector is required")
        deg = max((p.degree for p in polys), default=-1)
        coeffs = []
        for k in range(deg + 1):
            coeffs.append(
                TensorOperator.diagonal(
                    shape, [p.coeffs[k] if k < len(p.coeffs) else ZERO for p in polys]
                )
            )
        return cls(shape, coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> TensorOperator:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return TensorOperator.zeros(self.shape)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_shape(self, other) -> None:
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def _coerce(self, other) -> OperatorPolynomial:
        if isinstance(other, OperatorPolynomial):
            self._check_shape(other)
            return other
        if isinstance(other, TensorOperator):
            self._check_shape(other)
            return OperatorPolynomial.constant(other)
        if isinstance(other, ScalarPolynomial):
            return OperatorPolynomial.from_scalar(other, self.shape)
        return OperatorPolynomial.from_scalar(ScalarPolynomial([other]), self.shape)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OperatorPolynomial(
            self.shape, [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return OperatorPolynomial(self.shape, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __matmul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return OperatorPolynomial.zero(self.shape)
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                prod = a @ b
                out[i + j] = prod if out[i + j] is None else out[i + j] + prod
        return OperatorPolynomial(self.shape, out)

    def __rmatmul__(self, other):
        return self._coerce(other) @ self

    def __mul__(self, c):
        if isinstance(c, ScalarPolynomial):
            return self @ c
        if isinstance(c, (TensorOperator, OperatorPolynomial)):
            return NotImplemented
        c = scalar(c)
        return OperatorPolynomial(self.shape, [a * c for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OperatorPolynomial):
            return NotImplemented
        return self.shape == other.shape and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self) -> str:
        return f"OperatorPolynomial(shape={self.shape}, degree={self.degree})"

    def __call__(self, u0) -> TensorOperator:
        return poly_eval(self, u0)

    def shifted(self, c) -> OperatorPolynomial:
        """The polynomial ``u -> p(u + c)``."""
        zero = TensorOperator.zeros(self.shape)
        return OperatorPolynomial(self.shape, _shift_coeffs(self.coeffs, scalar(c), zero))

    def map(self, fn, shape: TensorShape | None = None) -> OperatorPolynomial:
        """Apply a linear map coefficient-wise (e.g. a change of basis or an embedding)."""
        return OperatorPolynomial(shape or self.shape, [fn(c) for c in self.coeffs])

    def conjugate(self, g: TensorOperator, g_inv: TensorOperator) -> OperatorPolynomial:
        return self.map(lambda c: g @ c @ g_inv)

    def first_difference(self, other: OperatorPolynomial):
        """``(power, row, col, mine, theirs)`` of the first differing coefficient entry."""
        self._check_shape(other)
        for k in range(max(len(self.coeffs), len(other.coeffs))):
            diff = self.coefficient(k).first_difference(other.coefficient(k))
            if diff is not None:
                return (k,) + diff
        return None

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape.local_dims),
            "degree": self.degree,
            "coefficients": [c.to_json()["entries"] for c in self.coeffs],
        }


def poly_eval(p: OperatorPolynomial, u0) -> TensorOperator:
    """Evaluate at a scalar by Horner's rule."""
    u0 = scalar(u0)
    acc = TensorOperator.zeros(p.shape)
    for c in reversed(p.coeffs):
        acc = acc * u0 + c
    return acc


def poly_left_substitute(p: OperatorPolynomial, x: TensorOperator) -> TensorOperator:
    """Substitute an operator for ``u`` with every power of ``x`` kept to the left."""
    if x.shape != p.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {x.shape}")
    # sum_k x^k P_k  =  P_0 + x (P_1 + x (P_2 + ...))
    acc = TensorOperator.zeros(p.shape)
    for c in reversed(p.coeffs):
        acc = x @ acc + c
    return acc


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)
