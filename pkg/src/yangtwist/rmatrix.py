"""Higher-spin rational R-matrices from the Gauss decomposition, and R^sigma for permutations."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .chain import ChainSpec, NonGenericSpecError, fundamental_r, monodromy
from .exact import (
    ONE,
    TensorOperator,
    TensorShape,
    embed_operator,
    format_scalar,
    permute_tensor_factors,
    scalar,
    tensor_embed,
)
from .permutation import SitePermutation, all_permutations, as_permutation
from .report import CheckResult, compare
from .spin import spin_matrices

__all__ = [
    "RMatrix",
    "fundamental_r",
    "higher_spin_r",
    "r0_eigenvalue",
    "r0_truncated",
    "generalized_r",
    "r_from_word",
    "check_word_independence",
    "check_composition_law",
    "check_unitarity",
    "check_intertwining",
]


@dataclass(frozen=True, eq=False)
class RMatrix:
    op: TensorOperator
    r1: int
    z1: mpq
    r2: int
    z2: mpq
    eta: mpq

    @property
    def params(self) -> tuple:
        return (self.r1, self.z1, self.r2, self.z2, self.eta)

    def to_json(self) -> dict:
        return {
            "object": "r",
            "params": {
                "r1": self.r1,
                "z1": format_scalar(self.z1),
                "r2": self.r2,
                "z2": format_scalar(self.z2),
                "eta": format_scalar(self.eta),
            },
            "matrix": self.op.to_json(),
        }


def _nonzero(value: mpq, what: str) -> mpq:
    if value == 0:
        raise NonGenericSpecError(f"non-generic parameters: {what} = 0")
    return value


def _ladder_weight(lam: mpq, s1: mpq, s2: mpq, k: int) -> mpq:
    """``1 / (k! prod_{j=1..k} (lam + s1 - s2 + j))``."""
    den = mpq(math.factorial(k))
    for j in range(1, k + 1):
        den *= _nonzero(lam + s1 - s2 + j, f"lambda + ({s1 - s2 + j})")
    return ONE / den


def r0_eigenvalue(lam, l1, l2, s1, s2) -> mpq:
    """Diagonal Gauss factor on the joint ``S^z`` eigenvector ``(s1, s2)``.

    The infinite product telescopes family by family; what survives is
    ``prod_{j<p} (lam-l1-l2+j)/(lam-l1-s2+j) * prod_{j<q} (lam+s1-s2+j+1)/(lam+s1+l2+j+1)``
    with ``p = l1 + s1`` and ``q = l1 - s1``.
    """
    lam, l1, l2, s1, s2 = (scalar(x) for x in (lam, l1, l2, s1, s2))
    p = int(l1 + s1)
    q = int(l1 - s1)
    # factors are lam + offset; identical offsets cancel before evaluation so
    # that removable 0/0 points (e.g. s2 = l2) are not reported as poles
    num = Counter(-l1 - l2 + j for j in range(p))
    num.update(s1 - s2 + j + 1 for j in range(q))
    den = Counter(-l1 - s2 + j for j in range(p))
    den.update(s1 + l2 + j + 1 for j in range(q))
    common = num & den
    num, den = num - common, den - common
    out = ONE
    for off in sorted(num.elements()):
        out *= lam + off
    for off in sorted(den.elements()):
        out /= _nonzero(lam + off, f"lambda + ({off})")
    return out


def r0_truncated(lam, l1, l2, s1, s2, cutoff: int, aligned: bool = True) -> mpq:
    """Partial product of the literal four-family infinite product for the diagonal factor.

    With ``aligned`` the numerator and denominator of each family are cut at
    the same argument height ``lam + const + cutoff`` (so the dropped tail is
    exactly 1 once ``cutoff`` passes the telescoping range). Without it, every
    family is cut at the same index ``k = cutoff``, which only converges.
    """
    lam, l1, l2, s1, s2 = (scalar(x) for x in (lam, l1, l2, s1, s2))
    # (numerator offset, denominator offset) for each family, all evaluated at lam + offset + k
    families = [
        (s1 - s2, -l1 - s2),
        (-l1 - l2, s1 - l2),
        (s1 - s2 + 1, l1 - s2 + 1),
        (l1 + l2 + 1, s1 + l2 + 1),
    ]
    out = ONE
    for num_off, den_off in families:
        if aligned:
            top = max(num_off, den_off) + cutoff
            n_num = int(top - num_off) + 1
            n_den = int(top - den_off) + 1
        else:
            n_num = n_den = cutoff + 1
        for k in range(n_num):
            out *= lam + num_off + k
        for k in range(n_den):
            out /= _nonzero(lam + den_off + k, f"lambda + ({den_off + k})")
    return out


@lru_cache(maxsize=None)
def _higher_spin_r(r1: int, z1: mpq, r2: int, z2: mpq, eta: mpq) -> RMatrix:
    pair = ChainSpec.build([r1, r2], [z1, z2], eta)
    lam = (z1 - z2) / eta
    shape = pair.shape
    a, b = spin_matrices(r1), spin_matrices(r2)
    lower = tensor_embed(a.sminus, 0, shape) @ tensor_embed(b.splus, 1, shape)
    raise_ = tensor_embed(a.splus, 0, shape) @ tensor_embed(b.sminus, 1, shape)
    weights = pair.basis_weights()
    l1, l2 = a.spin, b.spin

    r_minus = TensorOperator.identity(shape)
    r_plus = TensorOperator.identity(shape)
    lower_k, raise_k = lower, raise_
    for k in range(1, min(r1, r2) + 1):
        # R_- : diagonal weight sits left of the ladder, evaluated on the image vector
        rows = [
            _ladder_weight(lam, *weights[i], k) if any(lower_k.mat[i, :] != 0) else ONE
            for i in range(shape.total_dim)
        ]
        r_minus = r_minus + TensorOperator.diagonal(shape, rows) @ lower_k
        # R_+ : diagonal weight sits right of the ladder, evaluated on the source vector
        cols = [
            _ladder_weight(lam, *weights[j], k) if any(raise_k.mat[:, j] != 0) else ONE
            for j in range(shape.total_dim)
        ]
        r_plus = r_plus + raise_k @ TensorOperator.diagonal(shape, cols)
        lower_k = lower_k @ lower
        raise_k = raise_k @ raise_
    r_zero = TensorOperator.diagonal(
        shape, [r0_eigenvalue(lam, l1, l2, s1, s2) for s1, s2 in weights]
    )
    return RMatrix(r_plus @ r_zero @ r_minus, r1, z1, r2, z2, eta)


def higher_spin_r(r1: int, z1, r2: int, z2, eta=1) -> RMatrix:
    """R-matrix on ``V_r1(z1) x V_r2(z2)`` as ``R_+ R_0 R_-`` with ``lambda = (z1 - z2)/eta``."""
    eta = scalar(eta)
    if eta == 0:
        raise ValueError("eta must be nonzero")
    return _higher_spin_r(int(r1), scalar(z1), int(r2), scalar(z2), eta)


def pair_r(spec: ChainSpec, i: int, j: int) -> TensorOperator:
    """``R_{r_i r_j}(z_i, z_j)`` acting on sites ``i`` (first factor) and ``j``."""
    si, sj = spec.sites[i], spec.sites[j]
    r = higher_spin_r(si.two_l, si.delta, sj.two_l, sj.delta, spec.eta)
    return embed_operator(r.op, [i, j], spec.shape)


@lru_cache(maxsize=None)
def _r_from_word(spec: ChainSpec, word: tuple[int, ...]) -> TensorOperator:
    if not word:
        return TensorOperator.identity(spec.shape)
    first, rest = word[0], word[1:]
    s = SitePermutation.transposition(spec.n_sites, first)
    # R^{s tau} = (R^tau)_s R^s
    inner = _r_from_word(spec.permuted(s), rest)
    return permute_tensor_factors(inner, s) @ pair_r(spec, first, first + 1)


def r_from_word(spec: ChainSpec, word) -> TensorOperator:
    """R^sigma for ``sigma = s_{w[0]} s_{w[1]} ...`` built along the given word."""
    spec.require_generic()
    return _r_from_word(spec, tuple(word))


def generalized_r(spec: ChainSpec, perm=None) -> TensorOperator:
    """R^sigma on the chain space, composed along a reduced word of ``perm``."""
    perm = as_permutation(perm, spec.n_sites)
    return r_from_word(spec, perm.reduced_word())


def transported(op_builder, spec: ChainSpec, perm: SitePermutation) -> TensorOperator:
    """``X_sigma``: build ``X`` on the reordered chain and move its factors back."""
    return permute_tensor_factors(op_builder(spec.permuted(perm)), perm)


def check_word_independence(spec: ChainSpec) -> list[CheckResult]:
    """Every reduced word of every permutation yields the same R^sigma."""
    spec.require_generic()
    out = []
    for perm in all_permutations(spec.n_sites):
        words = perm.reduced_words()
        ref = r_from_word(spec, words[0])
        for w in words[1:]:
            out.append(
                compare(
                    "ybe-word-independence",
                    "R^sigma independent of the reduced word",
                    r_from_word(spec, w),
                    ref,
                    detail=f"sigma={perm}, words {words[0]} vs {w}",
                    sigma=str(perm),
                )
            )
    if not out:
        out.append(
            CheckResult(
                "ybe-word-independence",
                "R^sigma independent of the reduced word",
                True,
                "every permutation has a single reduced word",
            )
        )
    return out


def check_composition_law(spec: ChainSpec) -> list[CheckResult]:
    """``R^{s1 s2} = (R^{s2})_{s1} R^{s1}`` for all pairs of permutations."""
    spec.require_generic()
    perms = list(all_permutations(spec.n_sites))
    out = []
    for p1 in perms:
        for p2 in perms:
            lhs = generalized_r(spec, p1 * p2)
            rhs = transported(lambda s: generalized_r(s, p2), spec, p1) @ generalized_r(spec, p1)
            out.append(
                compare(
                    "r-composition",
                    "R^(s1 s2) = (R^s2)_s1 R^s1",
                    lhs,
                    rhs,
                    detail=f"s1={p1}, s2={p2}",
                )
            )
    return out


def check_unitarity(r1: int, z1, r2: int, z2, eta=1) -> CheckResult:
    """``sigma(R_{r2 r1}(z2, z1)) R_{r1 r2}(z1, z2) = Id``."""
    fwd = higher_spin_r(r1, z1, r2, z2, eta).op
    back = permute_tensor_factors(higher_spin_r(r2, z2, r1, z1, eta).op, (1, 0))
    return compare(
        "unitarity",
        "sigma(R21) R12 = Id",
        back @ fwd,
        TensorOperator.identity(fwd.shape),
        detail=f"r=({r1},{r2}), z=({z1},{z2}), eta={eta}",
    )


def check_intertwining(spec: ChainSpec, perm, r_sigma: TensorOperator | None = None) -> list[CheckResult]:
    """``R^sigma X(u) = X_{sigma(1)..sigma(N)}(u) R^sigma`` for X in A, B, C, D."""
    perm = as_permutation(perm, spec.n_sites)
    r = generalized_r(spec, perm) if r_sigma is None else r_sigma
    t = monodromy(spec)
    t_perm = monodromy(spec, perm)
    return [
        compare(
            "intertwining",
            f"R^sigma {name}(u) = {name}_sigma(u) R^sigma",
            r @ t.entry(name),
            t_perm.entry(name) @ r,
            detail=f"sigma={perm}",
            entry=name,
        )
        for name in "ABCD"
    ]


def fundamental_as_operator(u, eta) -> TensorOperator:
    return TensorOperator(TensorShape((2, 2)), fundamental_r(u, eta))
