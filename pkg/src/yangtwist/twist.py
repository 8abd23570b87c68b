"""Factorizing F-matrices of the inhomogeneous higher-spin XXX chain.

The F-basis is the basis in which ``D(u)`` is diagonal and the monodromy
entries take site-symmetric closed forms (the "tilde" operators). F is
assembled site by site from partial matrices, each a finite sum over powers
of the lowering operator of the split-off site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .chain import (
    ChainSpec,
    NonGenericSpecError,
    diagonal_of_d,
    monodromy,
    quantum_determinant,
    site_operators,
)
from .exact import (
    ONE,
    OperatorPolynomial,
    ScalarPolynomial,
    TensorOperator,
    embed_operator,
    permute_tensor_factors,
    site_block_operator,
)
from .permutation import SitePermutation, all_permutations, as_permutation
from .report import CheckResult, compare
from .rmatrix import generalized_r, pair_r, transported
from .spin import SiteSpec


@dataclass(frozen=True, eq=False)
class TildeOps:
    a_tilde: OperatorPolynomial
    b_tilde: OperatorPolynomial
    c_tilde: OperatorPolynomial
    d_tilde: OperatorPolynomial

    def entry(self, name: str) -> OperatorPolynomial:
        return getattr(self, f"{name.lower()}_tilde")


@dataclass(frozen=True, eq=False)
class FMatrix:
    op: TensorOperator
    inverse: TensorOperator
    spec: ChainSpec


def _ratio(num: mpq, den: mpq, what: str) -> mpq:
    if den == 0:
        raise NonGenericSpecError(f"non-generic inhomogeneities: {what} vanishes")
    return num / den


def _ladder_sum(spec: ChainSpec, sign: int, ladder: str) -> OperatorPolynomial:
    """``sum_n {prod_{i!=n} (u - x_i) * ratio_i} eta S_n^{ladder}`` with diagonal weights left."""
    eta = spec.eta
    shape = spec.shape
    weights = spec.basis_weights()
    total = OperatorPolynomial.zero(shape)
    for n in range(spec.n_sites):
        dn = spec.sites[n].delta
        polys = []
        for w in weights:
            p = ScalarPolynomial([1])
            for i, site in enumerate(spec.sites):
                if i == n:
                    continue
                di = site.delta
                num = dn - di + eta * w[n] + sign * eta * site.spin
                den = dn - di + eta * w[n] - eta * w[i]
                p = p * ScalarPolynomial([-(di + eta * w[i]), 1])
                p = p * _ratio(num, den, f"delta[{n}] - delta[{i}] + eta*({w[n] - w[i]})")
            polys.append(p)
        _, sp, sm = site_operators(spec, n)
        lad = sm if ladder == "-" else sp
        total = total + OperatorPolynomial.diagonal(shape, polys) @ (lad * eta)
    return total


def a_from_determinant(spec: ChainSpec, b: OperatorPolynomial, c: OperatorPolynomial,
                       d: OperatorPolynomial) -> OperatorPolynomial:
    """Solve ``D(u-eta) A(u) = Delta(u-eta/2) + B(u-eta) C(u)`` for A with D diagonal.

    Each row of the right-hand side is divided exactly by the matching diagonal
    entry of ``D(u - eta)``; a nonzero remainder raises ``ArithmeticError``.
    """
    eta = spec.eta
    shape = spec.shape
    delta = quantum_determinant(spec).shifted(-eta / 2)
    rhs = OperatorPolynomial.from_scalar(delta, shape) + b.shifted(-eta) @ c
    d_shift = d.shifted(-eta)
    if any(not coeff.is_diagonal() for coeff in d_shift.coeffs):
        raise ValueError("D must be diagonal")
    n = shape.total_dim
    deg = max(rhs.degree - d_shift.degree, 0)
    out = [[[None] * n for _ in range(n)] for _ in range(deg + 1)]
    for r in range(n):
        divisor = ScalarPolynomial(coeff.mat[r, r] for coeff in d_shift.coeffs)
        for col in range(n):
            entry = ScalarPolynomial(coeff.mat[r, col] for coeff in rhs.coeffs)
            q, rem = entry.divmod(divisor)
            if rem.coeffs:
                raise ArithmeticError(f"row {r} of the determinant identity is not divisible")
            for k in range(deg + 1):
                out[k][r][col] = q.coeffs[k] if k < len(q.coeffs) else mpq(0)
    return OperatorPolynomial(shape, [TensorOperator(shape, m) for m in out])


@lru_cache(maxsize=None)
def tilde_ops(spec: ChainSpec) -> TildeOps:
    """A, B, C, D in the F-basis, from their closed site-symmetric forms."""
    spec.require_generic()
    d = diagonal_of_d(spec)
    b = _ladder_sum(spec, -1, "-")
    c = _ladder_sum(spec, +1, "+")
    a = a_from_determinant(spec, b, c, d)
    return TildeOps(a, b, c, d)


# -- diagonal normalisation factors ------------------------------------------------


def q_left_eigenvalue(spec: ChainSpec, weights) -> mpq:
    """Left factor on ``(m, s_2, ..., s_N)``: telescoped product over ``k = 1..l_1 - m``."""
    eta = spec.eta
    first = spec.sites[0]
    m = weights[0]
    out = ONE
    for i in range(1, spec.n_sites):
        a = first.delta - spec.sites[i].delta
        li, si = spec.sites[i].spin, weights[i]
        for k in range(1, int(first.spin - m) + 1):
            out *= a + eta * (m - si + k)
            out = _ratio(out, a + eta * (m + li + k), f"delta[0] - delta[{i}] + eta*({m + li + k})")
    return out


def q_right_eigenvalue(spec: ChainSpec, weights) -> mpq:
    """Right factor on ``(s_1, ..., s_{N-1}, m)``: telescoped product over ``k = 1..l_N + m``."""
    eta = spec.eta
    last = spec.sites[-1]
    m = weights[-1]
    out = ONE
    for i in range(spec.n_sites - 1):
        b = last.delta - spec.sites[i].delta
        li, si = spec.sites[i].spin, weights[i]
        for k in range(1, int(last.spin + m) + 1):
            out *= b + eta * (m - si - k)
            out = _ratio(out, b + eta * (m - li - k), f"delta[N] - delta[{i}] + eta*({m - li - k})")
    return out


@lru_cache(maxsize=None)
def q_factor_left(spec: ChainSpec) -> TensorOperator:
    """Diagonal factor of the left partial F, normalised to 1 on ``m = l_1``."""
    spec.require_generic()
    if spec.n_sites < 2:
        raise ValueError("the left partial F needs at least two sites")
    return TensorOperator.diagonal(
        spec.shape, [q_left_eigenvalue(spec, w) for w in spec.basis_weights()]
    )


@lru_cache(maxsize=None)
def q_factor_right(spec: ChainSpec) -> TensorOperator:
    """Diagonal factor of the right partial F, normalised to 1 on ``m = -l_N``."""
    spec.require_generic()
    if spec.n_sites < 2:
        raise ValueError("the right partial F needs at least two sites")
    return TensorOperator.diagonal(
        spec.shape, [q_right_eigenvalue(spec, w) for w in spec.basis_weights()]
    )


def q_left_truncated(spec: ChainSpec, cutoff: int, aligned: bool = True) -> TensorOperator:
    """Partial product of the literal infinite product for the left factor.

    Factors are read off the tail ``D~`` polynomial evaluated at scalar points.
    ``aligned`` cuts every family at the same spectral height
    ``delta_1 + eta (l_1 + cutoff)``; otherwise every family stops at ``k = cutoff``.
    The raw product has zero factors when ``delta_1 - delta_i`` lies on the
    lattice ``eta Z`` far out, so the oracle needs non-integer separations.
    """
    spec.require_generic()
    eta = spec.eta
    first = spec.sites[0]
    tail = spec.subchain(1, spec.n_sites)
    d_tail = tilde_ops(tail).d_tilde
    tail_dim = tail.shape.total_dim
    l1 = first.spin
    values = []
    for flat, w in enumerate(spec.basis_weights()):
        t = flat % tail_dim
        m = w[0]
        span = int(l1 - m)
        n_lo, n_hi = cutoff + span if aligned else cutoff, cutoff
        val = ONE
        for k in range(1, n_lo + 1):
            val *= d_tail(first.delta + eta * (m + k)).mat[t, t]
            for i in range(1, spec.n_sites):
                site = spec.sites[i]
                val = _ratio(val, first.delta - site.delta + eta * (m + site.spin + k),
                             f"raw product factor delta[0] - delta[{i}] + eta*({m + site.spin + k})")
        for k in range(1, n_hi + 1):
            val = _ratio(val, d_tail(first.delta + eta * (l1 + k)).mat[t, t], f"raw product factor D~ at k={k}")
            for i in range(1, spec.n_sites):
                site = spec.sites[i]
                val *= first.delta - site.delta + eta * (l1 + site.spin + k)
        values.append(val)
    return TensorOperator.diagonal(spec.shape, values)


def q_right_truncated(spec: ChainSpec, cutoff: int, aligned: bool = True) -> TensorOperator:
    """Partial product of the literal infinite product for the right factor (see left)."""
    spec.require_generic()
    eta = spec.eta
    last = spec.sites[-1]
    head = spec.subchain(0, spec.n_sites - 1)
    d_head = tilde_ops(head).d_tilde
    ln = last.spin
    dn = last.dim
    values = []
    for flat, w in enumerate(spec.basis_weights()):
        h = flat // dn
        m = w[-1]
        span = int(ln + m)
        n_lo, n_hi = cutoff + span if aligned else cutoff, cutoff
        val = ONE
        for k in range(1, n_lo + 1):
            val *= d_head(last.delta + eta * (m - k)).mat[h, h]
            for i in range(spec.n_sites - 1):
                site = spec.sites[i]
                val = _ratio(val, last.delta - site.delta + eta * (m - site.spin - k),
                             f"raw product factor delta[N] - delta[{i}] + eta*({m - site.spin - k})")
        for k in range(1, n_hi + 1):
            val = _ratio(val, d_head(last.delta - eta * (ln + k)).mat[h, h], f"raw product factor D~ at k={k}")
            for i in range(spec.n_sites - 1):
                site = spec.sites[i]
                val *= last.delta - site.delta - eta * (ln + site.spin + k)
        values.append(val)
    return TensorOperator.diagonal(spec.shape, values)


# -- partial F-matrices ------------------------------------------------------------


def _blocks_at_site(spec: ChainSpec, site: int, rest: ChainSpec, build) -> TensorOperator:
    """Operator equal to ``build(x_m)`` on the other sites when ``site`` has ``S^z = m``.

    ``x_m = delta_site + eta m``; this is how a rest-of-chain polynomial is
    evaluated at the operator argument ``delta + eta S^z``.
    """
    s = spec.sites[site]
    blocks = [build(s.delta + spec.eta * (s.spin - k)) for k in range(s.dim)]
    return site_block_operator(spec.shape, site, blocks)


def _diag_inverse(op: TensorOperator, where: str) -> TensorOperator:
    try:
        return op.inverse_diagonal()
    except ZeroDivisionError:
        raise NonGenericSpecError(f"non-generic inhomogeneities: D~ singular at {where}") from None


def _series(weights_and_terms) -> TensorOperator:
    terms = list(weights_and_terms)
    acc = terms[0][1] * terms[0][0]
    for w, t in terms[1:]:
        acc = acc + t * w
    return acc


def _left_partial(spec: ChainSpec, c_of, d_of, dense_inverse: bool) -> tuple[TensorOperator, TensorOperator]:
    tail = spec.subchain(1, spec.n_sites)
    inv = (lambda op, x: op.inverse()) if dense_inverse else (lambda op, x: _diag_inverse(op, f"u={x}"))

    def cd_inv(x):
        return c_of(x) @ inv(d_of(x), x)

    def d_inv_c(x):
        return inv(d_of(x), x) @ c_of(x)

    m = _blocks_at_site(spec, 0, tail, cd_inv)
    n = _blocks_at_site(spec, 0, tail, d_inv_c)
    _, _, lower = site_operators(spec, 0)
    two_l = spec.sites[0].two_l
    fwd = _series((mpq(1, math.factorial(k)), (m ** k) @ (lower ** k)) for k in range(two_l + 1))
    bwd = _series(
        (mpq((-1) ** k, math.factorial(k)), (lower ** k) @ (n ** k)) for k in range(two_l + 1)
    )
    return fwd, bwd


def _right_partial(spec: ChainSpec, b_of, d_of, dense_inverse: bool) -> tuple[TensorOperator, TensorOperator]:
    last = spec.n_sites - 1
    head = spec.subchain(0, last)
    inv = (lambda op, x: op.inverse()) if dense_inverse else (lambda op, x: _diag_inverse(op, f"u={x}"))

    def bd_inv(x):
        return b_of(x) @ inv(d_of(x), x)

    def d_inv_b(x):
        return inv(d_of(x), x) @ b_of(x)

    m = _blocks_at_site(spec, last, head, bd_inv)
    n = _blocks_at_site(spec, last, head, d_inv_b)
    _, upper, _ = site_operators(spec, last)
    two_l = spec.sites[last].two_l
    fwd = _series(
        (mpq((-1) ** k, math.factorial(k)), (m ** k) @ (upper ** k)) for k in range(two_l + 1)
    )
    bwd = _series((mpq(1, math.factorial(k)), (upper ** k) @ (n ** k)) for k in range(two_l + 1))
    return fwd, bwd


@lru_cache(maxsize=None)
def partial_f_left(spec: ChainSpec) -> FMatrix:
    """Left partial F, ``F_{1..N} F_{2..N}^{-1}``, with its closed-form inverse."""
    spec.require_generic()
    if spec.n_sites < 2:
        raise ValueError("the left partial F needs at least two sites")
    tail = tilde_ops(spec.subchain(1, spec.n_sites))
    fwd, bwd = _left_partial(spec, tail.c_tilde, tail.d_tilde, dense_inverse=False)
    q = q_factor_left(spec)
    return FMatrix(q @ fwd, bwd @ q.inverse_diagonal(), spec)


@lru_cache(maxsize=None)
def partial_f_right(spec: ChainSpec) -> FMatrix:
    """Right partial F, ``F_{1..N} F_{1..N-1}^{-1}``, with its closed-form inverse."""
    spec.require_generic()
    if spec.n_sites < 2:
        raise ValueError("the right partial F needs at least two sites")
    head = tilde_ops(spec.subchain(0, spec.n_sites - 1))
    fwd, bwd = _right_partial(spec, head.b_tilde, head.d_tilde, dense_inverse=False)
    q = q_factor_right(spec)
    return FMatrix(q @ fwd, bwd @ q.inverse_diagonal(), spec)


def _telescoped_q_operator(spec: ChainSpec, d_of, side: str) -> TensorOperator:
    """Diagonal-factor operator written through ``D`` of the rest of the chain.

    Same telescoped product as the eigenvalue formulas, but with the
    ``D~`` factors kept as operators so that ``D`` can be put in their place.
    """
    eta = spec.eta
    if side == "left":
        pivot, others, site_idx = spec.sites[0], range(1, spec.n_sites), 0
    else:
        pivot, others, site_idx = spec.sites[-1], range(spec.n_sites - 1), spec.n_sites - 1
    rest = spec.subchain(1, spec.n_sites) if side == "left" else spec.subchain(0, spec.n_sites - 1)
    rest_shape = rest.shape

    def block(x):
        m = (x - pivot.delta) / eta
        op = TensorOperator.identity(rest_shape)
        scale = ONE
        if side == "left":
            for k in range(1, int(pivot.spin - m) + 1):
                op = op @ d_of(x + eta * k)
                for i in others:
                    s = spec.sites[i]
                    scale /= pivot.delta - s.delta + eta * (m + s.spin + k)
        else:
            for k in range(1, int(pivot.spin + m) + 1):
                op = op @ d_of(x - eta * k)
                for i in others:
                    s = spec.sites[i]
                    scale /= pivot.delta - s.delta + eta * (m - s.spin - k)
        return op * scale

    return _blocks_at_site(spec, site_idx, rest, block)


def partial_f_left_plain(spec: ChainSpec) -> FMatrix:
    """``F_{2..N}^{-1} F_{1..N}``: the left partial formula with the original C, D of the tail."""
    spec.require_generic()
    t = monodromy(spec.subchain(1, spec.n_sites))
    fwd, bwd = _left_partial(spec, t.c, t.d, dense_inverse=True)
    q = _telescoped_q_operator(spec, t.d, "left")
    return FMatrix(q @ fwd, bwd @ q.inverse(), spec)


def partial_f_right_plain(spec: ChainSpec) -> FMatrix:
    """``F_{1..N-1}^{-1} F_{1..N}``: the right partial formula with the original B, D of the head."""
    spec.require_generic()
    t = monodromy(spec.subchain(0, spec.n_sites - 1))
    fwd, bwd = _right_partial(spec, t.b, t.d, dense_inverse=True)
    q = _telescoped_q_operator(spec, t.d, "right")
    return FMatrix(q @ fwd, bwd @ q.inverse(), spec)


# -- the full F-matrix -------------------------------------------------------------


def _embed_tail(op: TensorOperator, spec: ChainSpec) -> TensorOperator:
    return embed_operator(op, range(1, spec.n_sites), spec.shape)


def _embed_head(op: TensorOperator, spec: ChainSpec) -> TensorOperator:
    return embed_operator(op, range(spec.n_sites - 1), spec.shape)


@lru_cache(maxsize=None)
def f_matrix(spec: ChainSpec) -> FMatrix:
    """F by peeling sites off the left: ``F_{1..N} = F~_{1,2..N} F_{2..N}``, ``F`` of one site = 1."""
    spec.require_generic()
    if spec.n_sites == 1:
        eye = TensorOperator.identity(spec.shape)
        return FMatrix(eye, eye, spec)
    part = partial_f_left(spec)
    rest = f_matrix(spec.subchain(1, spec.n_sites))
    return FMatrix(
        part.op @ _embed_tail(rest.op, spec),
        _embed_tail(rest.inverse, spec) @ part.inverse,
        spec,
    )


@lru_cache(maxsize=None)
def f_matrix_right(spec: ChainSpec) -> FMatrix:
    """F by peeling sites off the right: ``F_{1..N} = F~_{1..N-1,N} F_{1..N-1}``."""
    spec.require_generic()
    if spec.n_sites == 1:
        eye = TensorOperator.identity(spec.shape)
        return FMatrix(eye, eye, spec)
    part = partial_f_right(spec)
    rest = f_matrix_right(spec.subchain(0, spec.n_sites - 1))
    return FMatrix(
        part.op @ _embed_head(rest.op, spec),
        _embed_head(rest.inverse, spec) @ part.inverse,
        spec,
    )


def f_permuted(spec: ChainSpec, perm) -> TensorOperator:
    """``F_sigma``: F of the reordered chain with its tensor factors moved back."""
    perm = as_permutation(perm, spec.n_sites)
    return transported(lambda s: f_matrix(s).op, spec, perm)


# -- verification ------------------------------------------------------------------


def check_inverse(name: str, pair: FMatrix) -> CheckResult:
    eye = TensorOperator.identity(pair.op.shape)
    return compare(name, "F F^-1 = Id", pair.op @ pair.inverse, eye, detail=str(pair.spec))


def check_conjugation(spec: ChainSpec, f: FMatrix | None = None) -> list[CheckResult]:
    """``F X(u) F^-1 = X~(u)`` for X in A, B, C, D, plus the structural facts about D~."""
    f = f_matrix(spec) if f is None else f
    t = monodromy(spec)
    tilde = tilde_ops(spec)
    out = [
        compare(
            "conjugation",
            f"F {name}(u) F^-1 = {name}~(u)",
            t.entry(name).conjugate(f.op, f.inverse),
            tilde.entry(name),
            detail=str(spec),
            entry=name,
        )
        for name in "ABCD"
    ]
    d_diag = all(c.is_diagonal() for c in tilde.d_tilde.coeffs)
    out.append(CheckResult("d-tilde-diagonal", "D~(u) diagonal", d_diag, str(spec)))
    eta = spec.eta
    lhs = tilde.d_tilde.shifted(-eta) @ tilde.a_tilde
    rhs = OperatorPolynomial.from_scalar(
        quantum_determinant(spec).shifted(-eta / 2), spec.shape
    ) + tilde.b_tilde.shifted(-eta) @ tilde.c_tilde
    out.append(
        compare(
            "a-tilde-determinant",
            "D~(u-eta) A~(u) = Delta(u-eta/2) + B~(u-eta) C~(u)",
            lhs,
            rhs,
            detail=str(spec),
        )
    )
    return out


def check_triangularity(spec: ChainSpec, f: FMatrix | None = None) -> list[CheckResult]:
    f = f_matrix(spec) if f is None else f
    shape = spec.shape
    top = [mpq(0)] * shape.total_dim
    top[0] = ONE
    image = [f.op.mat[i, 0] for i in range(shape.total_dim)]
    first_bad = None
    if image != top:
        k = next(i for i, (a, b) in enumerate(zip(image, top)) if a != b)
        first_bad = {"row": k, "col": 0, "lhs": str(image[k]), "rhs": str(top[k])}
    lower = f.op.is_lower_triangular()
    upper_hit = None
    if not lower:
        import numpy as np

        i, j = (int(x) for x in np.argwhere(np.triu(f.op.mat != 0, k=1))[0])
        upper_hit = {"row": i, "col": j, "lhs": str(f.op.mat[i, j]), "rhs": "0"}
    return [
        CheckResult("f-lower-triangular", "F lower triangular", lower, str(spec), upper_hit),
        CheckResult("f-highest-weight", "F |0...0> = |0...0>", first_bad is None, str(spec), first_bad),
    ]


def check_factorization(spec: ChainSpec, perm, f_builder=None, r_builder=None) -> CheckResult:
    """``F_sigma R^sigma = F`` on the chain space.

    ``f_builder`` / ``r_builder`` replace the default constructions (used to
    feed deliberately corrupted matrices to the checker).
    """
    perm = as_permutation(perm, spec.n_sites)
    f_of = f_builder or (lambda s: f_matrix(s).op)
    r_of = r_builder or generalized_r
    lhs = transported(f_of, spec, perm) @ r_of(spec, perm)
    return compare(
        "factorization",
        "F_sigma R^sigma = F",
        lhs,
        f_of(spec),
        detail=f"sigma={perm}",
        sigma=str(perm),
    )


def check_factorization_all(spec: ChainSpec, f_builder=None, r_builder=None) -> list[CheckResult]:
    return [
        check_factorization(spec, p, f_builder, r_builder) for p in all_permutations(spec.n_sites)
    ]


def check_gauss_decomposition(r1: int, z1, r2: int, z2, eta=1, r_op: TensorOperator | None = None) -> CheckResult:
    """The Gauss-decomposed R equals ``F21^-1 F12``."""
    from .rmatrix import higher_spin_r

    spec = ChainSpec.build([r1, r2], [z1, z2], eta)
    swap = SitePermutation((1, 0))
    f12 = f_matrix(spec).op
    f21_inv = permute_tensor_factors(f_matrix(spec.permuted(swap)).inverse, swap)
    r = higher_spin_r(r1, z1, r2, z2, eta).op if r_op is None else r_op
    return compare(
        "gauss-decomposition",
        "R+ R0 R- = F21^-1 F12",
        r,
        f21_inv @ f12,
        detail=f"r=({r1},{r2}), z=({z1},{z2}), eta={eta}",
    )


def _default_extra_site(spec: ChainSpec) -> SiteSpec:
    eta = abs(spec.eta)
    delta = max(spec.deltas) + eta * (max(spec.spins) + 2) + eta / 3
    while not spec.with_site(SiteSpec(1, delta)).is_generic():
        delta += eta
    return SiteSpec(1, delta)


def check_cocycle(spec: ChainSpec, extra_site: SiteSpec | None = None) -> list[CheckResult]:
    """Properties of the partial F-matrices: cocycle, block symmetry, exchange relation,
    agreement of the two recursion orders, and the untilded partial matrices."""
    spec.require_generic()
    n = spec.n_sites
    if n < 2:
        raise ValueError("partial F-matrices need at least two sites")
    shape = spec.shape
    out = []

    # cocycle: F~_{1,2..n} F~_{2..n-1,n} = F~_{1..n-1,n} F~_{1,2..n-1}
    if n == 2:
        lhs, rhs = partial_f_left(spec).op, partial_f_right(spec).op
    else:
        lhs = partial_f_left(spec).op @ embed_operator(
            partial_f_right(spec.subchain(1, n)).op, range(1, n), shape
        )
        rhs = partial_f_right(spec).op @ embed_operator(
            partial_f_left(spec.subchain(0, n - 1)).op, range(n - 1), shape
        )
    out.append(compare("cocycle", "F~_{1,2..n} F~_{2..n-1,n} = F~_{1..n-1,n} F~_{1,2..n-1}", lhs, rhs, str(spec)))

    # block symmetry of the partial matrices
    for perm in all_permutations(n - 1):
        if perm.is_identity():
            continue
        tail_perm = SitePermutation((0,) + tuple(p + 1 for p in perm.images))
        head_perm = SitePermutation(tuple(perm.images) + (n - 1,))
        out.append(
            compare(
                "left-block-symmetry",
                "F~_{0,1..n} = F~_{0,sigma(1)..sigma(n)}",
                transported(lambda s: partial_f_left(s).op, spec, tail_perm),
                partial_f_left(spec).op,
                detail=f"sigma={perm}",
            )
        )
        out.append(
            compare(
                "right-block-symmetry",
                "F~_{1..n,0} = F~_{sigma(1)..sigma(n),0}",
                transported(lambda s: partial_f_right(s).op, spec, head_perm),
                partial_f_right(spec).op,
                detail=f"sigma={perm}",
            )
        )

    # exchange relation with an extra site 0 in front
    extra = extra_site or _default_extra_site(spec)
    ext = spec.with_site(extra, 0).require_generic()
    m = ext.n_sites
    ext_shape = ext.shape
    cycle = SitePermutation(tuple(range(1, m)) + (0,))  # site order (1, ..., n, 0)
    f_rest = embed_operator(f_matrix(spec).op, range(1, m), ext_shape)
    string = TensorOperator.identity(ext_shape)
    for j in range(m - 1, 0, -1):
        string = string @ pair_r(ext, 0, j)
    lhs = transported(lambda s: partial_f_right(s).op, ext, cycle) @ f_rest @ string
    rhs = partial_f_left(ext).op @ f_rest
    out.append(
        compare(
            "exchange",
            "F~_{1..n,0} F_{1..n} R_{0n}...R_{01} = F~_{0,1..n} F_{1..n}",
            lhs,
            rhs,
            detail=f"extra site two_l={extra.two_l}, delta={extra.delta}",
        )
    )

    # both recursion orders give the same F
    out.append(
        compare("recursion-orders", "left recursion F = right recursion F",
                f_matrix(spec).op, f_matrix_right(spec).op, str(spec))
    )

    # untilded partial matrices
    f_full = f_matrix(spec)
    f_tail = f_matrix(spec.subchain(1, n))
    f_head = f_matrix(spec.subchain(0, n - 1))
    out.append(
        compare(
            "plain-left-partial",
            "F_{1,2..n} = F_{2..n}^-1 F_{1..n}",
            partial_f_left_plain(spec).op,
            _embed_tail(f_tail.inverse, spec) @ f_full.op,
            str(spec),
        )
    )
    out.append(
        compare(
            "plain-right-partial",
            "F_{1..n-1,n} = F_{1..n-1}^-1 F_{1..n}",
            partial_f_right_plain(spec).op,
            _embed_head(f_head.inverse, spec) @ f_full.op,
            str(spec),
        )
    )

    # closed-form inverses
    out.append(check_inverse("left-partial-inverse", partial_f_left(spec)))
    out.append(check_inverse("right-partial-inverse", partial_f_right(spec)))
    return out


def left_partial_equation_sides(spec: ChainSpec, which: str = "D"):
    """Both sides of the linear equation the left partial F solves (``which`` in D, B, C)."""
    full = tilde_ops(spec)
    tail_spec = spec.subchain(1, spec.n_sites)
    tail = tilde_ops(tail_spec)
    shape = spec.shape
    eta = spec.eta
    sz, sp, sm = site_operators(spec, 0)
    delta = spec.sites[0].delta
    eye = TensorOperator.identity(shape)
    emb = lambda p: p.map(lambda c: _embed_tail(c, spec), shape)
    minus_branch = OperatorPolynomial.linear(eye * (-delta) - sz * eta, eye)
    plus_branch = OperatorPolynomial.linear(eye * (-delta) + sz * eta, eye)
    f = partial_f_left(spec).op
    if which == "D":
        inner = (sm * eta) @ emb(tail.c_tilde) + minus_branch @ emb(tail.d_tilde)
    elif which == "B":
        inner = (sm * eta) @ emb(tail.a_tilde) + minus_branch @ emb(tail.b_tilde)
    elif which == "C":
        inner = plus_branch @ emb(tail.c_tilde) + (sp * eta) @ emb(tail.d_tilde)
    else:
        raise ValueError(which)
    return full.entry(which) @ f, f @ inner
