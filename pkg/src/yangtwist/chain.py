"""Inhomogeneous XXX chain: spec, monodromy matrix, quantum determinant, RTT check."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .exact import (
    ONE,
    OperatorPolynomial,
    ScalarPolynomial,
    TensorOperator,
    TensorShape,
    format_scalar,
    scalar,
    tensor_embed,
)
from .permutation import SitePermutation, as_permutation
from .report import CheckResult, compare_blocks
from .spin import SiteSpec, spin_matrices


class SpecError(ValueError):
    """Malformed chain description."""


class NonGenericSpecError(ValueError):
    """Inhomogeneities make one of the required denominators vanish."""


@dataclass(frozen=True)
class ChainSpec:
    sites: tuple[SiteSpec, ...]
    eta: mpq = ONE

    def __post_init__(self):
        sites = tuple(
            s if isinstance(s, SiteSpec) else SiteSpec(*s) for s in self.sites
        )
        if not sites:
            raise SpecError("a chain needs at least one site")
        eta = scalar(self.eta)
        if eta == 0:
            raise SpecError("eta must be nonzero")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def build(cls, two_ls: Sequence[int], deltas: Sequence, eta=1) -> ChainSpec:
        if len(two_ls) != len(deltas):
            raise SpecError("two_ls and deltas differ in length")
        return cls(tuple(SiteSpec(r, d) for r, d in zip(two_ls, deltas)), eta)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def shape(self) -> TensorShape:
        return TensorShape(tuple(s.dim for s in self.sites))

    @property
    def spins(self) -> list[mpq]:
        return [s.spin for s in self.sites]

    @property
    def deltas(self) -> list[mpq]:
        return [s.delta for s in self.sites]

    def permuted(self, perm: SitePermutation) -> ChainSpec:
        """The reordered chain whose site ``i`` is this chain's site ``perm(i)``."""
        perm = as_permutation(perm, self.n_sites)
        return ChainSpec(tuple(self.sites[perm(i)] for i in range(self.n_sites)), self.eta)

    def subchain(self, start: int, stop: int) -> ChainSpec:
        return ChainSpec(self.sites[start:stop], self.eta)

    def with_site(self, site: SiteSpec, position: int = 0) -> ChainSpec:
        sites = list(self.sites)
        sites.insert(position, site)
        return ChainSpec(tuple(sites), self.eta)

    def basis_weights(self) -> list[tuple[mpq, ...]]:
        """``S^z`` eigenvalues ``(s_1, ..., s_N)`` of every lexicographic basis vector."""
        shape = self.shape
        spins = self.spins
        return [
            tuple(l - k for l, k in zip(spins, shape.multi_index(i)))
            for i in range(shape.total_dim)
        ]

    def lattices(self) -> list[list[mpq]]:
        return [
            [s.delta + self.eta * (s.spin - k) for k in range(s.dim)][::-1]
            for s in self.sites
        ]

    def genericity_violation(self) -> str | None:
        """Describe the first vanishing factor ``delta_i - delta_j + a*eta``, if any.

        ``a`` runs over the (half-)integers with ``|a| <= l_i + l_j`` and the
        parity of ``l_i + l_j``; this covers every denominator built from
        the pair by the twist, R-matrix and separated-variable constructions.
        """
        for i in range(self.n_sites):
            for j in range(i + 1, self.n_sites):
                li, lj = self.sites[i].spin, self.sites[j].spin
                top = li + lj
                a = -top
                while a <= top:
                    value = self.sites[i].delta - self.sites[j].delta + a * self.eta
                    if value == 0:
                        return (
                            f"non-generic inhomogeneities: delta[{i}] - delta[{j}] "
                            f"+ ({a})*eta = 0"
                        )
                    a += 1
        return None

    def is_generic(self) -> bool:
        return self.genericity_violation() is None

    def require_generic(self) -> ChainSpec:
        problem = self.genericity_violation()
        if problem is not None:
            raise NonGenericSpecError(problem)
        return self

    def to_dict(self) -> dict:
        return {
            "eta": format_scalar(self.eta),
            "sites": [
                {"two_l": s.two_l, "delta": format_scalar(s.delta)} for s in self.sites
            ],
        }

    @classmethod
    def from_dict(cls, doc) -> ChainSpec:
        if not isinstance(doc, dict):
            raise SpecError("spec document must be a JSON object")
        if "sites" not in doc:
            raise SpecError("missing field 'sites'")
        if not isinstance(doc["sites"], list):
            raise SpecError("field 'sites' must be a list")
        try:
            eta = scalar(str(doc.get("eta", "1")))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"field 'eta': {exc}") from None
        sites = []
        for k, entry in enumerate(doc["sites"]):
            if not isinstance(entry, dict):
                raise SpecError(f"sites[{k}] must be an object")
            two_l = entry.get("two_l")
            if not isinstance(two_l, int) or isinstance(two_l, bool) or two_l < 0:
                raise SpecError(f"sites[{k}].two_l must be a nonnegative integer")
            try:
                delta = scalar(str(entry.get("delta", "0")))
            except (ValueError, ZeroDivisionError) as exc:
                raise SpecError(f"sites[{k}].delta: {exc}") from None
            sites.append(SiteSpec(two_l, delta))
        return cls(tuple(sites), eta)

    @classmethod
    def from_json(cls, text: str) -> ChainSpec:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(doc)

    def __str__(self) -> str:
        spins = ",".join(str(s.spin) for s in self.sites)
        deltas = ",".join(str(s.delta) for s in self.sites)
        return f"chain(spins=({spins}), delta=({deltas}), eta={self.eta})"


@lru_cache(maxsize=None)
def site_operators(spec: ChainSpec, n: int) -> tuple[TensorOperator, TensorOperator, TensorOperator]:
    """``(Sz, S+, S-)`` of site ``n`` embedded in the full chain space."""
    spins = spin_matrices(spec.sites[n].two_l)
    shape = spec.shape
    return (
        tensor_embed(spins.sz, n, shape),
        tensor_embed(spins.splus, n, shape),
        tensor_embed(spins.sminus, n, shape),
    )


def embedded_l_operator(spec: ChainSpec, n: int):
    """L_n(u - delta_n) with quantum entries on the full chain space."""
    shape = spec.shape
    eye = TensorOperator.identity(shape)
    sz, sp, sm = site_operators(spec, n)
    eta, delta = spec.eta, spec.sites[n].delta
    a = OperatorPolynomial.linear(eye * (-delta) + sz * eta, eye)
    d = OperatorPolynomial.linear(eye * (-delta) - sz * eta, eye)
    b = OperatorPolynomial.constant(sm * eta)
    c = OperatorPolynomial.constant(sp * eta)
    return ((a, b), (c, d))


def _block_product(x, y):
    return tuple(
        tuple(x[i][0] @ y[0][j] + x[i][1] @ y[1][j] for j in range(2)) for i in range(2)
    )


@dataclass(frozen=True, eq=False)
class Monodromy:
    a: OperatorPolynomial
    b: OperatorPolynomial
    c: OperatorPolynomial
    d: OperatorPolynomial

    def blocks(self):
        return ((self.a, self.b), (self.c, self.d))

    def entry(self, name: str) -> OperatorPolynomial:
        return getattr(self, name.lower())

    def evaluate(self, u):
        return tuple(tuple(p(u) for p in row) for row in self.blocks())


@lru_cache(maxsize=None)
def _monodromy(spec: ChainSpec, perm: SitePermutation) -> Monodromy:
    order = [perm(i) for i in range(spec.n_sites)]
    t = embedded_l_operator(spec, order[0])
    for n in order[1:]:
        t = _block_product(embedded_l_operator(spec, n), t)
    return Monodromy(t[0][0], t[0][1], t[1][0], t[1][1])


def monodromy(spec: ChainSpec, perm: SitePermutation | None = None) -> Monodromy:
    """Ordered product ``L_{perm(N)} ... L_{perm(1)}`` on the chain space."""
    return _monodromy(spec, as_permutation(perm, spec.n_sites))


def quantum_determinant(spec: ChainSpec) -> ScalarPolynomial:
    """``prod_n (u - delta_n - l_n eta - eta/2)(u - delta_n + l_n eta + eta/2)``."""
    roots = []
    half = spec.eta / 2
    for s in spec.sites:
        roots.append(s.delta + s.spin * spec.eta + half)
        roots.append(s.delta - s.spin * spec.eta - half)
    return ScalarPolynomial.from_roots(roots)


def fundamental_r(u, eta) -> list[list[mpq]]:
    """Rational R-matrix on C^2 x C^2 with ``b = u/(u+eta)``, ``c = eta/(u+eta)``."""
    u, eta = scalar(u), scalar(eta)
    if eta == 0:
        raise ValueError("eta must be nonzero")
    if u + eta == 0:
        raise ZeroDivisionError("u = -eta is a pole of the R-matrix")
    b = u / (u + eta)
    c = eta / (u + eta)
    z, o = mpq(0), mpq(1)
    return [[o, z, z, z], [z, b, c, z], [z, c, b, z], [z, z, z, o]]


def rtt_sides(spec: ChainSpec, u, v, r_matrix=None):
    """Both sides of ``R(u-v) T1(u) T2(v) = T2(v) T1(u) R(u-v)`` as 4x4 operator blocks.

    Auxiliary index ``(a, c)`` flattens to ``2a + c`` with ``a`` in the first
    auxiliary space.
    """
    u, v = scalar(u), scalar(v)
    r = fundamental_r(u - v, spec.eta) if r_matrix is None else r_matrix
    t = monodromy(spec)
    tu, tv = t.evaluate(u), t.evaluate(v)
    # (T(u) x Id)(Id x T(v)) has block (ac, bd) = T_ab(u) T_cd(v); the reverse order
    # gives T_cd(v) T_ab(u).
    uv = [[tu[a][b] @ tv[c][d] for b in range(2) for d in range(2)] for a in range(2) for c in range(2)]
    vu = [[tv[c][d] @ tu[a][b] for b in range(2) for d in range(2)] for a in range(2) for c in range(2)]
    zero = TensorOperator.zeros(spec.shape)

    def lmul(rm, blocks):
        out = []
        for i in range(4):
            row = []
            for j in range(4):
                acc = zero
                for k in range(4):
                    if rm[i][k]:
                        acc = acc + blocks[k][j] * rm[i][k]
                row.append(acc)
            out.append(row)
        return out

    def rmul(blocks, rm):
        out = []
        for i in range(4):
            row = []
            for j in range(4):
                acc = zero
                for k in range(4):
                    if rm[k][j]:
                        acc = acc + blocks[i][k] * rm[k][j]
                row.append(acc)
            out.append(row)
        return out

    return lmul(r, uv), rmul(vu, r)


def check_rtt(spec: ChainSpec, u, v, r_matrix=None) -> CheckResult:
    u, v = scalar(u), scalar(v)
    if u - v + spec.eta == 0:
        raise ValueError("u - v = -eta is a pole of the fundamental R-matrix")
    lhs, rhs = rtt_sides(spec, u, v, r_matrix)
    return compare_blocks(
        "rtt",
        "R(u-v) T1(u) T2(v) = T2(v) T1(u) R(u-v)",
        lhs,
        rhs,
        detail=f"u={u}, v={v}",
    )


def diagonal_of_d(spec: ChainSpec) -> OperatorPolynomial:
    """``prod_i (u - delta_i - eta Sz_i)`` as a diagonal polynomial."""
    polys = [
        ScalarPolynomial.from_roots(
            s.delta + spec.eta * w for s, w in zip(spec.sites, weights)
        )
        for weights in spec.basis_weights()
    ]
    return OperatorPolynomial.diagonal(spec.shape, polys)
