"""Separated variables in the F-basis: operator roots of D, their shift operators,
left substitution and interpolation of B and C."""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .chain import ChainSpec, quantum_determinant, site_operators
from .exact import (
    OperatorPolynomial,
    TensorOperator,
    poly_left_substitute,
)
from .report import CheckResult, compare
from .twist import tilde_ops


@dataclass(frozen=True)
class SpectrumLattice:
    lattices: tuple[tuple[mpq, ...], ...]
    disjoint: bool

    def to_json(self) -> dict:
        return {
            "lattices": [[str(x) for x in lat] for lat in self.lattices],
            "disjoint": self.disjoint,
        }


def spectrum(spec: ChainSpec) -> SpectrumLattice:
    """Per-site spectra ``{delta_i + eta k : k = -l_i..l_i}`` and whether they are pairwise disjoint."""
    lats = tuple(tuple(lat) for lat in spec.lattices())
    seen: set = set()
    disjoint = True
    for lat in lats:
        if seen.intersection(lat):
            disjoint = False
        seen.update(lat)
    return SpectrumLattice(lats, disjoint)


@dataclass(frozen=True, eq=False)
class SeparatedOperators:
    x_hat: tuple[TensorOperator, ...]
    x_plus: tuple[TensorOperator, ...]
    x_minus: tuple[TensorOperator, ...]


def separated_operators(spec: ChainSpec) -> SeparatedOperators:
    """``x_n = delta_n + eta Sz_n`` and ``X_n^(+-) = eta prod_{i!=n}(delta_n - delta_i + eta Sz_n +- eta l_i) S_n^(+-)``."""
    spec.require_generic()
    eta = spec.eta
    shape = spec.shape
    eye = TensorOperator.identity(shape)
    x_hat, x_plus, x_minus = [], [], []
    for n, site in enumerate(spec.sites):
        sz, sp, sm = site_operators(spec, n)
        base = eye * site.delta + sz * eta
        pre_plus, pre_minus = eye, eye
        for i, other in enumerate(spec.sites):
            if i == n:
                continue
            shift = base - eye * other.delta
            pre_plus = pre_plus @ (shift + eye * (eta * other.spin))
            pre_minus = pre_minus @ (shift - eye * (eta * other.spin))
        x_hat.append(base)
        x_plus.append(pre_plus @ sp * eta)
        x_minus.append(pre_minus @ sm * eta)
    return SeparatedOperators(tuple(x_hat), tuple(x_plus), tuple(x_minus))


def scalar_poly_of_operator(p, x: TensorOperator) -> TensorOperator:
    """Evaluate a scalar polynomial at an operator argument."""
    acc = TensorOperator.zeros(x.shape)
    eye = TensorOperator.identity(x.shape)
    for c in reversed(p.coeffs):
        acc = x @ acc + eye * c
    return acc


def check_separated_algebra(spec: ChainSpec, ops: SeparatedOperators | None = None) -> list[CheckResult]:
    """Commutation relations of the separated variables and their shift operators."""
    ops = separated_operators(spec) if ops is None else ops
    eta = spec.eta
    n_sites = spec.n_sites
    delta = quantum_determinant(spec)
    eye = TensorOperator.identity(spec.shape)
    out = []

    def add(check, eq, lhs, rhs, **where):
        out.append(compare(check, eq, lhs, rhs, **where))

    for m in range(n_sites):
        for n in range(n_sites):
            xm, xn = ops.x_hat[m], ops.x_hat[n]
            add("x-commute", "[x_m, x_n] = 0", xm @ xn, xn @ xm, m=m, n=n)
            for sign, big in (("+", ops.x_plus), ("-", ops.x_minus)):
                add(f"X{sign}-commute", f"[X_m{sign}, X_n{sign}] = 0",
                    big[m] @ big[n], big[n] @ big[m], m=m, n=n)
                step = (-eta if sign == "+" else eta) if m == n else 0
                add("shift", f"X_m{sign} x_n = (x_n {'-' if sign == '+' else '+'} eta delta_mn) X_m{sign}",
                    big[m] @ xn, (xn + eye * step) @ big[m], m=m, n=n)
            if m != n:
                add("X+X- commute", "[X_m+, X_n-] = 0",
                    ops.x_plus[m] @ ops.x_minus[n], ops.x_minus[n] @ ops.x_plus[m], m=m, n=n)
        # X_n^- X_n^+ = -Delta(x_n + eta/2) and X_n^+ X_n^- = -Delta(x_n - eta/2)
        add("quantum-determinant", "X_n- X_n+ = -Delta(x_n + eta/2)",
            ops.x_minus[m] @ ops.x_plus[m],
            -scalar_poly_of_operator(delta, ops.x_hat[m] + eye * (eta / 2)), n=m)
        add("quantum-determinant", "X_n+ X_n- = -Delta(x_n - eta/2)",
            ops.x_plus[m] @ ops.x_minus[m],
            -scalar_poly_of_operator(delta, ops.x_hat[m] - eye * (eta / 2)), n=m)
    return out


def _lagrange_weight(ops: SeparatedOperators, n: int, shape) -> OperatorPolynomial:
    """``prod_{i != n} (u - x_i) (x_n - x_i)^-1`` with the diagonal inverse taken exactly."""
    eye = TensorOperator.identity(shape)
    w = OperatorPolynomial.constant(eye)
    for i, xi in enumerate(ops.x_hat):
        if i == n:
            continue
        inv = (ops.x_hat[n] - xi).inverse_diagonal()
        w = w @ OperatorPolynomial.linear(-(xi @ inv), inv)
    return w


def reconstruct_bc(spec: ChainSpec, ops: SeparatedOperators | None = None):
    """Rebuild ``(B~(u), C~(u))`` by interpolation through the operator roots."""
    ops = separated_operators(spec) if ops is None else ops
    shape = spec.shape
    b = OperatorPolynomial.zero(shape)
    c = OperatorPolynomial.zero(shape)
    for n in range(spec.n_sites):
        w = _lagrange_weight(ops, n, shape)
        b = b + w @ ops.x_minus[n]
        c = c + w @ ops.x_plus[n]
    return b, c


def d_from_roots(spec: ChainSpec, ops: SeparatedOperators | None = None) -> OperatorPolynomial:
    """``prod_n (u - x_n)``."""
    ops = separated_operators(spec) if ops is None else ops
    eye = TensorOperator.identity(spec.shape)
    d = OperatorPolynomial.constant(eye)
    for x in ops.x_hat:
        d = d @ OperatorPolynomial.linear(-x, eye)
    return d


def check_fba(spec: ChainSpec) -> list[CheckResult]:
    """All separated-variable identities: algebra, roots, left substitution, interpolation."""
    ops = separated_operators(spec)
    tilde = tilde_ops(spec)
    out = check_separated_algebra(spec, ops)
    zero = TensorOperator.zeros(spec.shape)
    for n, x in enumerate(ops.x_hat):
        out.append(compare("d-root", "[D~(u)]_{u=x_n} = 0", poly_left_substitute(tilde.d_tilde, x), zero, n=n))
        out.append(compare("left-substitution", "[B~(u)]_{u=x_n} = X_n-",
                           poly_left_substitute(tilde.b_tilde, x), ops.x_minus[n], n=n))
        out.append(compare("left-substitution", "[C~(u)]_{u=x_n} = X_n+",
                           poly_left_substitute(tilde.c_tilde, x), ops.x_plus[n], n=n))
    b, c = reconstruct_bc(spec, ops)
    out.append(compare("interpolation", "B(u) = sum_n prod_{i!=n} (u-x_i)/(x_n-x_i) X_n-", b, tilde.b_tilde))
    out.append(compare("interpolation", "C(u) = sum_n prod_{i!=n} (u-x_i)/(x_n-x_i) X_n+", c, tilde.c_tilde))
    out.append(compare("d-factorization", "D~(u) = prod_n (u - x_n)", d_from_roots(spec, ops), tilde.d_tilde))
    return out
