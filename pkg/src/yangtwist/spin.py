"""Spin-l representation matrices and the single-site L-operator."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from .exact import ONE, ZERO, OperatorPolynomial, TensorOperator, TensorShape, scalar


@dataclass(frozen=True, eq=False)
class SpinTriple:
    """``S^z``, ``S^+``, ``S^-`` for spin ``two_l / 2``.

    Basis ordered by descending ``S^z``. Raising/lowering use the integer
    gauge: ``S^+`` has superdiagonal ``2l, 2l-1, ..., 1`` and ``S^-`` has
    subdiagonal ``1, 2, ..., 2l``.
    """

    two_l: int
    sz: np.ndarray
    splus: np.ndarray
    sminus: np.ndarray

    @property
    def spin(self) -> mpq:
        return mpq(self.two_l, 2)

    @property
    def dim(self) -> int:
        return self.two_l + 1

    def weights(self) -> list[mpq]:
        """``S^z`` eigenvalues in basis order."""
        return [self.spin - k for k in range(self.dim)]


@lru_cache(maxsize=None)
def spin_matrices(two_l: int) -> SpinTriple:
    if isinstance(two_l, bool) or int(two_l) != two_l or two_l < 0:
        raise ValueError(f"two_l must be a nonnegative integer, got {two_l!r}")
    two_l = int(two_l)
    d = two_l + 1
    l = mpq(two_l, 2)
    sz = np.full((d, d), ZERO, dtype=object)
    sp = np.full((d, d), ZERO, dtype=object)
    sm = np.full((d, d), ZERO, dtype=object)
    for k in range(d):
        sz[k, k] = l - k
    for k in range(two_l):
        sp[k, k + 1] = mpq(two_l - k)
        sm[k + 1, k] = mpq(k + 1)
    for a in (sz, sp, sm):
        a.flags.writeable = False
    return SpinTriple(two_l, sz, sp, sm)


@dataclass(frozen=True)
class SiteSpec:
    """One chain site: doubled spin and inhomogeneity."""

    two_l: int
    delta: mpq = ZERO

    def __post_init__(self):
        if isinstance(self.two_l, bool) or int(self.two_l) != self.two_l or self.two_l < 0:
            raise ValueError(f"two_l must be a nonnegative integer, got {self.two_l!r}")
        object.__setattr__(self, "two_l", int(self.two_l))
        object.__setattr__(self, "delta", scalar(self.delta))

    @property
    def spin(self) -> mpq:
        return mpq(self.two_l, 2)

    @property
    def dim(self) -> int:
        return self.two_l + 1


def l_operator(site: SiteSpec, eta) -> tuple[tuple[OperatorPolynomial, ...], ...]:
    """L(u - delta) on a single site, as a 2x2 array of polynomials in ``u``.

    ``[[u - delta + eta Sz, eta S-], [eta S+, u - delta - eta Sz]]``
    """
    eta = scalar(eta)
    if eta == 0:
        raise ValueError("eta must be nonzero")
    spins = spin_matrices(site.two_l)
    shape = TensorShape((site.dim,))
    eye = TensorOperator.identity(shape)
    sz = TensorOperator(shape, spins.sz)
    a = OperatorPolynomial.linear(eye * (-site.delta) + sz * eta, eye)
    d = OperatorPolynomial.linear(eye * (-site.delta) - sz * eta, eye)
    b = OperatorPolynomial.constant(TensorOperator(shape, spins.sminus) * eta)
    c = OperatorPolynomial.constant(TensorOperator(shape, spins.splus) * eta)
    return ((a, b), (c, d))


def casimir(spins: SpinTriple) -> np.ndarray:
    """``(S+S- + S-S+)/2 + Sz^2``."""
    sp, sm, sz = spins.splus, spins.sminus, spins.sz
    return (sp @ sm + sm @ sp) * mpq(1, 2) + sz @ sz


def check_spin_triple(spins: SpinTriple) -> list[str]:
    """Names of the sl2 relations that fail (empty when all hold)."""
    sp, sm, sz = spins.splus, spins.sminus, spins.sz
    d = spins.dim
    eye = np.full((d, d), ZERO, dtype=object)
    for k in range(d):
        eye[k, k] = ONE
    l = spins.spin
    failures = []
    if not np.all(sp @ sm - sm @ sp == 2 * sz):
        failures.append("[S+,S-] = 2Sz")
    if not np.all(sz @ sp - sp @ sz == sp):
        failures.append("[Sz,S+] = S+")
    if not np.all(sz @ sm - sm @ sz == -sm):
        failures.append("[Sz,S-] = -S-")
    if not np.all(casimir(spins) == eye * (l * (l + 1))):
        failures.append("casimir = l(l+1)")
    if not np.all(np.triu(sp != 0) == (sp != 0)) or np.any(np.diag(sp) != 0):
        failures.append("S+ strictly upper triangular")
    if not np.all(np.tril(sm != 0) == (sm != 0)) or np.any(np.diag(sm) != 0):
        failures.append("S- strictly lower triangular")
    return failures
