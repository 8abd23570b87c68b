"""Named verification suites and the run report the CLI prints."""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from . import __version__
from .chain import ChainSpec, NonGenericSpecError, check_rtt
from .exact import TensorOperator
from .fba import check_fba, spectrum
from .permutation import all_permutations, as_permutation
from .report import CheckResult
from .rmatrix import (
    check_composition_law,
    check_intertwining,
    check_unitarity,
    check_word_independence,
    generalized_r,
)
from .twist import (
    FMatrix,
    check_cocycle,
    check_conjugation,
    check_factorization_all,
    check_gauss_decomposition,
    check_inverse,
    check_triangularity,
    f_matrix,
    f_matrix_right,
)

SUITES = ("rtt", "ybe", "twist", "cocycle", "fba")

# Spectral points for the RTT suite; shifted off the pole u - v = -eta below.
RTT_POINTS = (("1/3", "-2/7"), ("5/2", "3"), ("-4/9", "11/5"), ("7", "1/8"), ("-13/6", "-5/3"))

# Composing every pair of permutations grows as (N!)^2.
COMPOSITION_MAX_SITES = 3


def rtt_suite(spec: ChainSpec) -> list[CheckResult]:
    out = []
    for u, v in RTT_POINTS:
        u, v = mpq(u), mpq(v)
        while u - v + spec.eta == 0:
            u += mpq(1, 2)
        out.append(check_rtt(spec, u, v))
    return out


def ybe_suite(spec: ChainSpec, r_builder=None) -> list[CheckResult]:
    """``r_builder(spec, perm)`` replaces R^sigma in the intertwining checks."""
    spec.require_generic()
    out = check_word_independence(spec)
    if spec.n_sites <= COMPOSITION_MAX_SITES:
        out += check_composition_law(spec)
    for i in range(spec.n_sites):
        for j in range(i + 1, spec.n_sites):
            a, b = spec.sites[i], spec.sites[j]
            out.append(check_unitarity(a.two_l, a.delta, b.two_l, b.delta, spec.eta))
    for perm in all_permutations(spec.n_sites):
        r = None if r_builder is None else r_builder(spec, perm)
        out += check_intertwining(spec, perm, r)
    return out


def twist_suite(spec: ChainSpec) -> list[CheckResult]:
    spec.require_generic()
    out = [
        check_inverse("f-inverse", f_matrix(spec)),
        check_inverse("f-inverse-right-recursion", f_matrix_right(spec)),
    ]
    out += check_conjugation(spec)
    out += check_triangularity(spec)
    out += check_factorization_all(spec)
    for i in range(spec.n_sites):
        for j in range(i + 1, spec.n_sites):
            a, b = spec.sites[i], spec.sites[j]
            out.append(check_gauss_decomposition(a.two_l, a.delta, b.two_l, b.delta, spec.eta))
    return out


def cocycle_suite(spec: ChainSpec) -> list[CheckResult]:
    if spec.n_sites < 2:
        spec.require_generic()
        return [
            CheckResult(
                "cocycle",
                "F~_{1,2..n} F~_{2..n-1,n} = F~_{1..n-1,n} F~_{1,2..n-1}",
                True,
                "single site: no partial F-matrices to compare",
            )
        ]
    return check_cocycle(spec)


def fba_suite(spec: ChainSpec) -> list[CheckResult]:
    lattice = spectrum(spec)
    out = [
        CheckResult(
            "spectrum-disjoint",
            "Lambda_i and Lambda_j disjoint for i != j",
            lattice.disjoint,
            str(spec),
        )
    ]
    return out + check_fba(spec)


def perturb_entry(op: TensorOperator, row: int, col: int, by=1) -> TensorOperator:
    mat = op.mat.copy()
    mat[row, col] = mat[row, col] + by
    return TensorOperator(op.shape, mat)


def f_negative_control(spec: ChainSpec, row: int, col: int) -> list[CheckResult]:
    """Conjugation and factorization checks fed an F with one entry moved by 1."""
    good = f_matrix(spec)
    bad = perturb_entry(good.op, row, col)

    def f_of(s):
        return bad if s == spec else f_matrix(s).op

    out = check_conjugation(spec, FMatrix(bad, good.inverse, spec))
    return out + check_factorization_all(spec, f_builder=f_of)


def r_negative_control(spec: ChainSpec, perm, row: int, col: int) -> list[CheckResult]:
    """Factorization checks fed an R^perm with one entry moved by 1."""
    perm = as_permutation(perm, spec.n_sites)
    bad = perturb_entry(generalized_r(spec, perm), row, col)

    def r_of(s, p):
        return bad if (s == spec and p == perm) else generalized_r(s, p)

    return check_factorization_all(spec, r_builder=r_of)


_RUNNERS = {
    "rtt": rtt_suite,
    "ybe": ybe_suite,
    "twist": twist_suite,
    "cocycle": cocycle_suite,
    "fba": fba_suite,
}


@dataclass
class RunReport:
    spec: ChainSpec
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    failure_class: str | None = None

    @property
    def passed(self) -> bool:
        return self.failure_class is None and all(c.status for c in self.checks)

    def to_json(self) -> dict:
        return {
            "tool": "yangtwist",
            "version": __version__,
            "spec": self.spec.to_dict(),
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "failure_class": self.failure_class,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.status for c in self.checks),
            "checks": [c.to_json() for c in self.checks],
        }


def run_suite(spec: ChainSpec, suite: str = "all") -> RunReport:
    """Run one suite (or all of them, in declaration order) and collect a report.

    A non-generic chain is not a crash: suites that need genericity are
    skipped, one failing ``genericity`` record names the vanishing factor
    and the report is tagged ``non-generic``.
    """
    if suite != "all" and suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}, all")
    names = SUITES if suite == "all" else (suite,)
    report = RunReport(spec, suite)
    skipped, problem = [], None
    for name in names:
        try:
            report.checks += _RUNNERS[name](spec)
        except NonGenericSpecError as exc:
            skipped.append(name)
            problem = problem or str(exc)
    if skipped:
        report.failure_class = "non-generic"
        report.checks.append(
            CheckResult(
                "genericity",
                "delta_i - delta_j + a eta != 0",
                False,
                f"{problem}; skipped suites: {', '.join(skipped)}",
            )
        )
    return report
