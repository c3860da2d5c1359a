"""Turn engine results into report models, with their invariant checks."""
from __future__ import annotations

import logging

from src.catalog.parser import gla_to_document, symbol_to_document
from src.distflag.fibration import FibrationDiagnostics
from src.distflag.flag import (
    DistributionModel,
    FlagReport,
    LeviCauchyReport,
    ProbeReport,
    filtration_check,
)
from src.gla.algebra import GradedLieAlgebra, generated_flag, is_fundamental
from src.models import (
    CheckResult,
    FibrationReport,
    FlagReportModel,
    GlaReport,
    PartialRanks,
    ProlongReport,
    PseudoReport,
    SymbolReport,
)
from src.prolong.engine import ProlongationResult, ProlongationStatus
from src.prolong.partial import (
    direct_sum_check,
    fh_dimension,
    partial_operator,
    tor_complement,
    tor_dimension,
    verify_partial_kernel,
)
from src.pseudoprod.symbol import PPReport, PseudoProductSymbol, levi_nondegenerate

logger = logging.getLogger(__name__)


def gla_summary(g: GradedLieAlgebra) -> GlaReport:
    report = GlaReport(
        dims=dict(g.space.dims),
        total_dim=g.dim,
        nonzero_brackets=len(g.structure),
        checks=[
            CheckResult(name="grading", passed=True),
            CheckResult(name="jacobi", passed=True),
        ],
    )
    if g.space.max_degree > 0:
        return report
    fundamental = is_fundamental(g)
    report.fundamental = fundamental.is_fundamental
    report.generated_by_minus_one = fundamental.generated_by_minus_one
    report.adjoint_injective_on_g0 = fundamental.adjoint_injective_on_g0
    report.violations = list(fundamental.violations)
    return report


def _partial_range(result: ProlongationResult) -> range:
    if result.status is ProlongationStatus.FINITE:
        return range(0, max(result.height + 2, 0) + 1)
    return range(0, result.algebra.cap)


def prolong_summary(result: ProlongationResult) -> ProlongReport:
    checks = [CheckResult(name=name, passed=ok) for name, ok in sorted(result.checks.items())]
    ranks = []
    for n in _partial_range(result):
        op = partial_operator(result, n)
        w = tor_complement(result, n, op)
        kernel = verify_partial_kernel(result, n, op)
        ranks.append(
            PartialRanks(
                n=n,
                domain_dim=op.domain_dim,
                rank=op.rank,
                tor_dim=op.codomain_dim,
                w_dim=w.dim,
                kernel_dim=kernel.kernel_dim,
                expected_kernel_dim=kernel.expected_dim,
            )
        )
        checks.append(
            CheckResult(
                name=f"kernel_identity[{n}]",
                passed=kernel.holds,
                detail=f"dim ker {kernel.kernel_dim}, dim g^{n + 1} + gl_{n + 2} = {kernel.expected_dim}",
            )
        )
        checks.append(CheckResult(name=f"direct_sum[{n}]", passed=direct_sum_check(op, w)))
        checks.append(
            CheckResult(
                name=f"shape_dims[{n}]",
                passed=op.domain_dim == fh_dimension(result, n)
                and op.codomain_dim == tor_dimension(result, n),
            )
        )
    finite = result.status is ProlongationStatus.FINITE
    return ProlongReport(
        status=result.describe_status(),
        height=result.height if finite else None,
        cap=result.algebra.cap,
        min_degree=-result.algebra.depth,
        dims_by_degree=list(result.dims_by_degree),
        total_dim=result.total_dim if finite else None,
        g0_trivial=result.g0_trivial,
        partial_ranks=ranks,
        checks=checks,
    )


def pseudo_summary(report: PPReport) -> PseudoReport:
    prolongation = prolong_summary(report.prolongation)
    checks = [
        CheckResult(name="ch_decomposition", passed=report.cauchy.holds),
        CheckResult(name="fundamental", passed=report.fundamental.is_fundamental),
    ]
    generated = report.fundamental.generated_by_minus_one
    if report.levi_nondegenerate and generated:
        checks.append(
            CheckResult(
                name="finite_height_when_nondegenerate",
                passed=report.prolongation.status is ProlongationStatus.FINITE,
            )
        )
    return PseudoReport(
        g0_dim=report.g0_dim,
        g0_trivial=report.g0_trivial,
        fundamental=report.fundamental.is_fundamental,
        levi_nondegenerate=report.levi_nondegenerate,
        ch_dim=report.levi.ch_dim,
        ch_in_e_dim=report.cauchy.in_e.dim,
        ch_in_f_dim=report.cauchy.in_f.dim,
        prolongation=prolongation,
        checks=checks,
    )


def flag_summary(
    m: DistributionModel, flag: FlagReport, levi: LeviCauchyReport, probe: ProbeReport
) -> FlagReportModel:
    checks = [
        CheckResult(
            name="dims_strictly_increasing",
            passed=all(a < b for a, b in zip(flag.dims, flag.dims[1:])),
        ),
        CheckResult(
            name="bracket_generating_matches_dims",
            passed=flag.bracket_generating == (flag.dims[-1] == m.n_vars),
        ),
    ]
    if flag.bracket_generating:
        filtration = filtration_check(m)
        checks.append(
            CheckResult(
                name="tanaka_filtration",
                passed=filtration.holds,
                detail=f"{len(filtration.discrepancies)} frame pairs land too deep",
            )
        )
    return FlagReportModel(
        n_vars=m.n_vars,
        dims=list(flag.dims),
        depth=flag.depth,
        bracket_generating=flag.bracket_generating,
        stabilized=flag.stabilized,
        levi_rank=levi.levi_rank,
        ch_dim=levi.ch_dim,
        ch_witness=[str(x) for x in levi.witness] if levi.witness is not None else None,
        regular=probe.regular,
        samples=probe.samples,
        seed=probe.seed,
        checks=checks,
    )


def symbol_summary(
    flag: FlagReport, g: GradedLieAlgebra, levi: LeviCauchyReport
) -> SymbolReport:
    symbol_levi = levi_nondegenerate(g)
    generated = all(sub.dim == g.space.dim(d) for d, sub in generated_flag(g).items())
    checks = [
        CheckResult(name="generated_by_degree_minus_one", passed=generated),
        CheckResult(
            name="levi_verdicts_agree",
            passed=symbol_levi.nondegenerate == (levi.ch_dim == 0),
        ),
    ]
    return SymbolReport(
        flag_dims=list(flag.dims),
        symbol=gla_to_document(g),
        levi_nondegenerate=symbol_levi.nondegenerate,
        checks=checks,
    )


def fibration_summary(
    symbol: PseudoProductSymbol,
    diagnostics: FibrationDiagnostics,
    levi: LeviCauchyReport,
    pseudo: PPReport,
) -> FibrationReport:
    pseudo_report = pseudo_summary(pseudo)
    checks = [
        CheckResult(name="transverse", passed=diagnostics.transverse),
        CheckResult(name="integrable_e", passed=diagnostics.integrable_e),
        CheckResult(name="integrable_f", passed=diagnostics.integrable_f),
        CheckResult(
            name="levi_verdicts_agree",
            passed=pseudo.levi_nondegenerate == (levi.ch_dim == 0),
        ),
    ]
    return FibrationReport(
        points_checked=diagnostics.points_checked,
        seed=diagnostics.seed,
        note=diagnostics.note,
        symbol=symbol_to_document(symbol),
        vector_field_ch_dim=levi.ch_dim,
        pseudo=pseudo_report,
        checks=checks,
    )
