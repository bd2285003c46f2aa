"""Invariant suite behind the `verify` command.

Each check reconstructs something two independent ways (circuit vs dense
oracle, term list vs direct construction) and reports the max error
against a fixed tolerance.  The solve commands run the reconstruction
part of this suite for their own term lists before optimizing, so a
miscompiled cost can never be optimized silently.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import decomposition as deco
from .circuits import (
    circuit_unitary,
    controlled_Ll_circuit,
    phase_tower_circuit,
    projector_expectation,
    qft_circuit,
)
from .linalg import build_unit_circulant, dft_matrix, random_state
from .poisson import BoundaryCondition, PoissonProblem, build_poisson_1d, build_poisson_dd
from .toeplitz import (
    CirculantSpec,
    ToeplitzSpec,
    circulant_spectrum,
    circulant_to_dense,
    embed_in_circulant,
    phase_spectrum,
    phase_spectrum_diagonal,
    toeplitz_to_dense,
)
from .vqa import AnsatzSpec, ansatz_state, cost_linear_system, dense_hamiltonian


@dataclass
class CheckResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def to_jsonable(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        return out


def _random_banded_spec(n: int, rng: np.random.Generator, max_band: int = 3) -> ToeplitzSpec:
    band = int(rng.integers(0, max_band + 1))
    coeffs = {}
    for l in range(-band, band + 1):
        value = rng.standard_normal()
        if abs(value) > 0.05:
            coeffs[l] = value
    coeffs.setdefault(0, 1.0)
    return ToeplitzSpec(n, coeffs)


def _check_dft_unitarity() -> CheckResult:
    err = 0.0
    for n in (2, 3, 4, 8, 16, 64):
        f = dft_matrix(n)
        err = max(err, np.max(np.abs(f.conj().T @ f - np.eye(n))))
    return CheckResult("linalg/dft-unitarity", float(err), 1e-12)


def _check_shift_diagonalization() -> CheckResult:
    err = 0.0
    for n in (2, 4, 8, 16):
        f = dft_matrix(n)
        d = np.diag(np.exp(2j * np.pi * np.arange(n) / n))
        err = max(err, np.max(np.abs(f.conj().T @ d @ f - build_unit_circulant(n))))
    return CheckResult("linalg/shift-diagonalization", float(err), 1e-12)


def _check_embedding(samples: int, rng) -> CheckResult:
    err = 0.0
    for _ in range(samples):
        n = int(rng.choice([4, 8, 16]))
        spec = _random_banded_spec(n, rng)
        dense = toeplitz_to_dense(spec)
        embedded = circulant_to_dense(embed_in_circulant(spec))
        err = max(err, np.max(np.abs(embedded[:n, :n] - dense)))
    return CheckResult("toeplitz/embedding-top-left-block", float(err), 0.0)


def _check_spectral_identity(samples: int, rng) -> CheckResult:
    err = 0.0
    for _ in range(samples):
        n = int(rng.choice([4, 8, 16]))
        col = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        spec = CirculantSpec(n, tuple(col))
        f = dft_matrix(n)
        lhs = circulant_to_dense(spec)
        rhs = f.conj().T @ np.diag(circulant_spectrum(spec)) @ f
        err = max(err, np.max(np.abs(lhs - rhs)))
    return CheckResult("toeplitz/spectral-identity", float(err), 1e-12)


def _check_phase_towers() -> CheckResult:
    err = 0.0
    for n in (4, 8, 16):
        omega_powers = np.exp(2j * np.pi * np.arange(n) / n)
        for power in range(-n, n + 1):
            diag = phase_spectrum_diagonal(phase_spectrum(n, power))
            err = max(err, np.max(np.abs(diag - omega_powers**power)))
    return CheckResult("toeplitz/phase-tower-diagonals", float(err), 1e-12)


def _decomposition_checks(rng, inject_fault: str | None) -> list[CheckResult]:
    results = []
    err_1d = 0.0
    for n in (4, 8, 16):
        a_terms, a2_terms = deco.decompose_dirichlet_1d(n)
        problem = PoissonProblem(1, n.bit_length() - 1)
        a_dense = build_poisson_1d(problem)
        err_1d = max(err_1d, np.max(np.abs(deco.reconstruct_dense(a_terms) - a_dense)))
        err_1d = max(err_1d, np.max(np.abs(deco.reconstruct_dense(a2_terms) - a_dense @ a_dense)))
    results.append(CheckResult("decompose/dirichlet-1d", float(err_1d), 1e-12))

    err_uni = 0.0
    for n in (4, 8, 16):
        c, d = rng.uniform(0.0, 1.0, 2)
        a_terms, a2_terms = deco.decompose_unified_1d(n, c, d)
        if inject_fault == "unified-squared-coeff":
            bad = list(a2_terms.terms)
            bad[0] = deco.DecompositionTerm(bad[0].coefficient * 1.001, bad[0].op)
            a2_terms = deco.TermList(
                tuple(bad), a2_terms.n, a2_terms.dimension, a2_terms.target,
                a2_terms.bra_equals_ket,
            )
        dense = toeplitz_to_dense(ToeplitzSpec(n, {-1: -1, 0: 2, 1: -1})).real
        dense[0, 0] -= c
        dense[n - 1, n - 1] -= d
        err_uni = max(err_uni, np.max(np.abs(deco.reconstruct_dense(a_terms) - dense)))
        err_uni = max(err_uni, np.max(np.abs(deco.reconstruct_dense(a2_terms) - dense @ dense)))
    results.append(CheckResult("decompose/unified-1d", float(err_uni), 1e-12))

    err_dd = 0.0
    for dim, nq in ((1, 2), (2, 2), (2, 1), (3, 1)):
        problem = PoissonProblem(dim, nq)
        dense = build_poisson_dd(problem)
        terms = deco.decompose_dirichlet_dd(dim, problem.n)
        squared = deco.decompose_dirichlet_dd_squared(dim, problem.n)
        err_dd = max(err_dd, np.max(np.abs(deco.reconstruct_dense(terms) - dense)))
        err_dd = max(err_dd, np.max(np.abs(deco.reconstruct_dense(squared) - dense @ dense)))
    results.append(CheckResult("decompose/dirichlet-dd", float(err_dd), 1e-12))

    count_err = 0
    for n in (8,):
        a_terms, a2_terms = deco.decompose_unified_1d(n, 0.3, 0.6)
        count_err += abs(deco.count_terms(a_terms) - 5)
        count_err += abs(deco.count_terms(a2_terms) - 6)
    for dim in (1, 2, 3):
        count_err += abs(deco.count_terms(deco.decompose_dirichlet_dd(dim, 4)) - (4 * dim + 1))
        count_err += abs(
            deco.count_terms(deco.decompose_dirichlet_dd_squared(dim, 4)) - 12 * dim * dim
        )
    results.append(CheckResult("decompose/bracket-counts", float(count_err), 0.0))
    return results


def _check_qft(max_qubits: int = 5) -> CheckResult:
    err = 0.0
    for q in range(1, max_qubits + 1):
        err = max(err, np.max(np.abs(circuit_unitary(qft_circuit(q)) - dft_matrix(1 << q))))
    return CheckResult("circuits/qft-vs-dft", float(err), 1e-12)


def _check_controlled_shift() -> CheckResult:
    err = 0.0
    for n in (4, 8):
        shift = build_unit_circulant(n)
        for power in (0, 1, 2, n - 1, n):
            dense = circuit_unitary(controlled_Ll_circuit(n, power))
            expected = np.eye(2 * n, dtype=complex)
            expected[n:, n:] = np.linalg.matrix_power(shift, power)
            err = max(err, np.max(np.abs(dense - expected)))
    return CheckResult("circuits/controlled-shift-blocks", float(err), 1e-12)


def _check_phase_tower_circuits() -> CheckResult:
    err = 0.0
    for n in (4, 8):
        omega_powers = np.exp(2j * np.pi * np.arange(n) / n)
        for power in (-2, -1, 0, 1, 2, n):
            circ = phase_tower_circuit(phase_spectrum(n, power))
            err = max(
                err, np.max(np.abs(np.diag(circuit_unitary(circ)) - omega_powers**power))
            )
    return CheckResult("circuits/phase-tower-circuits", float(err), 1e-12)


def _check_projector_circuits(samples: int, rng) -> CheckResult:
    err = 0.0
    n = 8
    descriptors = [
        deco.ProjectorPair(((0, 0), (n - 1, n - 1))),
        deco.ProjectorPair(((0, 0),)),
        deco.ProjectorPair(((0, 1),), symmetrize=True),
        deco.ProjectorPair(((n - 1, n - 2),), symmetrize=True),
    ]
    for _ in range(samples):
        psi = random_state(3, rng)
        for descriptor in descriptors:
            dense = deco.reconstruct_dense(
                deco.TermList((deco.DecompositionTerm(1.0, descriptor),), n, 1, "check")
            )
            expected = float(np.real(psi.conj() @ dense @ psi))
            err = max(err, abs(projector_expectation(descriptor, psi) - expected))
    return CheckResult("circuits/projector-pairs", float(err), 1e-10)


def _check_cost_vs_dense(samples: int, rng) -> CheckResult:
    err = 0.0
    cases = [
        PoissonProblem(1, 3),
        PoissonProblem(1, 3, BoundaryCondition.unified(1.0, 1.0, 1.0, 3.0)),
        PoissonProblem(2, 1),
    ]
    for problem in cases:
        ansatz = AnsatzSpec(problem.total_qubits, depth=2)
        h = dense_hamiltonian(problem)
        for _ in range(samples):
            params = rng.uniform(0, 2 * np.pi, ansatz.param_count)
            energy, _ = cost_linear_system(problem, ansatz, params)
            psi = ansatz_state(ansatz, params)
            expected = float(np.real(psi.conj() @ h @ psi))
            err = max(err, abs(energy - expected))
    return CheckResult("vqa/cost-vs-dense-hamiltonian", float(err), 1e-10)


def run_verification(
    seed: int = 0,
    samples: int = 40,
    inject_fault: str | None = None,
) -> tuple[list[CheckResult], bool]:
    """Full invariant suite; returns (results, all_passed)."""
    rng = np.random.default_rng(seed)
    results = [
        _check_dft_unitarity(),
        _check_shift_diagonalization(),
        _check_embedding(samples, rng),
        _check_spectral_identity(samples, rng),
        _check_phase_towers(),
    ]
    results.extend(_decomposition_checks(rng, inject_fault))
    results.extend(
        [
            _check_qft(),
            _check_controlled_shift(),
            _check_phase_tower_circuits(),
            _check_projector_circuits(min(samples, 10), rng),
            _check_cost_vs_dense(3, rng),
        ]
    )
    return results, all(r.passed for r in results)


def verify_problem_terms(problem: PoissonProblem, term_lists) -> float:
    """Max reconstruction error of a problem's own term lists (pre-solve gate)."""
    a_terms, a2_terms = term_lists
    dense = (
        build_poisson_1d(problem) if problem.dimension == 1 else build_poisson_dd(problem)
    )
    err = np.max(np.abs(deco.reconstruct_dense(a_terms) - dense))
    err = max(err, np.max(np.abs(deco.reconstruct_dense(a2_terms) - dense @ dense)))
    return float(err)


def term_count_table() -> dict[str, int]:
    """The headline bracket counts for the standard decompositions."""
    a1, a2 = deco.decompose_unified_1d(8, 0.5, 0.5)
    table = {
        "unified-1d-linear": deco.count_terms(a1),
        "unified-1d-squared": deco.count_terms(a2),
    }
    for dim in (1, 2, 3):
        table[f"dirichlet-{dim}d-linear"] = deco.count_terms(deco.decompose_dirichlet_dd(dim, 4))
        table[f"dirichlet-{dim}d-squared"] = deco.count_terms(
            deco.decompose_dirichlet_dd_squared(dim, 4)
        )
    return table
