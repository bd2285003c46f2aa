"""Banded Toeplitz and circulant machinery.

A banded Toeplitz matrix with coefficients ``t_l`` on offsets |l| <= K is
embedded into a 2n x 2n circulant whose top-left block reproduces it
exactly.  Circulants are diagonalized by the DFT, so every bracket
<u|C|v> splits into brackets of cyclic-shift powers L^l, and each L^l is a
tower of single-qubit phase gates between a QFT pair.

First-column / offset bookkeeping for the embedding of ``t``:

    column[0..n-1]  = t_0, t_1, ..., t_{n-1}
    column[n]       = 0
    column[n+1..]   = t_{-(n-1)}, ..., t_{-1}

The spectrum of a circulant with first column ``c`` is sqrt(n) * (F @ c)
(equivalently ``n * ifft(c)``); the sqrt(n) factor belongs to the unitary
DFT normalization and is pinned by the spectral-identity test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DimensionMismatch


class NotBanded(ValueError):
    """Coefficients violate the band structure or the band-width guard."""


def _as_scalar(value) -> complex:
    value = complex(value)
    return value


class ToeplitzSpec:
    """Banded Toeplitz matrix given by offset -> coefficient.

    Offset l > 0 is the l-th subdiagonal (entry (i, i-l) reading (i,k) = t_{i-k}),
    l < 0 the superdiagonals.  Zero coefficients are dropped.  The band
    width is guarded by K <= 2*(log2 n)**2, a concrete polylog budget.
    """

    def __init__(self, n: int, coeffs: dict[int, complex]):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = int(n)
        self.coeffs = {int(l): _as_scalar(t) for l, t in coeffs.items() if complex(t) != 0}
        k = self.band
        if k >= n:
            raise NotBanded(f"offset {k} out of range for size {n}")
        guard = 2.0 * np.log2(n) ** 2 if n > 1 else 0
        if k > guard:
            raise NotBanded(f"band K={k} exceeds polylog guard 2*(log2 n)^2 = {guard:.1f}")

    @property
    def band(self) -> int:
        """K, the largest occupied |offset|."""
        return max((abs(l) for l in self.coeffs), default=0)

    @property
    def is_real(self) -> bool:
        return all(t.imag == 0 for t in self.coeffs.values())

    def scaled(self, factor: complex) -> "ToeplitzSpec":
        return ToeplitzSpec(self.n, {l: t * factor for l, t in self.coeffs.items()})

    def __repr__(self):
        band = {l: self.coeffs[l] for l in sorted(self.coeffs)}
        return f"ToeplitzSpec(n={self.n}, coeffs={band})"

    def __eq__(self, other):
        return (
            isinstance(other, ToeplitzSpec)
            and self.n == other.n
            and self.coeffs == other.coeffs
        )


@dataclass(frozen=True)
class CirculantSpec:
    """Circulant matrix given by its first column: entry (i, j) = column[(i-j) mod n]."""

    n: int
    first_column: tuple[complex, ...]

    def __post_init__(self):
        if len(self.first_column) != self.n:
            raise DimensionMismatch("first_column length must equal n")


@dataclass(frozen=True)
class PhaseSpectrum:
    """Per-qubit phases realizing the l-th power of the root-of-unity diagonal.

    Qubit j carries the phase gate angle (l * 2*pi*2**j / n) mod 2*pi; the
    tensor product over all log2(n) qubits equals diag(omega**(i*l)).
    """

    n: int
    power: int
    phases: tuple[float, ...]


def toeplitz_to_dense(spec: ToeplitzSpec) -> np.ndarray:
    out = np.zeros((spec.n, spec.n), dtype=complex)
    for l, t in spec.coeffs.items():
        idx = np.arange(spec.n - abs(l))
        if l >= 0:
            out[idx + l, idx] = t
        else:
            out[idx, idx - l] = t
    return out


def circulant_to_dense(spec: CirculantSpec) -> np.ndarray:
    col = np.asarray(spec.first_column, dtype=complex)
    i = np.arange(spec.n)
    return col[(i[:, None] - i[None, :]) % spec.n]


def circulant_spectrum(spec: CirculantSpec) -> np.ndarray:
    """Eigenvalues in DFT order: diag(F C F^{-1}) = sqrt(n) * (F @ column)."""
    col = np.asarray(spec.first_column, dtype=complex)
    return spec.n * np.fft.ifft(col)


def embed_in_circulant(spec: ToeplitzSpec) -> CirculantSpec:
    """Size-2n circulant whose top-left n x n block is the given Toeplitz matrix."""
    n = spec.n
    col = np.zeros(2 * n, dtype=complex)
    for l, t in spec.coeffs.items():
        if l >= 0:
            col[l] = t
        else:
            col[2 * n + l] = t
    return CirculantSpec(2 * n, tuple(col))


def circulant_expectation_terms(spec: CirculantSpec) -> list[tuple[complex, int]]:
    """Nonzero (coefficient, shift power l) pairs of a banded circulant.

    The bracket of the circulant is the coefficient-weighted sum of
    brackets of L^l.  Negative l is reported as-is; callers realize it as
    the (n-|l|)-th positive power or, when bra and ket coincide, as the
    complex conjugate of the positive-power bracket.
    """
    col = np.asarray(spec.first_column, dtype=complex)
    n = spec.n
    nonzero = [m for m in range(n) if col[m] != 0]
    band = max((min(m, n - m) for m in nonzero), default=0)
    if 2 * band >= n:
        raise NotBanded(f"interior coefficients occupied: band {band} too wide for size {n}")
    terms: list[tuple[complex, int]] = []
    for l in range(-band, band + 1):
        coeff = col[l % n]
        if coeff != 0:
            terms.append((complex(coeff), l))
    terms.sort(key=lambda cl: (abs(cl[1]), -np.sign(cl[1])))
    return terms


def phase_spectrum(n: int, power: int) -> PhaseSpectrum:
    """Phase tower for the l-th power of the size-n root-of-unity diagonal."""
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    num_qubits = n.bit_length() - 1
    phases = tuple(
        float((power * 2.0 * np.pi * (1 << j) / n) % (2.0 * np.pi)) for j in range(num_qubits)
    )
    return PhaseSpectrum(n=n, power=power, phases=phases)


def phase_spectrum_diagonal(spectrum: PhaseSpectrum) -> np.ndarray:
    """Dense diagonal realized by the tensor product of the phase gates."""
    diag = np.ones(1, dtype=complex)
    for theta in reversed(spectrum.phases):  # qubit 0 is least significant
        diag = np.kron(diag, np.array([1.0, np.exp(1j * theta)]))
    # kron above builds (high qubit) x ... x (low qubit); reversed() plus this
    # ordering leaves entry i = prod_j exp(1j*theta_j*bit_j(i)).
    return diag


def classical_toeplitz_matvec(spec: ToeplitzSpec, v: np.ndarray) -> np.ndarray:
    """Direct banded multiply, O(K n)."""
    v = np.asarray(v)
    if v.shape[0] != spec.n:
        raise DimensionMismatch(f"vector length {v.shape[0]} != n = {spec.n}")
    out = np.zeros(spec.n, dtype=complex)
    for l, t in spec.coeffs.items():
        if l >= 0:
            out[l:] += t * v[: spec.n - l]
        else:
            out[: spec.n + l] += t * v[-l:]
    return out


def band_autocorrelation(spec: ToeplitzSpec) -> ToeplitzSpec:
    """Band of the Gram matrix T^dagger T, ignoring finite-size corners.

    The coefficients are the discrete autocorrelation of the band,
    u_m = sum_l conj(t_l) t_{l+m}; the band width doubles to 2K.  The
    dropped corner entries are produced by ``corner_corrections``.
    """
    out: dict[int, complex] = {}
    for m in range(-2 * spec.band, 2 * spec.band + 1):
        u = sum(np.conj(t) * spec.coeffs.get(l + m, 0.0) for l, t in spec.coeffs.items())
        if u != 0:
            out[m] = u
    return ToeplitzSpec(spec.n, out)


def corner_corrections(spec: ToeplitzSpec) -> dict[tuple[int, int], complex]:
    """Entries of the corner matrix M with T^dagger T = Toeplitz(autocorr) - M.

    The Toeplitz extension of the Gram band overcounts products whose
    summation index runs off the matrix; the excess is supported on the
    K x K corners:

        M[i, j]             = sum_{k>=1} conj(t_{-k-i}) t_{-k-j}   (top left)
        M[n-1-i, n-1-j]    += sum_{k>=1} conj(t_{k+i}) t_{k+j}     (bottom right)
    """
    n, band = spec.n, spec.band
    out: dict[tuple[int, int], complex] = {}

    def add(i, j, val):
        if val != 0:
            out[(i, j)] = out.get((i, j), 0.0) + val

    for i in range(band):
        for j in range(band):
            top = sum(
                np.conj(spec.coeffs.get(-k - i, 0.0)) * spec.coeffs.get(-k - j, 0.0)
                for k in range(1, band + 1)
            )
            add(i, j, top)
            bottom = sum(
                np.conj(spec.coeffs.get(k + i, 0.0)) * spec.coeffs.get(k + j, 0.0)
                for k in range(1, band + 1)
            )
            add(n - 1 - i, n - 1 - j, bottom)
    return {ij: complex(v) for ij, v in out.items() if v != 0}
