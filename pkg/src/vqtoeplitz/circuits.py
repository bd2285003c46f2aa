"""Gate-level circuits and exact/sampled statevector simulation.

Bit order: qubit 0 is the least significant bit of the basis-state index,
so bitstrings print qubit (n-1) first.  Every circuit's dense realization
is unitary; ``ControlledBlock`` wraps an arbitrary unitary acting on a
target range when the control qubit is |1>, which is how controlled
tensor-word letters and state preparations enter the Hadamard tests.

The QFT circuit matches ``linalg.dft_matrix`` exactly (it ends with the
bit-reversal swaps, each compiled to three CNOTs); a phase tower between
a QFT pair realizes any power of the cyclic shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DimensionMismatch, basis_state
from .toeplitz import PhaseSpectrum, phase_spectrum


class NonUnitaryBlock(ValueError):
    """A block gate was given a matrix that is not unitary."""


class ShotCountZero(ValueError):
    """Sampled estimation requires at least one shot."""


class UnsupportedPattern(ValueError):
    """Projector descriptor has no basis-change circuit realization."""


_UNITARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Gate:
    tag: str
    qubits: tuple[int, ...]
    angle: float | None = None
    matrix: np.ndarray | None = None


def _check_unitary(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[0]
    if matrix.shape != (dim, dim) or dim & (dim - 1):
        raise NonUnitaryBlock(f"block must be square with power-of-two size, got {matrix.shape}")
    defect = np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim)))
    if defect > _UNITARY_TOL:
        raise NonUnitaryBlock(f"block unitarity defect {defect:.2e} exceeds {_UNITARY_TOL}")
    return matrix


@dataclass
class Circuit:
    """Ordered gate list on a fixed qubit count."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def _check(self, *qubits: int):
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"duplicate qubit in {qubits}")
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"qubit {q} out of range for {self.num_qubits} qubits")

    def _add(self, tag, qubits, angle=None, matrix=None) -> "Circuit":
        self._check(*qubits)
        self.gates.append(Gate(tag, tuple(qubits), angle, matrix))
        return self

    def h(self, q):
        return self._add("h", (q,))

    def x(self, q):
        return self._add("x", (q,))

    def s(self, q):
        return self._add("s", (q,))

    def sdg(self, q):
        return self._add("sdg", (q,))

    def ry(self, angle, q):
        return self._add("ry", (q,), float(angle))

    def rz(self, angle, q):
        return self._add("rz", (q,), float(angle))

    def phase(self, angle, q):
        return self._add("phase", (q,), float(angle))

    def cnot(self, control, target):
        return self._add("cnot", (control, target))

    def cz(self, control, target):
        return self._add("cz", (control, target))

    def cphase(self, angle, control, target):
        return self._add("cphase", (control, target), float(angle))

    def swap(self, a, b):
        self.cnot(a, b)
        self.cnot(b, a)
        return self.cnot(a, b)

    def block(self, qubits, matrix, check: bool = True):
        """Arbitrary unitary on a qubit tuple (first listed = least significant)."""
        if check:
            matrix = _check_unitary(matrix)
        return self._add("block", tuple(qubits), None, matrix)

    def cblock(self, control, targets, matrix, check: bool = True):
        """Unitary on the target tuple applied when the control reads |1>."""
        if check:
            matrix = _check_unitary(matrix)
        if matrix.shape[0] != 1 << len(targets):
            raise DimensionMismatch(
                f"block of dim {matrix.shape[0]} does not fit {len(targets)} targets"
            )
        return self._add("cblock", (control, *targets), None, matrix)

    def extend(self, other: "Circuit") -> "Circuit":
        if other.num_qubits > self.num_qubits:
            raise DimensionMismatch("cannot extend with a wider circuit")
        self.gates.extend(other.gates)
        return self

    def inverse(self) -> "Circuit":
        inv = Circuit(self.num_qubits)
        for gate in reversed(self.gates):
            if gate.tag in ("h", "x", "cnot", "cz"):
                inv.gates.append(gate)
            elif gate.tag == "s":
                inv.gates.append(Gate("sdg", gate.qubits))
            elif gate.tag == "sdg":
                inv.gates.append(Gate("s", gate.qubits))
            elif gate.tag in ("ry", "rz", "phase", "cphase"):
                inv.gates.append(Gate(gate.tag, gate.qubits, -gate.angle))
            elif gate.tag in ("block", "cblock"):
                inv.gates.append(Gate(gate.tag, gate.qubits, None, gate.matrix.conj().T))
            else:
                raise ValueError(f"cannot invert gate {gate.tag}")
        return inv

    def to_json_records(self) -> list[dict]:
        """Plain gate records for inspection/cross-tool comparison."""
        records = []
        for gate in self.gates:
            rec: dict = {"gate": gate.tag, "qubits": list(gate.qubits)}
            if gate.angle is not None:
                rec["angle"] = gate.angle
            if gate.matrix is not None and gate.tag in ("block", "cblock"):
                rec["block_dim"] = int(gate.matrix.shape[0])
            records.append(rec)
        return records


# ---------------------------------------------------------------------------
# simulation

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_S = np.diag([1.0, 1j])
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)  # qubit order (control, target): basis index = control + 2*target
_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def _gate_matrix(gate: Gate) -> np.ndarray:
    if gate.tag == "h":
        return _H
    if gate.tag == "x":
        return _X
    if gate.tag == "s":
        return _S
    if gate.tag == "sdg":
        return _S.conj()
    if gate.tag == "ry":
        c, s = np.cos(gate.angle / 2), np.sin(gate.angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.tag == "rz":
        return np.diag([np.exp(-0.5j * gate.angle), np.exp(0.5j * gate.angle)])
    if gate.tag == "phase":
        return np.diag([1.0, np.exp(1j * gate.angle)])
    if gate.tag == "cnot":
        return _CNOT
    if gate.tag == "cz":
        return _CZ
    if gate.tag == "cphase":
        return np.diag([1.0, 1.0, 1.0, np.exp(1j * gate.angle)])
    raise ValueError(f"no matrix for gate {gate.tag}")


def _apply_unitary(state: np.ndarray, matrix: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Apply a 2^k unitary to the listed qubits (first = least significant).

    ``state`` may be a vector (2^n,) or a stack of columns (2^n, m).
    """
    k = len(qubits)
    if k == n and qubits == tuple(range(n)):
        return matrix @ state
    cols = 1 if state.ndim == 1 else state.shape[1]
    tensor = state.reshape([2] * n + [cols])
    # axis of qubit q is n-1-q; bring target axes to the front ordered
    # most-significant-first so the flattened front index matches the matrix.
    axes = [n - 1 - q for q in reversed(qubits)]
    tensor = np.moveaxis(tensor, axes, range(k))
    shape = tensor.shape
    tensor = matrix @ tensor.reshape(1 << k, -1)
    tensor = np.moveaxis(tensor.reshape(shape), range(k), axes)
    out = tensor.reshape(1 << n, cols)
    return out[:, 0] if state.ndim == 1 else out


def _apply_gate(state: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    if gate.tag == "block":
        return _apply_unitary(state, gate.matrix, gate.qubits, n)
    if gate.tag == "cblock":
        control, targets = gate.qubits[0], gate.qubits[1:]
        dim = 1 << len(targets)
        full = np.eye(2 * dim, dtype=complex)
        full[dim:, dim:] = gate.matrix
        # control as the most significant local bit makes the block lower-right
        return _apply_unitary(state, full, (*targets, control), n)
    return _apply_unitary(state, _gate_matrix(gate), gate.qubits, n)


def run_statevector(circuit: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Exact simulation; returns the final statevector."""
    dim = 1 << circuit.num_qubits
    if initial is None:
        state = basis_state(circuit.num_qubits, 0)
    else:
        state = np.asarray(initial, dtype=complex)
        if state.shape != (dim,):
            raise DimensionMismatch(f"initial state has dim {state.shape}, circuit needs {dim}")
        state = state.copy()
    expected_norm = 1.0 if initial is None else float(np.linalg.norm(initial))
    for gate in circuit.gates:
        state = _apply_gate(state, gate, circuit.num_qubits)
    assert abs(np.linalg.norm(state) - expected_norm) < 1e-12 * max(1.0, expected_norm)
    return state


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit (columns = images of basis states)."""
    dim = 1 << circuit.num_qubits
    mat = np.eye(dim, dtype=complex)
    for gate in circuit.gates:
        mat = _apply_gate(mat, gate, circuit.num_qubits)
    return mat


@dataclass(frozen=True)
class ShotResult:
    counts: dict[str, int]
    shots: int
    seed: int


def sample_shots(circuit: Circuit, initial: np.ndarray | None, shots: int, seed: int) -> ShotResult:
    """Multinomial sample of computational-basis outcomes; deterministic in seed."""
    if shots < 1:
        raise ShotCountZero("shots must be >= 1")
    state = run_statevector(circuit, initial)
    probs = np.abs(state) ** 2
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    n = circuit.num_qubits
    counts = {format(i, f"0{n}b"): int(c) for i, c in enumerate(draws) if c > 0}
    return ShotResult(counts=counts, shots=shots, seed=seed)


# ---------------------------------------------------------------------------
# structured circuits


def qft_circuit(num_qubits: int) -> Circuit:
    """QFT whose dense form equals dft_matrix(2**num_qubits).

    num_qubits Hadamards, num_qubits*(num_qubits-1)/2 controlled phases,
    floor(num_qubits/2) bit-reversal swaps.
    """
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    circ = Circuit(num_qubits)
    for j in range(num_qubits - 1, -1, -1):
        circ.h(j)
        for k in range(j - 1, -1, -1):
            circ.cphase(2.0 * np.pi / (1 << (j - k + 1)), k, j)
    for i in range(num_qubits // 2):
        circ.swap(i, num_qubits - 1 - i)
    return circ


def inverse_qft_circuit(num_qubits: int) -> Circuit:
    return qft_circuit(num_qubits).inverse()


def phase_tower_circuit(spectrum: PhaseSpectrum) -> Circuit:
    """One phase gate per qubit realizing a power of the unit-root diagonal."""
    num_qubits = spectrum.n.bit_length() - 1
    circ = Circuit(num_qubits)
    for j, theta in enumerate(spectrum.phases):
        if theta != 0.0:
            circ.phase(theta, j)
    return circ


def controlled_Ll_circuit(n: int, power: int) -> Circuit:
    """Ancilla-controlled l-th power of the cyclic down-shift on size n.

    Layout: system qubits 0..log2(n)-1, ancilla = log2(n).  The QFT pair is
    applied unconditionally (it cancels on the control-0 branch); only the
    phase tower is controlled.  Dense form is block_diag(I, L^power).
    """
    num_system = n.bit_length() - 1
    if n != 1 << num_system:
        raise ValueError(f"n must be a power of two, got {n}")
    ancilla = num_system
    circ = Circuit(num_system + 1)
    qft = qft_circuit(num_system)
    circ.extend(qft)
    for j, theta in enumerate(phase_spectrum(n, power).phases):
        if theta != 0.0:
            circ.cphase(theta, ancilla, j)
    circ.extend(qft.inverse())
    return circ


def controlled_word_circuit(num_system: int, unitary: np.ndarray) -> Circuit:
    """Ancilla-controlled arbitrary unitary on the full system register."""
    circ = Circuit(num_system + 1)
    circ.cblock(num_system, tuple(range(num_system)), unitary)
    return circ


def state_prep_circuit(amplitudes: np.ndarray) -> Circuit:
    """Exact preparation of an arbitrary normalized state as one block gate."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    dim = amplitudes.shape[0]
    num_qubits = dim.bit_length() - 1
    if dim != 1 << num_qubits:
        raise DimensionMismatch(f"state length {dim} is not a power of two")
    basis = np.eye(dim, dtype=complex)
    basis[:, 0] = amplitudes
    q, r = np.linalg.qr(basis)
    q[:, 0] *= r[0, 0] / abs(r[0, 0])  # undo QR's phase so column 0 is exactly the state
    circ = Circuit(num_qubits)
    return circ.block(tuple(range(num_qubits)), q)


def uniform_prep_circuit(num_qubits: int) -> Circuit:
    circ = Circuit(num_qubits)
    for q in range(num_qubits):
        circ.h(q)
    return circ


def basis_prep_circuit(num_qubits: int, index: int) -> Circuit:
    circ = Circuit(num_qubits)
    for q in range(num_qubits):
        if (index >> q) & 1:
            circ.x(q)
    return circ


# ---------------------------------------------------------------------------
# Hadamard test


def _ancilla_bias(state: np.ndarray, ancilla: int, num_qubits: int) -> float:
    probs = np.abs(state.reshape([2] * num_qubits)) ** 2
    axis = num_qubits - 1 - ancilla
    marg = probs.sum(axis=tuple(i for i in range(num_qubits) if i != axis))
    return float(marg[0] - marg[1])


def _prep_unitary(prep: "Circuit | np.ndarray") -> np.ndarray:
    # ndarrays are accepted as precomputed preparation unitaries so hot
    # loops do not rebuild them per bracket.
    if isinstance(prep, Circuit):
        return circuit_unitary(prep)
    return _check_unitary(prep)


def _interference_state(n_system, controlled, left_u, right_u) -> np.ndarray:
    """State (|0>|left> + |1>|U right>)/sqrt(2) shared by both test variants."""
    ancilla = n_system
    system = tuple(range(n_system))
    circ = Circuit(n_system + 1)
    circ.h(ancilla)
    circ.x(ancilla)
    circ.cblock(ancilla, system, left_u, check=False)
    circ.x(ancilla)
    circ.cblock(ancilla, system, right_u, check=False)
    circ.extend(controlled)
    return run_statevector(circ)


def exact_bracket(
    n_system: int,
    controlled: Circuit,
    state_prep_left: "Circuit | np.ndarray",
    state_prep_right: "Circuit | np.ndarray",
) -> complex:
    """Exact <left|U|right> from one simulation of the interference state.

    Equals hadamard_test(part="real") + 1j*hadamard_test(part="imag")
    evaluated exactly; used by the cost assembly in exact mode.
    """
    state = _interference_state(
        n_system, controlled, _prep_unitary(state_prep_left), _prep_unitary(state_prep_right)
    )
    half = 1 << n_system
    return complex(2.0 * np.vdot(state[:half], state[half:]))


def hadamard_test(
    n_system: int,
    controlled: Circuit,
    state_prep_left: "Circuit | np.ndarray",
    state_prep_right: "Circuit | np.ndarray",
    part: str = "real",
    shots: int | None = None,
    seed: int = 0,
) -> float:
    """Interferometric estimate of Re or Im <left|U|right>.

    ``controlled`` is a circuit on n_system+1 qubits realizing the
    ancilla-controlled U (ancilla = qubit n_system).  The left and right
    preparations are injected as blocks on the control-0 / control-1
    branches, the ancilla is read in the X (or, for the imaginary part,
    Y) basis, and the bias p0 - p1 is the requested component.
    """
    if part not in ("real", "imag"):
        raise ValueError(f"part must be 'real' or 'imag', got {part!r}")
    ancilla = n_system
    total = n_system + 1
    system = tuple(range(n_system))
    circ = Circuit(total)
    circ.h(ancilla)
    if part == "imag":
        circ.sdg(ancilla)
    circ.x(ancilla)
    circ.cblock(ancilla, system, _prep_unitary(state_prep_left), check=False)
    circ.x(ancilla)
    circ.cblock(ancilla, system, _prep_unitary(state_prep_right), check=False)
    circ.extend(controlled)
    circ.h(ancilla)
    if shots is None:
        return _ancilla_bias(run_statevector(circ), ancilla, total)
    if shots < 1:
        raise ShotCountZero("shots must be >= 1")
    result = sample_shots(circ, None, shots, seed)
    bias = 0
    for bits, count in result.counts.items():
        bias += count if bits[0] == "0" else -count  # ancilla is the top bit
    return bias / shots


def bracket(
    n_system: int,
    controlled: Circuit,
    state_prep_left: "Circuit | np.ndarray",
    state_prep_right: "Circuit | np.ndarray",
    shots: int | None = None,
    seed: int = 0,
) -> complex:
    """Full complex <left|U|right> from a real and an imaginary test."""
    re = hadamard_test(n_system, controlled, state_prep_left, state_prep_right, "real", shots, seed)
    im = hadamard_test(
        n_system, controlled, state_prep_left, state_prep_right, "imag", shots, seed + 1
    )
    return complex(re, im)


# ---------------------------------------------------------------------------
# projector-pair measurement circuits


def _superposition_prep(num_qubits: int, i: int, j: int, sign: int) -> Circuit:
    """Prepare (|i> + sign |j>)/sqrt(2) up to a global sign."""
    differ = i ^ j
    pivot = (differ & -differ).bit_length() - 1
    circ = Circuit(num_qubits)
    if sign < 0:
        circ.x(pivot)
    circ.h(pivot)
    for b in range(num_qubits):
        if (differ >> b) & 1 and b != pivot:
            circ.cnot(pivot, b)
    for b in range(num_qubits):
        if (i >> b) & 1:
            circ.x(b)
    return circ


def bell_pair_circuits(descriptor, num_qubits: int) -> list[tuple[Circuit, int]]:
    """Preparation circuits and signs with <psi|M|psi> = sum sign*|<psi|prep|0>|^2.

    Supported patterns: one diagonal projector |i><i|; a diagonal pair
    |i><i| + |j><j| (rewritten as the two GHZ-style superposition
    projectors, both +1); a symmetrized off-diagonal pair
    |i><j| + |j><i| (superposition projectors with signs +1, -1).
    """
    from .decomposition import ProjectorPair  # local import to avoid a cycle

    if not isinstance(descriptor, ProjectorPair):
        raise UnsupportedPattern(f"not a projector pair: {type(descriptor).__name__}")
    dim = 1 << num_qubits
    for i, j in descriptor.pairs:
        if not (0 <= i < dim and 0 <= j < dim):
            raise UnsupportedPattern(f"basis index ({i},{j}) out of range for {num_qubits} qubits")
    if descriptor.symmetrize:
        if len(descriptor.pairs) != 1 or descriptor.pairs[0][0] == descriptor.pairs[0][1]:
            raise UnsupportedPattern("symmetrized descriptor must hold one off-diagonal pair")
        i, j = descriptor.pairs[0]
        return [
            (_superposition_prep(num_qubits, i, j, +1), +1),
            (_superposition_prep(num_qubits, i, j, -1), -1),
        ]
    if any(i != j for i, j in descriptor.pairs):
        raise UnsupportedPattern("off-diagonal entries require symmetrize=True")
    indices = [i for i, _ in descriptor.pairs]
    if len(indices) == 1:
        return [(basis_prep_circuit(num_qubits, indices[0]), +1)]
    if len(indices) == 2:
        i, j = indices
        return [
            (_superposition_prep(num_qubits, i, j, +1), +1),
            (_superposition_prep(num_qubits, i, j, -1), +1),
        ]
    raise UnsupportedPattern(f"unsupported diagonal multiplicity {len(indices)}")


def projector_expectation(
    descriptor,
    prep_state: "Circuit | np.ndarray",
    shots: int | None = None,
    seed: int = 0,
) -> float:
    """<psi|M|psi> via basis-change circuits: invert each preparation on
    |psi> and read the all-zeros probability.

    ``prep_state`` is the circuit preparing |psi> from |0...0>, or the
    already-prepared statevector.
    """
    if isinstance(prep_state, Circuit):
        num_qubits = prep_state.num_qubits
        state = run_statevector(prep_state)
    else:
        state = np.asarray(prep_state, dtype=complex)
        num_qubits = state.shape[0].bit_length() - 1
    total = 0.0
    for k, (prep, sign) in enumerate(bell_pair_circuits(descriptor, num_qubits)):
        circ = prep.inverse()
        if shots is None:
            amp = run_statevector(circ, state)[0]
            prob = float(np.abs(amp) ** 2)
        else:
            result = sample_shots(circ, state, shots, seed + k)
            prob = result.counts.get("0" * num_qubits, 0) / shots
        total += sign * prob
    return total
