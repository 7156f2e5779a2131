"""Exact small-system simulation of binary-setting qubit experiments.

Each party holds one qubit and two +-1 observables given as Bloch
directions; outcome +1 is reported as m_j = 0.  The joint conditional
table is computed by rotating each qubit into the measurement eigenbasis
of its chosen observable and reading squared amplitudes, which is the
projector contraction <psi| prod_j P_j(s_j, m_j) |psi> in dense form.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .geometry import CorrelatorVector
from .tables import ConditionalTable

MAX_PARTIES = 12
_NORM_TOL = 1e-12


@dataclass(frozen=True)
class ObservablePair:
    """Bloch angles (theta, phi) of the setting-0 and setting-1 observables."""

    theta0: float
    phi0: float
    theta1: float
    phi1: float

    def angles(self, setting: int) -> tuple[float, float]:
        if setting == 0:
            return self.theta0, self.phi0
        if setting == 1:
            return self.theta1, self.phi1
        raise ValueError("setting must be 0 or 1")

    def basis_matrix(self, setting: int) -> np.ndarray:
        """Rows are the +1 and -1 eigenbras of the chosen observable."""
        theta, phi = self.angles(setting)
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        e = cmath.exp(-1j * phi)
        return np.array([[c, s * e], [s, -c * e]], dtype=complex)


def pair_xy() -> ObservablePair:
    """Setting 0 measures Pauli X, setting 1 measures Pauli Y."""
    return ObservablePair(math.pi / 2, 0.0, math.pi / 2, math.pi / 2)


def pair_yx() -> ObservablePair:
    """The XY pair with the setting labels swapped."""
    return ObservablePair(math.pi / 2, math.pi / 2, math.pi / 2, 0.0)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized n-qubit amplitudes; basis index bit j-1 = qubit j."""

    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1).copy()
        if self.n < 1 or amps.shape[0] != 1 << self.n:
            raise ValueError("amplitude count must be 2^n")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm} is not 1")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


def ghz_state(n: int) -> PureState:
    """(|0...0> + |1...1>) / sqrt(2)."""
    if n < 2:
        raise ValueError("GHZ needs at least two parties")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return PureState(n, amps)


def basis_state(n: int, index: int = 0) -> PureState:
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return PureState(n, amps)


def tensor_product(low: PureState, high: PureState) -> PureState:
    """Joint state with `low` on parties 1..low.n and `high` above them."""
    return PureState(low.n + high.n, np.kron(high.amplitudes, low.amplitudes))


def random_strategy(n: int, rng: random.Random) -> "QuantumStrategy":
    """Haar-ish random pure state with uniformly random Bloch observables."""
    amps = np.array(
        [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(1 << n)]
    )
    amps /= np.linalg.norm(amps)
    observables = tuple(
        ObservablePair(
            math.acos(rng.uniform(-1, 1)),
            rng.uniform(0, 2 * math.pi),
            math.acos(rng.uniform(-1, 1)),
            rng.uniform(0, 2 * math.pi),
        )
        for _ in range(n)
    )
    return QuantumStrategy(PureState(n, amps), observables)


@dataclass(frozen=True)
class QuantumStrategy:
    state: PureState
    observables: tuple[ObservablePair, ...]

    def __post_init__(self) -> None:
        if len(self.observables) != self.state.n:
            raise ValueError("need one observable pair per party")

    @property
    def n(self) -> int:
        return self.state.n


def _apply_single_qubit(vec: np.ndarray, u: np.ndarray, pos: int, n: int) -> np.ndarray:
    t = vec.reshape([2] * n)
    axis = n - 1 - pos
    t = np.moveaxis(t, axis, -1) @ u.T
    return np.moveaxis(t, -1, axis).reshape(-1)

def joint_table(strategy: QuantumStrategy) -> ConditionalTable:
    """p(m | s) for all joint settings; columns renormalized to remove
    float dust (the exact column sums are 1 by projector completeness)."""
    n = strategy.n
    if n > MAX_PARTIES:
        raise ValueError(f"party count {n} exceeds the dense limit {MAX_PARTIES}")
    size = 1 << n
    rows = []
    for s in range(size):
        psi = strategy.state.amplitudes
        for j in range(n):
            u = strategy.observables[j].basis_matrix((s >> j) & 1)
            psi = _apply_single_qubit(psi, u, j, n)
        probs = np.abs(psi) ** 2
        probs /= probs.sum()
        rows.append(tuple(float(p) for p in probs))
    return ConditionalTable(n, tuple(rows))


def correlator_vector(table: ConditionalTable) -> CorrelatorVector:
    """p(XOR_j m_j = 1 | s) per setting word, from any conditional table."""
    return CorrelatorVector(
        table.n, tuple(table.outcome_parity_given(s) for s in range(1 << table.n))
    )


def strategy_to_json(strategy: QuantumStrategy) -> dict:
    amps = strategy.state.amplitudes
    ghz = ghz_state(strategy.n).amplitudes if strategy.n >= 2 else None
    state = (
        "ghz"
        if ghz is not None and np.allclose(amps, ghz)
        else [[float(a.real), float(a.imag)] for a in amps]
    )
    return {
        "format": 1,
        "n": strategy.n,
        "state": state,
        "observables": [
            {"theta0": o.theta0, "phi0": o.phi0, "theta1": o.theta1, "phi1": o.phi1}
            for o in strategy.observables
        ],
    }


def strategy_from_json(data: dict) -> QuantumStrategy:
    if not isinstance(data, dict):
        raise ValueError("strategy JSON must be an object")
    if data.get("format", 1) != 1:
        raise ValueError("unsupported format version")
    try:
        n = int(data["n"])
        raw_state = data["state"]
        if raw_state == "ghz":
            state = ghz_state(n)
        else:
            state = PureState(n, np.array([complex(re, im) for re, im in raw_state]))
        observables = tuple(
            ObservablePair(
                float(o["theta0"]), float(o["phi0"]), float(o["theta1"]), float(o["phi1"])
            )
            for o in data["observables"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed strategy JSON: {exc}") from exc
    return QuantumStrategy(state, observables)
