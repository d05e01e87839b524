"""Material parameters -> squeezed-magnon model -> Hamiltonians.

Energies in :class:`MaterialParams` and :func:`bare_coupling` are in meV.
Model Hamiltonians are unit-agnostic; the CLI measures them in units of the
qubit splitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import hilbert
from .errors import DomainError, ParameterError
from .hilbert import HilbertSpace

MEV_TO_GHZ = 241.799  # cyclic frequency, E/h
LATTICE_FACTOR_SC = 2.0  # c_l for a simple cubic lattice


@dataclass(frozen=True)
class MaterialParams:
    """Ferromagnet parameters (energies in meV, lattice constant in arbitrary length)."""

    J: float
    S: float
    K_x: float = 0.0
    K_y: float = 0.0
    K_z: float = 0.0
    zeeman: float = 0.0  # |gamma| mu0 H0
    lattice_constant: float = 1.0
    N_F: int = 1

    def __post_init__(self):
        if not self.J > 0:
            raise ParameterError(f"exchange J must be positive, got {self.J}")
        if not self.S > 0:
            raise ParameterError(f"spin S must be positive, got {self.S}")
        if self.N_F < 1:
            raise ParameterError(f"N_F must be >= 1, got {self.N_F}")

    @property
    def c_l(self) -> float:
        return LATTICE_FACTOR_SC


@dataclass(frozen=True)
class SqueezeParams:
    A: float
    B: float
    omega0: float
    r: float
    cosh_r: float
    sinh_r: float


@dataclass(frozen=True)
class CouplingParams:
    J_int: float
    N_int: int
    psi2: float
    S: float
    N_F: int
    g: float
    delta_omega_q: float
    g_R: float | None = None
    g_CR: float | None = None


@dataclass(frozen=True)
class QubitParams:
    omega_q: float
    g_R: float
    g_CR: float


@dataclass(frozen=True)
class ModelParams:
    """One squeezed-magnon mode of energy ``omega0`` coupled to 1-3 qubits."""

    omega0: float
    qubits: tuple[QubitParams, ...]
    n_max: int = 10

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if not 1 <= len(self.qubits) <= 3:
            raise ParameterError(f"need 1-3 qubits, got {len(self.qubits)}")
        values = [self.omega0] + [v for q in self.qubits for v in (q.omega_q, q.g_R, q.g_CR)]
        if not all(math.isfinite(v) for v in values):
            raise ParameterError("all energies must be finite")
        if any(q.omega_q <= 0 for q in self.qubits):
            raise ParameterError("qubit splittings must be positive")
        HilbertSpace(self.n_max, len(self.qubits))

    @classmethod
    def identical(cls, omega0, g_R, g_CR, omega_q=1.0, n_qubits=3, n_max=10):
        return cls(omega0, tuple(QubitParams(omega_q, g_R, g_CR) for _ in range(n_qubits)), n_max)

    @property
    def space(self) -> HilbertSpace:
        return HilbertSpace(self.n_max, len(self.qubits))

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def with_omega0(self, omega0: float) -> "ModelParams":
        return replace(self, omega0=omega0)

    def with_n_max(self, n_max: int) -> "ModelParams":
        return replace(self, n_max=n_max)

    def permuted(self, order: Sequence[int]) -> "ModelParams":
        """Relabel qubits; ``order`` lists 0-based old indices."""
        return replace(self, qubits=tuple(self.qubits[i] for i in order))


def anisotropy_to_AB(m: MaterialParams) -> tuple[float, float]:
    A = m.zeeman + m.K_x * m.S + m.K_y * m.S - 2.0 * m.K_z * m.S
    B = m.S * (m.K_x - m.K_y) / 2.0
    return A, B


def magnon_dispersion(m: MaterialParams, k) -> tuple[float, float]:
    """(A_k, B_k) for a simple cubic lattice; ``k`` is a 3-vector."""
    kx, ky, kz = (float(v) for v in k)
    a = m.lattice_constant
    A0, B = anisotropy_to_AB(m)
    exchange = 4.0 * m.J * m.S * (3.0 - (math.cos(kx * a) + math.cos(ky * a) + math.cos(kz * a)))
    return A0 + exchange, B


def check_single_mode(m: MaterialParams, L: int, g_R: float, g_CR: float,
                      factor: float = 5.0) -> tuple[float, bool]:
    """Gap to the first standing-wave mode of an ``L``-site film and whether
    it exceeds ``factor * max(|g_R|, |g_CR|)``."""
    if L < 2:
        raise ParameterError(f"L must be >= 2, got {L}")
    k1 = (math.pi / (L * m.lattice_constant), 0.0, 0.0)
    spacing = magnon_dispersion(m, k1)[0] - magnon_dispersion(m, (0, 0, 0))[0]
    return spacing, spacing > factor * max(abs(g_R), abs(g_CR))


def bogoliubov(A: float, B: float) -> SqueezeParams:
    """Diagonalize A a^dag a + B (a^2 + a^dag^2) into omega0 alpha^dag alpha."""
    if not (math.isfinite(A) and math.isfinite(B)):
        raise DomainError(f"non-finite magnon parameters A={A}, B={B}")
    disc = A * A - 4.0 * B * B
    if not disc > 0:
        raise DomainError(f"unstable magnon: need A^2 > 4B^2 (omega0 > 0), got A={A}, B={B}")
    omega0 = math.sqrt(disc)
    stab = (A + omega0) ** 2 - 4.0 * B * B
    if not stab > 0:
        raise DomainError(f"unstable magnon: need (A + omega0)^2 > 4B^2, got A={A}, B={B}")
    sinh_r = -2.0 * B / math.sqrt(stab)
    cosh_r = math.sqrt(1.0 + sinh_r * sinh_r)
    return SqueezeParams(A, B, omega0, math.asinh(sinh_r), cosh_r, sinh_r)


def bare_coupling(J_int: float, N_int: int, psi2: float, S: float, N_F: int) -> CouplingParams:
    """Interfacial-exchange coupling g and the qubit-splitting shift it induces."""
    if J_int < 0 or N_int < 1 or not 0 < psi2 <= 1 or S <= 0 or N_F < 1:
        raise ParameterError(
            f"need J_int >= 0, N_int >= 1, 0 < psi2 <= 1, S > 0, N_F >= 1; "
            f"got {J_int}, {N_int}, {psi2}, {S}, {N_F}")
    g = J_int * N_int * psi2 * math.sqrt(S / (2.0 * N_F))
    # -S J_int N_int psi2 / 2 * sigma_z shifts omega_q by twice the prefactor
    delta = -S * J_int * N_int * psi2
    return CouplingParams(J_int, N_int, psi2, S, N_F, g, delta + 0.0)


def dressed_couplings(g: float, sq: SqueezeParams) -> tuple[float, float]:
    return g * sq.cosh_r, g * sq.sinh_r


def dress(c: CouplingParams, sq: SqueezeParams) -> CouplingParams:
    g_R, g_CR = dressed_couplings(c.g, sq)
    return replace(c, g_R=g_R, g_CR=g_CR)


@dataclass(frozen=True)
class InterfaceAssumptions:
    """Geometry used to turn 'N_int sites, qubit in n monolayers' into psi2, N_F.

    The qubit orbital is spread evenly over ``monolayers`` layers of
    ``N_int`` sites, so its interface-averaged weight is 1/(monolayers N_int);
    the film is equally thin, so N_F = monolayers N_int.
    """

    J_int: float = 10.0  # meV
    N_int: int = 100
    monolayers: int = 5
    S: float = 0.5
    notes: tuple[str, ...] = field(default=(
        "qubit wavefunction uniform over monolayers * N_int sites",
        "ferromagnet as thick as the qubit layer: N_F = monolayers * N_int",
        "S = 1/2",
        "quoted GHz figure read as angular frequency (2 pi x cyclic)",
    ))

    @property
    def psi2(self) -> float:
        return 1.0 / (self.monolayers * self.N_int)

    @property
    def N_F(self) -> int:
        return self.monolayers * self.N_int


def interface_estimate(assume: InterfaceAssumptions = InterfaceAssumptions()) -> dict:
    c = bare_coupling(assume.J_int, assume.N_int, assume.psi2, assume.S, assume.N_F)
    g_ghz = c.g * MEV_TO_GHZ
    return {
        "g_meV": c.g,
        "g_over_J_int": c.g / assume.J_int,
        "g_GHz": g_ghz,
        "g_angular_GHz": 2.0 * math.pi * g_ghz,
        "reference_g_over_J_int": 0.005,
        "reference_g_GHz": 80.0,
        "assumptions": list(assume.notes),
    }


def build_hamiltonian(p: ModelParams, space: HilbertSpace | None = None) -> np.ndarray:
    """Multi-qubit anisotropic Rabi Hamiltonian in the squeezed-magnon basis."""
    space = p.space if space is None else space
    if space.n_qubits != p.n_qubits or space.n_max != p.n_max:
        raise ParameterError(
            f"space ({space.n_max}, {space.n_qubits}) does not match params ({p.n_max}, {p.n_qubits})")
    a = hilbert.boson_annihilation(space)
    ad = a.conj().T
    H = p.omega0 * (ad @ a)
    for n, q in enumerate(p.qubits, start=1):
        sp = hilbert.qubit_operator(space, n, "s+")
        sm = hilbert.qubit_operator(space, n, "s-")
        H += 0.5 * q.omega_q * hilbert.qubit_operator(space, n, "sz")
        H += q.g_R * (ad @ sm + a @ sp)
        H += q.g_CR * (ad @ sp + a @ sm)
    # remove rounding asymmetry so eigh sees an exactly Hermitian matrix
    return 0.5 * (H + H.conj().T)


def excitation_number(space: HilbertSpace) -> np.ndarray:
    """alpha^dag alpha + sum_n sigma+^n sigma-^n."""
    N = hilbert.boson_number(space)
    for n in range(1, space.n_qubits + 1):
        N = N + hilbert.qubit_operator(space, n, "s+") @ hilbert.qubit_operator(space, n, "s-")
    return N


def build_lab_frame_mode(space: HilbertSpace, A: float, B: float) -> np.ndarray:
    """A a^dag a + B (a^2 + a^dag^2) on the truncated lab-frame Fock space."""
    bogoliubov(A, B)
    a = hilbert.boson_annihilation(space)
    ad = a.conj().T
    return A * (ad @ a) + B * (a @ a + ad @ ad)
