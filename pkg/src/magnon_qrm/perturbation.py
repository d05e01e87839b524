"""Perturbative effective coupling between |1,ggg> and |0,eee>.

Conventions: the effective coupling is the Rayleigh-Schroedinger amplitude
built from denominators ``E_initial - E_virtual`` with all bare matrix
elements taken positive, so ``g_eff > 0`` for positive ``g_R``, ``g_CR`` at
resonance. Every amplitude is odd in the counter-rotating couplings.

Two independent routes are provided:

* closed forms and explicit permutation sums over diagram families;
* :func:`path_sum`, which enumerates all virtual paths numerically on the
  bare basis (matrix products), including the second-order renormalization
  of the initial-state energy at fifth order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParameterError, SingularityError

_PERMS = tuple(itertools.permutations(range(3)))


@dataclass(frozen=True)
class PertInputs:
    omega0: float
    omega_q: tuple[float, float, float]
    g_R: tuple[float, float, float]
    g_CR: tuple[float, float, float]

    def __post_init__(self):
        for name in ("omega_q", "g_R", "g_CR"):
            v = tuple(float(x) for x in getattr(self, name))
            if len(v) != 3:
                raise ParameterError(f"{name} needs 3 entries, got {len(v)}")
            object.__setattr__(self, name, v)
        if any(w <= 0 for w in self.omega_q):
            raise ParameterError("qubit splittings must be positive")

    @classmethod
    def identical(cls, omega0, omega_q, g_R, g_CR):
        return cls(omega0, (omega_q,) * 3, (g_R,) * 3, (g_CR,) * 3)

    @property
    def is_identical(self) -> bool:
        return len(set(self.omega_q)) == 1 and len(set(self.g_R)) == 1 and len(set(self.g_CR)) == 1

    @property
    def at_resonance(self) -> bool:
        return math.isclose(self.omega0, sum(self.omega_q), rel_tol=1e-12)


@dataclass
class PertResult:
    value: float
    terms: dict[str, float] = field(default_factory=dict)
    omega0_crossing: float | None = None


def _inv(x: float, what: str) -> float:
    if x == 0.0:
        raise SingularityError(f"vanishing energy denominator ({what})")
    return 1.0 / x


def geff3_terms(inp: PertInputs) -> list[float]:
    """Individual summands of the general third-order permutation sum."""
    w0, wq, gR, gCR = inp.omega0, inp.omega_q, inp.g_R, inp.g_CR
    out = []
    for i, j, k in _PERMS:
        pair = _inv(-wq[i] - wq[j], f"-omega_q{i+1} - omega_q{j+1}")
        out.append(2.0 * gCR[i] * gR[j] * gR[k] * _inv(-w0 - wq[i], f"-omega0 - omega_q{i+1}") * pair)
        out.append(gR[i] * gCR[j] * gR[k] * _inv(w0 - wq[i], f"omega0 - omega_q{i+1}") * pair)
    return out


def geff3_general(inp: PertInputs) -> float:
    return math.fsum(geff3_terms(inp))


def geff3_identical(omega0: float, omega_q: float, g_R: float, g_CR: float) -> float:
    """Third order for identical qubits; vanishes at omega0 = 3 omega_q."""
    denom = omega_q * (omega0 - omega_q) * (omega0 + omega_q)
    if denom == 0.0:
        raise SingularityError("vanishing energy denominator (omega0 = +-omega_q)")
    return 3.0 * g_R**2 * g_CR * (omega0 - 3.0 * omega_q) / denom


def geff5_identical_resonance(g_R: float, g_CR: float, omega_q: float) -> float:
    return -9.0 * (3.0 * g_CR**3 * g_R**2 - 8.0 * g_CR * g_R**4) / (32.0 * omega_q**4)


def crossing_shift(g_R: float, g_CR: float, omega_q: float) -> float:
    """omega0 at which |1,ggg> and |0,eee> cross after second-order level shifts."""
    return 3.0 * omega_q + 3.0 * g_CR**2 / (2.0 * omega_q) - 3.0 * g_R**2 / omega_q


def geff3_shifted(g_R: float, g_CR: float, omega_q: float) -> float:
    """Third order evaluated at :func:`crossing_shift`, truncated at fifth order."""
    return 9.0 * (g_CR**3 * g_R**2 - 2.0 * g_CR * g_R**4) / (16.0 * omega_q**4)


def geff_total_resonance(g_R: float, g_CR: float, omega_q: float) -> float:
    return geff5_identical_resonance(g_R, g_CR, omega_q) + geff3_shifted(g_R, g_CR, omega_q)


def _third_order_squared_first(w0, wq, gR, gCR, j, k, l) -> float:
    # third-order path j,k,l with its first denominator squared
    pair = _inv(-wq[j] - wq[k], f"-omega_q{j+1} - omega_q{k+1}")
    cr_first = 2.0 * gCR[j] * gR[k] * gR[l] * _inv(-w0 - wq[j], f"-omega0 - omega_q{j+1}") ** 2
    r_first = gR[j] * gCR[k] * gR[l] * _inv(w0 - wq[j], f"omega0 - omega_q{j+1}") ** 2
    return (cr_first + r_first) * pair


def geff5_diagrams(inp: PertInputs, experimental: bool = False) -> dict[str, float]:
    """Fifth-order diagram families ``5a+5c``, ``5b+5d``, ``5e``, ``5f``, ``5g``.

    Families a-d carry the energy renormalization of the initial state and
    enter with a minus sign (Brillouin-Wigner expansion). Loop-on-second-vertex
    pairs are omitted; they cancel for identical qubits at resonance only, so
    anything else requires ``experimental=True``.
    """
    if not experimental and not (inp.is_identical and inp.at_resonance):
        raise ParameterError(
            "diagram families are exact only for identical qubits at omega0 = 3 omega_q; "
            "pass experimental=True to evaluate elsewhere")
    w0, wq, gR, gCR = inp.omega0, inp.omega_q, inp.g_R, inp.g_CR
    total_q = sum(wq)
    ac = bd = e = f = g = 0.0
    for i in range(3):
        loop_cr = 2.0 * gCR[i] ** 2 * _inv(-w0 - wq[i], f"-omega0 - omega_q{i+1}")
        loop_r = gR[i] ** 2 * _inv(w0 - wq[i], f"omega0 - omega_q{i+1}")
        for j, k, l in _PERMS:
            t = _third_order_squared_first(w0, wq, gR, gCR, j, k, l)
            ac -= loop_cr * t
            bd -= loop_r * t
    d_all = _inv(-w0 - total_q, "-omega0 - sum omega_q")
    d_two = _inv(-2.0 * w0, "-2 omega0")
    for i, j, k in _PERMS:
        d1 = _inv(-w0 - wq[i], f"-omega0 - omega_q{i+1}")
        d2 = _inv(-2.0 * w0 - wq[i] - wq[j], f"-2 omega0 - omega_q{i+1} - omega_q{j+1}")
        for l in range(3):
            e += (6.0 * gCR[i] * gCR[j] * gR[k] * gCR[l] * gR[l]
                  * d1 * d2 * d_all * _inv(wq[l] - total_q, f"omega_q{l+1} - sum omega_q"))
        for l in (i, j):
            d3 = _inv(-w0 + wq[l] + wq[k] - total_q, "-omega0 + omega_ql + omega_qk - sum omega_q")
            for m in (l, k):
                for n in (l, k):
                    if n == m:
                        continue
                    f += (6.0 * gCR[i] * gCR[j] * gCR[l] * gR[m] * gR[n]
                          * d1 * d2 * d3 * _inv(wq[n] - total_q, f"omega_q{n+1} - sum omega_q"))
    for i in range(3):
        d1 = _inv(-w0 - wq[i], f"-omega0 - omega_q{i+1}")
        for j, k, l in _PERMS:
            g += (6.0 * gCR[i] * gR[i] * gR[j] * gR[k] * gR[l] * d1 * d_two
                  * _inv(-w0 - wq[j], f"-omega0 - omega_q{j+1}")
                  * _inv(-wq[j] - wq[k], f"-omega_q{j+1} - omega_q{k+1}"))
    return {"5a+5c": ac, "5b+5d": bd, "5e": e, "5f": f, "5g": g}


def breakdown(g_R: float, g_CR: float, omega_q: float = 1.0,
              omega0: float | None = None) -> PertResult:
    """Everything the oracle knows for identical qubits, as one record."""
    w0 = 3.0 * omega_q if omega0 is None else omega0
    fams = geff5_diagrams(PertInputs.identical(3.0 * omega_q, omega_q, g_R, g_CR))
    terms = {
        "g3": geff3_identical(w0, omega_q, g_R, g_CR),
        "g5": geff5_identical_resonance(g_R, g_CR, omega_q),
        **{f"g5_{k.replace('+', '_')}": v for k, v in fams.items()},
        "g3_shifted": geff3_shifted(g_R, g_CR, omega_q),
    }
    return PertResult(
        value=terms["g5"] + terms["g3_shifted"],
        terms=terms,
        omega0_crossing=crossing_shift(g_R, g_CR, omega_q),
    )


# --- independent route: explicit enumeration on the bare basis -------------

def _bare_problem(inp: PertInputs, n_max: int):
    states = [(n, bits) for n in range(n_max) for bits in itertools.product((0, 1), repeat=3)]
    index = {s: i for i, s in enumerate(states)}
    energy = np.array([inp.omega0 * n + sum(0.5 * w * (1 if b else -1) for w, b in zip(inp.omega_q, bits))
                       for n, bits in states])
    V = np.zeros((len(states), len(states)))
    for (n, bits), col in index.items():
        for q in range(3):
            flipped = list(bits)
            flipped[q] ^= 1
            target = tuple(flipped)
            raising = bits[q] == 0
            # raising: a s+ (rotating), a^dag s+ (counter-rotating)
            # lowering: a^dag s- (rotating), a s- (counter-rotating)
            down = inp.g_R[q] if raising else inp.g_CR[q]
            up = inp.g_CR[q] if raising else inp.g_R[q]
            if n > 0:
                V[index[(n - 1, target)], col] += down * math.sqrt(n)
            if n + 1 < n_max:
                V[index[(n + 1, target)], col] += up * math.sqrt(n + 1)
    return energy, V, index[(1, (0, 0, 0))], index[(0, (1, 1, 1))]


def path_sum(inp: PertInputs, order: int) -> float:
    """Brute-force effective coupling at ``order`` 3 or 5.

    Sums every chain V G V ... G V from |1,ggg> to |0,eee> with
    G = Q / (E_initial - H0), Q excluding both model states. At fifth order
    the Brillouin-Wigner term -E2 (V G^2 V G V + V G V G^2 V) is added, E2
    being the second-order shift of |1,ggg>.
    """
    if order not in (3, 5):
        raise ParameterError(f"order must be 3 or 5, got {order}")
    energy, V, i, f = _bare_problem(inp, n_max=order + 2)
    delta = energy[i] - energy
    keep = np.ones_like(delta, dtype=bool)
    keep[[i, f]] = False
    if np.any(delta[keep] == 0.0):
        raise SingularityError("a virtual state is degenerate with |1,ggg>")
    G = np.diag(np.where(keep, 1.0 / np.where(keep, delta, 1.0), 0.0))
    GV = G @ V
    if order == 3:
        return float((V @ GV @ GV)[f, i])
    five = (V @ GV @ GV @ GV @ GV)[f, i]
    E2 = (V @ GV)[i, i]
    renorm = (V @ GV @ G @ GV)[f, i] + (V @ G @ GV @ GV)[f, i]
    return float(five - E2 * renorm)
