"""Eigenvalue sweeps, crossing/anticrossing detection and g_eff extraction."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import perturbation as pert
from .errors import (AmbiguityError, ConvergenceError, ModelError, NotFoundError,
                     ParameterError)
from .model import ModelParams, build_hamiltonian

CROSSING_THRESHOLD = 1e-8
CONVERGENCE_RTOL = 1e-3
GOLDEN_RTOL = 1e-10
RABI_REFS = ("1,ggg", "0,eee")

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class SpectrumSweep:
    omega0_grid: np.ndarray
    levels: np.ndarray  # shape (n_points, n_levels), ascending per row
    params: ModelParams

    def to_csv(self) -> str:
        header = "omega0," + ",".join(f"E_{i}" for i in range(self.levels.shape[1]))
        rows = [header]
        for w, row in zip(self.omega0_grid, self.levels):
            rows.append(",".join(repr(float(v)) for v in (w, *row)))
        return "\n".join(rows) + "\n"


@dataclass
class GapFeature:
    omega0_star: float
    min_gap: float
    level_pair: tuple[int, int]
    kind: str  # "crossing" | "anticrossing"

    def to_dict(self) -> dict:
        return {"omega0_star": self.omega0_star, "min_gap": self.min_gap,
                "kind": self.kind, "level_pair": list(self.level_pair)}


@dataclass
class FitResult:
    c1: float
    c2: float
    residual: float
    points: list[tuple[float, float, float]] = field(default_factory=list)  # (g_R, g_CR, geff)
    skipped: list[tuple[float, float, str]] = field(default_factory=list)


def eigvalsh_levels(p: ModelParams, n_levels: int | None = None) -> np.ndarray:
    E = np.linalg.eigvalsh(build_hamiltonian(p))
    return E if n_levels is None else E[:n_levels]


def check_converged(coarse, fine, rtol: float = CONVERGENCE_RTOL, what: str = "result") -> None:
    """Raise :class:`ConvergenceError` unless ``fine`` matches ``coarse`` to ``rtol``.

    The comparison is relative to the largest magnitude in ``fine``.
    """
    coarse = np.asarray(coarse, dtype=float)
    fine = np.asarray(fine, dtype=float)
    scale = max(float(np.max(np.abs(fine), initial=0.0)), 1e-300)
    err = float(np.max(np.abs(coarse - fine), initial=0.0))
    if err > rtol * scale and err > 1e-12:
        raise ConvergenceError(
            f"{what} changed by {err:.3e} (relative {err / scale:.3e}) when n_max was doubled; "
            f"increase n_max")


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def sweep(p: ModelParams, omega0_range: tuple[float, float], n_points: int, n_levels: int,
          threads: int = 1, check: bool = True) -> SpectrumSweep:
    """Lowest ``n_levels`` eigenvalues on a uniform omega0 grid."""
    lo, hi = omega0_range
    if not lo < hi:
        raise ParameterError(f"need lo < hi, got ({lo}, {hi})")
    if n_points < 2:
        raise ParameterError(f"n_points must be >= 2, got {n_points}")
    if not 1 <= n_levels <= p.space.dim:
        raise ParameterError(f"n_levels must be in 1..{p.space.dim}, got {n_levels}")
    grid = np.linspace(lo, hi, n_points)
    levels = np.array(_map(lambda w: eigvalsh_levels(p.with_omega0(w), n_levels), grid, threads))
    if check:
        p2 = p.with_n_max(2 * p.n_max)
        fine = np.array(_map(lambda w: eigvalsh_levels(p2.with_omega0(w), n_levels), grid, threads))
        check_converged(levels, fine, what="spectrum")
    return SpectrumSweep(grid, levels, p)


def _reference_vectors(p: ModelParams, refs) -> list[np.ndarray]:
    space = p.space
    vecs = []
    for ref in refs:
        if isinstance(ref, str):
            ref = (ref,)
        if isinstance(ref, np.ndarray):
            v = np.asarray(ref, dtype=complex)
            if v.shape != (space.dim,):
                raise ParameterError(f"reference vector must have length {space.dim}")
        else:
            v = sum(space.basis_state(label) for label in ref)
        vecs.append(v / np.linalg.norm(v))
    if len(vecs) != 2:
        raise ParameterError("need exactly two reference states")
    return vecs


class _PairTracker:
    """Energies of the two eigenvectors carrying most weight on two reference states."""

    def __init__(self, p: ModelParams, refs=None, level_pair=None):
        self.p = p
        self.level_pair = level_pair
        self.refs = None if level_pair is not None else _reference_vectors(p, refs or RABI_REFS)

    def __call__(self, omega0: float):
        E, V = np.linalg.eigh(build_hamiltonian(self.p.with_omega0(omega0)))
        if self.level_pair is not None:
            i, j = self.level_pair
            return E[j] - E[i], E[j] - E[i], (i, j), E, V
        w0 = np.abs(self.refs[0].conj() @ V) ** 2
        w1 = np.abs(self.refs[1].conj() @ V) ** 2
        top = np.sort(np.argsort(w0 + w1, kind="stable")[-2:])
        a, b = top
        # signed difference: energy of the more ref-0-like state minus the other
        if w0[a] - w1[a] >= w0[b] - w1[b]:
            signed = E[a] - E[b]
        else:
            signed = E[b] - E[a]
        return abs(E[b] - E[a]), signed, (int(a), int(b)), E, V


def _golden_min(f, a: float, b: float, rtol: float):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rtol * max(abs(a), abs(b), 1e-300):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def find_gap(p: ModelParams, window: tuple[float, float], refs=None, level_pair=None,
             threshold: float = CROSSING_THRESHOLD, n_scan: int = 41,
             check: bool = True) -> GapFeature:
    """Locate and classify the intersection of one pair of levels inside ``window``.

    The pair is chosen either by overlap with two reference states ``refs``
    (labels like ``"1,ggg"``, tuples of labels for equal superpositions, or
    vectors) or by fixed sorted indices ``level_pair``. Defaults to the
    |1,ggg> / |0,eee> pair.
    """
    lo, hi = window
    if not lo < hi:
        raise ParameterError(f"need lo < hi, got ({lo}, {hi})")
    track = _PairTracker(p, refs, level_pair)
    grid = np.linspace(lo, hi, n_scan)
    scan = [track(w) for w in grid]
    gaps = np.array([s[0] for s in scan])
    if level_pair is None:
        signed = np.array([s[1] for s in scan])
        changes = [k for k in range(n_scan - 1) if np.sign(signed[k]) != np.sign(signed[k + 1])
                   or signed[k] == 0.0]
        brackets = [(grid[k], grid[k + 1]) for k in changes]
    else:
        minima = [k for k in range(1, n_scan - 1) if gaps[k] <= gaps[k - 1] and gaps[k] <= gaps[k + 1]]
        brackets = [(grid[k - 1], grid[k + 1]) for k in minima]
    if not brackets:
        raise NotFoundError(f"no intersection of the selected levels in [{lo}, {hi}]")
    if len(brackets) > 1:
        raise AmbiguityError(
            f"{len(brackets)} intersections in [{lo}, {hi}] near "
            + ", ".join(f"{0.5 * (x + y):.6g}" for x, y in brackets))
    a, b = brackets[0]
    w_star, gap = _golden_min(lambda w: track(w)[0], a, b, GOLDEN_RTOL)
    pair = track(w_star)[2]
    kind = "crossing" if gap < threshold else "anticrossing"
    if check:
        fine = _PairTracker(p.with_n_max(2 * p.n_max), refs, level_pair)(w_star)[0]
        fine_kind = "crossing" if fine < threshold else "anticrossing"
        if fine_kind != kind:
            raise ConvergenceError("gap classification changed when n_max was doubled")
        if kind == "anticrossing":
            check_converged(gap, fine, what="minimal gap")
    return GapFeature(float(w_star), float(gap), pair, kind)


def _perturbative_center(p: ModelParams) -> float:
    q = p.qubits
    wq = sum(x.omega_q for x in q) / 3.0
    gR = sum(x.g_R for x in q) / 3.0
    gCR = sum(x.g_CR for x in q) / 3.0
    return sum(x.omega_q for x in q) + pert.crossing_shift(gR, gCR, wq) - 3.0 * wq


def extract_geff(p: ModelParams, half_width: float | None = None,
                 check: bool = True) -> tuple[float, float]:
    """Half the minimal |1,ggg>/|0,eee> gap near omega0 = sum(omega_q)."""
    if p.n_qubits != 3:
        raise ParameterError("g_eff extraction needs exactly 3 qubits")
    if all(q.g_CR == 0 for q in p.qubits):
        raise ParameterError("g_eff extraction needs a nonzero counter-rotating coupling")
    wq = min(q.omega_q for q in p.qubits)
    hw = 0.05 * wq if half_width is None else half_width
    center = _perturbative_center(p)
    feat = find_gap(p, (center - hw, center + hw), refs=RABI_REFS, check=check)
    return 0.5 * feat.min_gap, feat.omega0_star


def rabi_pair(p: ModelParams):
    """Eigen-data of the two |1,ggg>/|0,eee>-like levels at ``p.omega0``.

    Returns ``(geff_signed, E, V, (a, b))``; the sign follows the effective
    two-level coupling in the bare basis (positive when the upper level is the
    in-phase combination).
    """
    _, _, (a, b), E, V = _PairTracker(p, RABI_REFS)(p.omega0)
    space = p.space
    i, f = space.index(1, "ggg"), space.index(0, "eee")
    upper = V[:, b]
    sign = np.sign(np.real(np.conj(upper[i]) * upper[f])) or 1.0
    return float(sign * 0.5 * (E[b] - E[a])), E, V, (a, b)


def fit_geff_surface(p_base: ModelParams, gR_grid: Sequence[float], gCR_grid: Sequence[float],
                     threads: int = 1, check: bool = False) -> FitResult:
    """Least-squares fit of g_eff to (c1 g_CR g_R^4 + c2 g_CR^3 g_R^2) / omega_q^4."""
    wq = p_base.qubits[0].omega_q
    if max(abs(v) for v in (*gR_grid, *gCR_grid)) > 0.15 * wq:
        raise ParameterError("fit grid must stay within |g| <= 0.15 omega_q")
    combos = [(gR, gCR) for gR in gR_grid for gCR in gCR_grid]

    def one(pair):
        gR, gCR = pair
        p = ModelParams(p_base.omega0, tuple(type(q)(q.omega_q, gR, gCR) for q in p_base.qubits),
                        p_base.n_max)
        try:
            return extract_geff(p, check=check)[0], None
        except ModelError as exc:
            return None, str(exc)

    results = _map(one, combos, threads)
    points, skipped = [], []
    for (gR, gCR), (geff, err) in zip(combos, results):
        if geff is None:
            skipped.append((gR, gCR, err))
        else:
            points.append((gR, gCR, geff))
    if len(points) < 6:
        raise ParameterError(f"only {len(points)} valid grid points; the fit needs at least 6")
    X = np.array([[gCR * gR**4, gCR**3 * gR**2] for gR, gCR, _ in points]) / wq**4
    y = np.array([g for _, _, g in points])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    residual = float(np.linalg.norm(X @ coef - y) / np.linalg.norm(y))
    return FitResult(float(coef[0]), float(coef[1]), residual, points, skipped)
