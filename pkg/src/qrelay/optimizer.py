"""Derivative-free search over rank-one measurements, as an independent check
on the closed-form optima.

Candidate measurements are parameterized by weights and Bloch directions:
element k is w_k [[1 + cos th_k, exp(-i ph_k) sin th_k],
                  [exp(i ph_k) sin th_k, 1 - cos th_k]],
positive semidefinite by construction. Completeness reduces to three real
constraints: the weights sum to 1 and the weighted direction vectors cancel.

Feasibility is maintained by repair rather than by penalty: every proposal is
projected back onto the constraint set with damped Gauss-Newton steps of
minimum norm, and only repaired candidates are scored. A penalty rate is kept
as a safety net charging any residual left beyond the feasibility tolerance,
so unrepaired drift can never look profitable.

The local search is a multi-start random walk with a decaying step; all
restarts advance in lockstep as rows of one batch so the inner loop stays in
vectorized numpy. Moves are accepted on strict objective improvement; on
near-ties the tighter weight concentration (larger sum of squared weights)
wins, which deduplicates elements pointing the same way without ever trading
away objective value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ensembles import SymmetricEnsemble
from .errors import DomainError, OptimizationError, RepairError
from .fidelity import FidelityReport, Strategy, fidelity_of_strategy, optimal_retransmission
from .measurements import Assignment, Pom, error_probability, greedy_assignment
from .qubit import Hermitian2
from .tolerances import TOL, Tolerances

STEP_DECAY = 0.995
REPAIR_TARGET = 1e-12
REPAIR_ACCEPT = 1e-10
SEARCH_REPAIR_ROUNDS = 12
START_ATTEMPTS = 32
SPOT_EVERY = 100
STALL_LIMIT = 400
STALL_FLOOR = 600
RESTART_TIE = 1e-7


@dataclass(frozen=True, eq=False)
class ParamPom:
    """Rank-one measurement candidate: one (weight, colatitude, longitude) per element.

    Arrays are copied in and frozen. Feasible candidates satisfy
    sum(w) = 1, sum(w cos th) = 0 and sum(w exp(i ph) sin th) = 0, which is
    exactly completeness of the elements this parameterization generates.
    """

    weights: np.ndarray
    colatitudes: np.ndarray
    longitudes: np.ndarray

    def __post_init__(self) -> None:
        for name in ("weights", "colatitudes", "longitudes"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise DomainError(f"{name} must be one-dimensional")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (self.weights.size == self.colatitudes.size == self.longitudes.size):
            raise DomainError("weights, colatitudes and longitudes must have equal length")
        if self.weights.size == 0:
            raise DomainError("a candidate needs at least one element")

    @property
    def n(self) -> int:
        return self.weights.size


def constraint_residuals(p: ParamPom) -> tuple[float, float, float]:
    """Residuals of (weight normalization, polar balance, azimuthal balance)."""
    w = p.weights
    st = np.sin(p.colatitudes)
    rx = w @ (st * np.cos(p.longitudes))
    ry = w @ (st * np.sin(p.longitudes))
    return (abs(float(w.sum()) - 1.0),
            abs(float(w @ np.cos(p.colatitudes))),
            math.hypot(float(rx), float(ry)))


def is_feasible(p: ParamPom, tol: Tolerances = TOL) -> bool:
    return max(constraint_residuals(p)) <= tol.feasibility


def to_pom(p: ParamPom, tol: Tolerances = TOL) -> Pom:
    """Realize a feasible candidate as a measurement, labels 0..n-1."""
    if not is_feasible(p, tol):
        raise DomainError(
            "candidate violates the completeness constraints "
            f"(residuals {constraint_residuals(p)})")
    if float(p.weights.min()) < -tol.psd:
        raise DomainError(f"negative weight {float(p.weights.min())!r}")
    w = np.clip(p.weights, 0.0, None)
    ct = np.cos(p.colatitudes)
    st = np.sin(p.colatitudes)
    off = st * np.exp(-1j * p.longitudes)
    elements = tuple(
        Hermitian2(w[k] * (1.0 + ct[k]), w[k] * (1.0 - ct[k]), w[k] * off[k])
        for k in range(p.n))
    return Pom(elements=elements, labels=tuple(range(p.n)))


def _max_residual(w: np.ndarray, th: np.ndarray, ph: np.ndarray) -> float:
    st = np.sin(th)
    rx = float(w @ (st * np.cos(ph)))
    ry = float(w @ (st * np.sin(ph)))
    return max(abs(float(w.sum()) - 1.0),
               abs(float(w @ np.cos(th))),
               math.hypot(rx, ry))


def _canonical(w: np.ndarray, th: np.ndarray, ph: np.ndarray):
    """Fold colatitudes into [0, pi] and longitudes into [0, 2*pi), same directions."""
    th = np.mod(th, 2.0 * math.pi)
    flip = th > math.pi
    if flip.any():
        th = th.copy()
        ph = ph.copy()
        th[flip] = 2.0 * math.pi - th[flip]
        ph[flip] += math.pi
    return w, th, np.mod(ph, 2.0 * math.pi)


def _repair_arrays(w: np.ndarray, th: np.ndarray, ph: np.ndarray,
                   fast_tol: float, max_rounds: int = 100):
    """Project one candidate onto the constraint set; None when repair fails.

    A point already within fast_tol is returned untouched. Otherwise weights
    are clipped and renormalized and damped Gauss-Newton steps of minimum norm
    drive the direction-balance residuals toward REPAIR_TARGET; the weight sum
    is restored exactly after every step. Success still requires no more than
    the package feasibility tolerance.
    """
    resid = _max_residual(w, th, ph)
    if resid <= fast_tol:
        return w, th, ph, resid
    w = np.clip(w, 0.0, None)
    tot = float(w.sum())
    if tot <= 0.0:
        return None
    w = w / tot
    n = w.size
    jac = np.empty((3, 3 * n))
    for _ in range(max_rounds):
        st = np.sin(th)
        ct = np.cos(th)
        cp = np.cos(ph)
        sp = np.sin(ph)
        nx = st * cp
        ny = st * sp
        rx = float(w @ nx)
        ry = float(w @ ny)
        rz = float(w @ ct)
        resid = max(abs(rx), abs(ry), abs(rz))
        if resid <= REPAIR_TARGET:
            w, th, ph = _canonical(w, th, ph)
            return w, th, ph, resid
        wct = w * ct
        jac[0, :n] = nx
        jac[1, :n] = ny
        jac[2, :n] = ct
        jac[0, n:2 * n] = wct * cp
        jac[1, n:2 * n] = wct * sp
        jac[2, n:2 * n] = -w * st
        jac[0, 2 * n:] = -w * ny
        jac[1, 2 * n:] = w * nx
        jac[2, 2 * n:] = 0.0
        gram = jac @ jac.T
        gram.flat[::4] += 1e-13 * (1.0 + gram.trace())
        try:
            x = np.linalg.solve(gram, [-rx, -ry, -rz])
        except np.linalg.LinAlgError:
            return None
        w = np.clip(w + jac[:, :n].T @ x, 0.0, None)
        th = th + jac[:, n:2 * n].T @ x
        ph = ph + jac[:, 2 * n:].T @ x
        tot = float(w.sum())
        if tot <= 0.0:
            return None
        w = w / tot
    resid = _max_residual(w, th, ph)
    if resid <= TOL.feasibility:
        w, th, ph = _canonical(w, th, ph)
        return w, th, ph, resid
    return None


def repair(p: ParamPom, tol: Tolerances = TOL) -> ParamPom:
    """Return the nearest feasible candidate; a feasible input comes back unchanged."""
    fixed = _repair_arrays(p.weights, p.colatitudes, p.longitudes, tol.feasibility)
    if fixed is None:
        raise RepairError("constraint repair did not converge; discard the candidate")
    w, th, ph, _ = fixed
    return ParamPom(w, th, ph)


def _repair_batch(W: np.ndarray, TH: np.ndarray, PH: np.ndarray, rounds: int):
    """Batched repair, one candidate per row. Returns (W, TH, PH, residual).

    Rows that cannot be normalized get an infinite residual; callers treat
    any residual above REPAIR_ACCEPT as a failed repair.
    """
    R, n = W.shape
    W = np.clip(W, 0.0, None)
    TH = np.array(TH, dtype=float)
    PH = np.array(PH, dtype=float)
    tot = W.sum(axis=1, keepdims=True)
    dead = tot[:, 0] <= 0.0
    safe = np.where(tot > 0.0, tot, 1.0)
    W = W / safe
    diag = np.arange(3)
    for _ in range(rounds):
        st = np.sin(TH)
        ct = np.cos(TH)
        cp = np.cos(PH)
        sp = np.sin(PH)
        nx = st * cp
        ny = st * sp
        rx = (W * nx).sum(axis=1)
        ry = (W * ny).sum(axis=1)
        rz = (W * ct).sum(axis=1)
        resid = np.maximum(np.abs(rx), np.maximum(np.abs(ry), np.abs(rz)))
        if (resid[~dead] <= REPAIR_TARGET).all():
            break
        jac = np.empty((R, 3, 3 * n))
        jac[:, 0, :n] = nx
        jac[:, 1, :n] = ny
        jac[:, 2, :n] = ct
        wct = W * ct
        jac[:, 0, n:2 * n] = wct * cp
        jac[:, 1, n:2 * n] = wct * sp
        jac[:, 2, n:2 * n] = -W * st
        jac[:, 0, 2 * n:] = -W * ny
        jac[:, 1, 2 * n:] = W * nx
        jac[:, 2, 2 * n:] = 0.0
        gram = jac @ jac.transpose(0, 2, 1)
        trace = gram[:, diag, diag].sum(axis=1)
        gram[:, diag, diag] += (1e-13 * (1.0 + np.abs(trace)))[:, None]
        rhs = -np.stack([rx, ry, rz], axis=1)[:, :, None]
        try:
            x = np.linalg.solve(gram, rhs)[:, :, 0]
        except np.linalg.LinAlgError:
            return W, TH, PH, np.full(R, np.inf)
        delta = np.einsum("rkn,rk->rn", jac, x)
        W = np.clip(W + delta[:, :n], 0.0, None)
        TH = TH + delta[:, n:2 * n]
        PH = PH + delta[:, 2 * n:]
        tot = W.sum(axis=1, keepdims=True)
        dead |= tot[:, 0] <= 0.0
        safe = np.where(tot > 0.0, tot, 1.0)
        W = W / safe
    st = np.sin(TH)
    rx = (W * (st * np.cos(PH))).sum(axis=1)
    ry = (W * (st * np.sin(PH))).sum(axis=1)
    rz = (W * np.cos(TH)).sum(axis=1)
    resid = np.maximum(np.abs(rx), np.maximum(np.abs(ry), np.abs(rz)))
    resid = np.maximum(resid, np.abs(W.sum(axis=1) - 1.0))
    resid[dead] = np.inf
    return W, TH, PH, resid


@dataclass(frozen=True)
class OptimizerConfig:
    n_elements: int = 4
    restarts: int = 16
    max_iterations: int = 2000
    step_scale: float = 0.3
    penalty_weight: float = 1.0
    seed: int = 0
    tolerance: float = 1e-10

    def __post_init__(self) -> None:
        if self.n_elements < 1 or self.restarts < 1 or self.max_iterations < 1:
            raise DomainError("n_elements, restarts and max_iterations must be >= 1")
        if self.step_scale <= 0.0 or self.penalty_weight <= 0.0 or self.tolerance <= 0.0:
            raise DomainError("step_scale, penalty_weight and tolerance must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must fit an unsigned 64-bit integer")


@dataclass(frozen=True)
class SpotCheck:
    """Current candidate sampled mid-search so audits can replay the objective."""

    restart: int
    iteration: int
    params: ParamPom
    value: float


@dataclass(frozen=True)
class RestartRecord:
    restart: int
    start_value: float
    final_value: float
    iterations: int
    accepted: int


@dataclass(frozen=True)
class SearchTrace:
    """What the search did, for reproducibility audits.

    Recorded values are always the maximized objective: the fidelity itself,
    or the correct-decision probability (1 - error) for the error search.
    """

    objective: str
    records: tuple[RestartRecord, ...]
    spot_checks: tuple[SpotCheck, ...]
    failed_restarts: tuple[int, ...]
    best_restart: int
    best_params: ParamPom
    evaluations: int


def _signal_arrays(e: SymmetricEnsemble):
    amps = np.array([s.as_array() for s in e.states])
    cp, cm = amps[:, 0], amps[:, 1]
    cross = cp.conjugate() * cm
    bloch = np.stack([2.0 * cross.real, 2.0 * cross.imag,
                      np.abs(cp) ** 2 - np.abs(cm) ** 2], axis=1)
    return bloch, np.abs(cp) ** 2, np.abs(cm) ** 2, cross.conjugate()


def _fidelity_objective(e: SymmetricEnsemble) -> Callable:
    """Best fidelity reachable with each row's measurement, retransmission
    already optimized outcome by outcome (top eigenvalue of each score operator)."""
    bloch, pa, pd, pb = _signal_arrays(e)
    pbr, pbi = pb.real, pb.imag
    inv_m = 1.0 / e.m

    def objective(W, TH, PH):
        st = np.sin(TH)
        dirs = np.stack([st * np.cos(PH), st * np.sin(PH), np.cos(TH)], axis=1)
        born = W[:, None, :] * (1.0 + bloch @ dirs)
        a = pa @ born
        d = pd @ born
        br = pbr @ born
        bi = pbi @ born
        top = 0.5 * (a + d) + np.sqrt(0.25 * (a - d) ** 2 + br * br + bi * bi)
        return top.sum(axis=1) * inv_m

    return objective


def _correct_objective(e: SymmetricEnsemble) -> Callable:
    """Probability of a correct decision under the best outcome-to-signal map."""
    bloch = _signal_arrays(e)[0]
    inv_m = 1.0 / e.m

    def objective(W, TH, PH):
        st = np.sin(TH)
        dirs = np.stack([st * np.cos(PH), st * np.sin(PH), np.cos(TH)], axis=1)
        born = W[:, None, :] * (1.0 + bloch @ dirs)
        return born.max(axis=1).sum(axis=1) * inv_m

    return objective


def _run_search(e: SymmetricEnsemble, cfg: OptimizerConfig, objective: Callable,
                name: str) -> tuple[ParamPom, SearchTrace]:
    if cfg.n_elements < 2:
        raise DomainError(f"need at least 2 elements, got {cfg.n_elements}")
    n, restarts = cfg.n_elements, cfg.restarts
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, n]))
    W = np.zeros((restarts, n))
    TH = np.zeros((restarts, n))
    PH = np.zeros((restarts, n))
    alive = np.zeros(restarts, dtype=bool)
    for _ in range(START_ATTEMPTS):
        need = ~alive
        if not need.any():
            break
        k = int(need.sum())
        w0 = rng.dirichlet(np.ones(n), size=k)
        th0 = np.arccos(rng.uniform(-1.0, 1.0, (k, n)))
        ph0 = rng.uniform(0.0, 2.0 * math.pi, (k, n))
        w0, th0, ph0, resid = _repair_batch(w0, th0, ph0, rounds=40)
        good = resid <= REPAIR_ACCEPT
        rows = np.where(need)[0][good]
        W[rows], TH[rows], PH[rows] = w0[good], th0[good], ph0[good]
        alive[rows] = True
    if not alive.any():
        raise OptimizationError(f"no feasible start in {restarts} restarts")
    VAL = np.where(alive, objective(W, TH, PH), -np.inf)
    start_vals = VAL.copy()
    CONC = (W * W).sum(axis=1)
    step = cfg.step_scale
    accepted = np.zeros(restarts, dtype=np.int64)
    stall = np.zeros(restarts, dtype=np.int64)
    spots: list[SpotCheck] = []
    evaluations = int(alive.sum())
    rows_all = np.arange(restarts)
    iterations = 0
    for it in range(cfg.max_iterations):
        iterations = it + 1
        kind = rng.random(restarts)
        noise = rng.standard_normal((3, restarts, n))
        W2, TH2, PH2 = W.copy(), TH.copy(), PH.copy()
        full = kind < 0.45
        W2[full] += (0.25 * step) * noise[0][full]
        TH2[full] += step * noise[1][full]
        PH2[full] += step * noise[2][full]
        single = (kind >= 0.45) & (kind < 0.70)
        ks = rng.integers(0, n, restarts)
        polar = rng.random(restarts) < 0.5
        g = step * rng.standard_normal(restarts)
        rows = np.where(single & polar)[0]
        TH2[rows, ks[rows]] += g[rows]
        rows = np.where(single & ~polar)[0]
        PH2[rows, ks[rows]] += g[rows]
        givers = rng.integers(0, n, restarts)
        takers = rng.integers(0, n - 1, restarts)
        takers = takers + (takers >= givers)
        amount = W[rows_all, givers] * rng.random(restarts)
        rows = np.where(kind >= 0.70)[0]
        W2[rows, givers[rows]] -= amount[rows]
        W2[rows, takers[rows]] += amount[rows]
        step *= STEP_DECAY
        W2, TH2, PH2, resid = _repair_batch(W2, TH2, PH2, rounds=SEARCH_REPAIR_ROUNDS)
        valid = alive & (resid <= REPAIR_ACCEPT)
        VAL2 = objective(W2, TH2, PH2) - cfg.penalty_weight * np.maximum(
            0.0, resid - TOL.feasibility)
        evaluations += int(valid.sum())
        CONC2 = (W2 * W2).sum(axis=1)
        accept = valid & ((VAL2 > VAL + cfg.tolerance)
                          | ((VAL2 >= VAL - cfg.tolerance) & (CONC2 > CONC + 1e-12)))
        W[accept] = W2[accept]
        TH[accept] = TH2[accept]
        PH[accept] = PH2[accept]
        VAL[accept] = VAL2[accept]
        CONC[accept] = CONC2[accept]
        accepted += accept
        stall = np.where(accept, 0, stall + 1)
        if iterations % SPOT_EVERY == 0:
            for r in np.where(alive)[0]:
                spots.append(SpotCheck(restart=int(r), iteration=iterations,
                                       params=ParamPom(W[r], TH[r], PH[r]),
                                       value=float(VAL[r])))
        if iterations >= STALL_FLOOR and (stall[alive] >= STALL_LIMIT).all():
            break
    best = -1
    for r in range(restarts):
        if not alive[r]:
            continue
        # lexicographic: clearly better value wins, near-ties go to the more
        # concentrated candidate, exact ties to the earlier restart
        if best < 0 or VAL[r] > VAL[best] + RESTART_TIE or (
                VAL[r] >= VAL[best] - RESTART_TIE and CONC[r] > CONC[best] + 1e-12):
            best = r
    wb, thb, phb = _canonical(W[best].copy(), TH[best].copy(), PH[best].copy())
    params = ParamPom(wb, thb, phb)
    records = tuple(
        RestartRecord(restart=r, start_value=float(start_vals[r]),
                      final_value=float(VAL[r]), iterations=iterations,
                      accepted=int(accepted[r]))
        for r in range(restarts) if alive[r])
    failed = tuple(int(r) for r in range(restarts) if not alive[r])
    trace = SearchTrace(objective=name, records=records, spot_checks=tuple(spots),
                        failed_restarts=failed, best_restart=best,
                        best_params=params, evaluations=evaluations)
    return params, trace


def optimize_fidelity(e: SymmetricEnsemble,
                      cfg: OptimizerConfig = OptimizerConfig()) -> tuple[Strategy, float, SearchTrace]:
    """Search for the measurement maximizing the retransmission fidelity.

    Returns the realized strategy (measurement plus exact best retransmission
    states), its fidelity recomputed through the exact double sum, and the
    search trace. Deterministic for a fixed (ensemble, config).
    """
    params, trace = _run_search(e, cfg, _fidelity_objective(e), "fidelity")
    pom = to_pom(params)
    report: FidelityReport = optimal_retransmission(e, pom)
    strategy = Strategy(pom=pom, retransmit=report.states)
    return strategy, fidelity_of_strategy(e, strategy), trace


def optimize_error(e: SymmetricEnsemble,
                   cfg: OptimizerConfig = OptimizerConfig()) -> tuple[Pom, Assignment, float, SearchTrace]:
    """Search for the measurement minimizing the identification error.

    The outcome-to-signal map is the greedy one (each outcome read as the
    signal of largest joint probability), both inside the search and in the
    returned assignment. The returned error is recomputed exactly.
    """
    params, trace = _run_search(e, cfg, _correct_objective(e), "error")
    pom = to_pom(params)
    assignment = greedy_assignment(e, pom)
    return pom, assignment, error_probability(e, pom, assignment), trace
