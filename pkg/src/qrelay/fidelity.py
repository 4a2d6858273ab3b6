"""Average retransmission fidelity of measure-and-retransmit strategies.

A strategy measures the incoming signal with a probability operator measure
and, on outcome k, retransmits a fixed state phi_k. The figure of merit is
the ensemble-averaged overlap between what was sent and what is retransmitted,

    F = sum_j p_j sum_k <psi_j|pi_k|psi_j> |<psi_j|phi_k>|^2.

For a fixed measurement the best retransmission states are computed exactly:
outcome k contributes at most the top eigenvalue of its score operator

    O_k = sum_j p_j <psi_j|pi_k|psi_j> |psi_j><psi_j|,

attained by retransmitting the matching eigenvector. The module also carries
the closed-form optimum over all strategies and the measurement family
achieving it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ensembles import SymmetricEnsemble, check_domain
from .errors import DomainError
from .measurements import Pom
from .qubit import Hermitian2, PureQubit, hermitian_eig2, make_qubit, overlap_prob
from .tolerances import TOL, Tolerances


@dataclass(frozen=True)
class Strategy:
    """A measurement together with one retransmission state per outcome."""

    pom: Pom
    retransmit: tuple[PureQubit, ...]

    def __post_init__(self) -> None:
        retransmit = tuple(self.retransmit)
        if len(retransmit) != len(self.pom.elements):
            raise DomainError(
                f"{len(retransmit)} retransmission states for "
                f"{len(self.pom.elements)} outcomes")
        object.__setattr__(self, "retransmit", retransmit)


@dataclass(frozen=True)
class FidelityReport:
    """Best achievable fidelity for a fixed measurement.

    per_outcome holds, in label order, each outcome's fidelity contribution
    (the top eigenvalue of its score operator) and the retransmission state
    attaining it.
    """

    fidelity: float
    per_outcome: tuple[tuple[float, PureQubit], ...]

    @property
    def states(self) -> tuple[PureQubit, ...]:
        return tuple(s for _, s in self.per_outcome)


def fidelity_of_strategy(e: SymmetricEnsemble, s: Strategy) -> float:
    """Average fidelity of the strategy on the ensemble, by the exact double sum."""
    total = 0.0
    for sig in e.states:
        for el, out in zip(s.pom.elements, s.retransmit):
            total += e.prior * el.expectation(sig) * overlap_prob(sig, out)
    return total


def outcome_fidelity_operator(e: SymmetricEnsemble, element: Hermitian2) -> Hermitian2:
    """Score operator of one outcome: sum_j p_j <psi_j|pi|psi_j> |psi_j><psi_j|."""
    op = Hermitian2.zero()
    for sig in e.states:
        op = op + (e.prior * element.expectation(sig)) * Hermitian2.projector(sig)
    return op


def optimal_retransmission(e: SymmetricEnsemble, p: Pom, tol: Tolerances = TOL) -> FidelityReport:
    """Exact best fidelity over retransmission states for a fixed measurement.

    Independent of how the measurement was obtained: each outcome's score
    operator is diagonalized in closed form and the top eigenpair is taken.
    """
    per_outcome = []
    total = 0.0
    for el in p.elements:
        (lam, vec), _ = hermitian_eig2(outcome_fidelity_operator(e, el), tol)
        per_outcome.append((lam, vec))
        total += lam
    return FidelityReport(fidelity=total, per_outcome=tuple(per_outcome))


def max_fidelity_analytic(m: int, theta: float) -> float:
    """Exact maximum fidelity over all strategies.

    1 - sin(theta)^2 / 4 for m > 2; for m = 2 the two-signal optimum
    (1 + sqrt(cos(theta)^2 + sin(theta)^4)) / 2.
    """
    check_domain(m, theta)
    st = math.sin(theta)
    if m == 2:
        return 0.5 * (1.0 + math.sqrt(math.cos(theta) ** 2 + st ** 4))
    return 1.0 - 0.25 * st * st


def retransmission_colatitude(m: int, theta: float) -> float:
    """Common colatitude of the optimal retransmission states.

    cos(chi) = 2 cos(theta) / (1 + cos(theta)^2) for m > 2, and
    cos(chi) = cos(theta) / sqrt(cos(theta)^2 + sin(theta)^4) for m = 2.
    The optimum always retransmits closer to the pole than the signals sit.
    """
    check_domain(m, theta)
    ct = math.cos(theta)
    if m == 2:
        arg = ct / math.sqrt(ct * ct + math.sin(theta) ** 4)
    else:
        arg = 2.0 * ct / (1.0 + ct * ct)
    return math.acos(min(max(arg, -1.0), 1.0))


def optimal_strategy_analytic(m: int, theta: float,
                              n_outputs: int | None = None,
                              alpha: float = 0.0) -> Strategy:
    """A strategy attaining the exact maximum fidelity.

    For m > 2 the optimum is a family: n_outputs >= 2 equal-weight elements
    (1/n)[[1, exp(-i phi_l)], [exp(i phi_l), 1]] at longitudes
    phi_l = alpha + 2*pi*l/n, each retransmitting the state at that longitude
    and colatitude retransmission_colatitude(m, theta). n_outputs defaults to
    m and any phase offset alpha is allowed.

    For m = 2 the optimum is unique up to outcome order, so n_outputs and
    alpha are ignored: the two orthogonal projectors onto
    (|+> +/- |->)/sqrt(2), retransmitting at longitudes 0 and pi.
    """
    check_domain(m, theta)
    colat = retransmission_colatitude(m, theta)
    if m == 2:
        elements = (Hermitian2(0.5, 0.5, 0.5 + 0.0j), Hermitian2(0.5, 0.5, -0.5 + 0.0j))
        retransmit = (make_qubit(colat, 0.0), make_qubit(colat, math.pi))
        return Strategy(pom=Pom(elements=elements, labels=(0, 1)), retransmit=retransmit)
    n = m if n_outputs is None else n_outputs
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise DomainError(f"n_outputs must be an integer >= 2, got {n!r}")
    elements = []
    retransmit = []
    for l in range(n):
        phi = alpha + 2.0 * math.pi * l / n
        elements.append(Hermitian2(1.0 / n, 1.0 / n, complex(math.cos(phi), -math.sin(phi)) / n))
        retransmit.append(make_qubit(colat, phi))
    return Strategy(pom=Pom(elements=tuple(elements), labels=tuple(range(n))),
                    retransmit=tuple(retransmit))
