"""Exact evaluation of the five-cycle noncontextuality inequality, the
measurement-unitary bookkeeping, and brute-force certification of the
noncontextual bound."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import PlanMismatch
from .pentagram import Quintuplet, angles, build_pulse_quintuplet
from .qutrit import GEOMETRY_ATOL, KET_MINUS, KET_PLUS, compose, dagger, overlap, rot_a, rot_b

#: Order of the twelve estimated terms: five singles, five sequential
#: pairs, the remeasured first single, and the closing sequential pair.
TERM_NAMES = (
    "L1", "L2", "L3", "L4", "L5",
    "L1L2", "L2L3", "L3L4", "L4L5", "L5L6",
    "L1c", "L1pL1",
)


@dataclass(frozen=True)
class TermSet:
    """Per-term values (expectations, estimates, or standard errors)."""

    singles: np.ndarray  # <L1>..<L5>
    pairs: np.ndarray  # <L1 L2>..<L5 L6>
    correction_single: float  # <L1> remeasured
    correction_pair: float  # <L1' L1>, L1' being the closing state l6

    def as_dict(self) -> dict[str, float]:
        values = list(self.singles) + list(self.pairs)
        values += [self.correction_single, self.correction_pair]
        return {name: float(v) for name, v in zip(TERM_NAMES, values)}


@dataclass(frozen=True)
class MeasurementPlan:
    """One of the five pulse settings and the basis states it reads out.

    The first readout (on |+1>) measures l_{first_target}; after the
    population swap the second readout measures l_{second_target}.
    """

    index: int
    unitary: np.ndarray
    pulses: tuple[tuple[str, float], ...]  # application order
    first_target: int  # = 2*floor(i/2) + 1
    second_target: int  # = 2*floor((i+1)/2)


def plan_pulses(index: int) -> tuple[tuple[str, float], ...]:
    """Pulse string of the index-th setting, in application order.

    The settings walk the basis cycle: U_1 = identity and each next
    setting appends one more gamma pulse on alternating transitions,
    starting with 'a'.
    """
    g = angles().gamma
    chain = (("a", g), ("b", g), ("a", g), ("b", g))
    return chain[: index - 1]


def swap_pulses() -> tuple[tuple[str, float], ...]:
    """Pulse string exchanging the |+1> and |-1> populations."""
    return (("b", math.pi), ("a", math.pi), ("b", math.pi))


def _matrix(pulses) -> np.ndarray:
    ops = [rot_a(t) if ax == "a" else rot_b(t) for ax, t in pulses]
    return compose(ops) if ops else np.eye(3, dtype=complex)


def measurement_plans(quintuplet: Quintuplet | None = None) -> list[MeasurementPlan]:
    """The five measurement settings, verified against the basis cycle.

    Raises PlanMismatch when U_i^dag |+1> or U_i^dag |-1> fails to match
    its designated cycle state up to phase (a convention bug).
    """
    q = build_pulse_quintuplet() if quintuplet is None else quintuplet
    plans = []
    for i in range(1, 6):
        pulses = plan_pulses(i)
        u = _matrix(pulses)
        first = 2 * (i // 2) + 1
        second = 2 * ((i + 1) // 2)
        ud = dagger(u)
        for ket, target in ((KET_PLUS, first), (KET_MINUS, second)):
            got = ud @ ket
            if abs(abs(overlap(got, q.states[target - 1])) - 1.0) > GEOMETRY_ATOL:
                raise PlanMismatch(
                    f"U_{i}^dag readout state does not match l{target} "
                    f"(overlap {abs(overlap(got, q.states[target - 1])):.12f})"
                )
        plans.append(
            MeasurementPlan(
                index=i,
                unitary=u,
                pulses=pulses,
                first_target=first,
                second_target=second,
            )
        )
    return plans


def sequential_pair_probability(psi, first, second) -> float:
    """P(first outcome 1, then second outcome 1) under the projection rule.

    After the first projector fires, the state is exactly |first>, so the
    joint probability factorizes as |<first|psi>|^2 |<second|first>|^2.
    """
    return abs(overlap(first, psi)) ** 2 * abs(overlap(second, first)) ** 2


def exact_terms(psi: np.ndarray, q: Quintuplet) -> TermSet:
    """Exact quantum values of all twelve terms for state psi.

    Singles are Born probabilities |<l_i|psi>|^2; pairs are sequential
    joint probabilities with the earlier-indexed observable measured
    first; the correction terms reuse the closing state l6 in the role of
    the remeasured first observable.
    """
    singles = np.array([abs(overlap(q.states[i], psi)) ** 2 for i in range(5)])
    pairs = np.array(
        [sequential_pair_probability(psi, q.states[i], q.states[i + 1]) for i in range(5)]
    )
    correction_single = abs(overlap(q.states[0], psi)) ** 2
    correction_pair = sequential_pair_probability(psi, q.states[5], q.states[0])
    return TermSet(
        singles=singles,
        pairs=pairs,
        correction_single=float(correction_single),
        correction_pair=float(correction_pair),
    )


def kcbs_value(t: TermSet) -> float:
    """Sum of singles minus sum of sequential pairs."""
    return float(np.sum(t.singles) - np.sum(t.pairs))


def modified_kcbs_value(t: TermSet) -> float:
    """Five-cycle value corrected for an imperfectly closing cycle:
    subtract the remeasured first single, add the closing pair."""
    return kcbs_value(t) - t.correction_single + t.correction_pair


def assignment_value(v) -> int:
    """Inequality left-hand side for one deterministic 0/1 assignment
    (v6 identified with v1)."""
    s = sum(v)
    p = sum(v[i] * v[(i + 1) % 5] for i in range(5))
    return s - p


def modified_assignment_value(v, v1_prime: int) -> int:
    """Modified left-hand side where the closing observable carries its
    own predetermined value v1_prime (v6 := v1_prime in the pair chain)."""
    s = sum(v)
    p = sum(v[i] * v[i + 1] for i in range(4)) + v[4] * v1_prime
    return s - p - v[0] + v1_prime * v[0]


def nchv_bound() -> tuple[int, list[tuple[int, ...]]]:
    """Maximum of the inequality over all 2^5 deterministic assignments,
    together with every maximizing assignment. The maximum is 2."""
    best = -(10**9)
    argmax: list[tuple[int, ...]] = []
    for v in itertools.product((0, 1), repeat=5):
        val = assignment_value(v)
        if val > best:
            best, argmax = val, [v]
        elif val == best:
            argmax.append(v)
    return best, argmax


def nchv_bound_modified() -> int:
    """Maximum of the modified inequality over all 2^6 assignments
    (v1..v5 plus the independent closing value). The maximum is 2."""
    return max(
        modified_assignment_value(v, vp)
        for v in itertools.product((0, 1), repeat=5)
        for vp in (0, 1)
    )
