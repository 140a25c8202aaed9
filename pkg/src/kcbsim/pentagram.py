"""Construction of the five pentagram measurement states and the
symmetry-axis state, via two independent routes (pulse recipe and
Cartesian geometry) that must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qutrit
from .errors import ClosureFailure, ConventionMismatch
from .qutrit import GEOMETRY_ATOL, KET_MINUS, KET_PLUS, compose, fix_phase, overlap, rot_a, rot_b

SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True)
class PentagramAngles:
    """The three pulse angles of the construction, in radians."""

    gamma: float  # arccos(2 - sqrt(5)); steps the basis cycle
    theta: float  # arccos(1 - 2/sqrt(5)); tilts onto the symmetry axis
    phi: float  # arccos((1 - sqrt(5))/2); final symmetry-axis azimuth


@dataclass(frozen=True)
class Quintuplet:
    """Ordered basis cycle l1..l6 with l6 closing back onto l1.

    Adjacent states are orthogonal within 1e-10 and |<l6|l1>| = 1 within
    1e-10. `source` tags which construction produced it.
    """

    states: tuple
    source: str

    def __post_init__(self):
        if len(self.states) != 6:
            raise ValueError("a quintuplet carries six states (l6 closes the cycle)")


def angles() -> PentagramAngles:
    return PentagramAngles(
        gamma=math.acos(2.0 - SQRT5),
        theta=math.acos(1.0 - 2.0 / SQRT5),
        phi=math.acos((1.0 - SQRT5) / 2.0),
    )


def adjacency_defect(q: Quintuplet) -> float:
    """Largest |<l_i|l_{i+1}>| over the five adjacent pairs."""
    return max(abs(overlap(q.states[i], q.states[i + 1])) for i in range(5))


def closure_defect(q: Quintuplet) -> float:
    """Deviation of |<l6|l1>| from 1."""
    return abs(1.0 - abs(overlap(q.states[5], q.states[0])))


def build_pulse_quintuplet(gamma: float | None = None) -> Quintuplet:
    """Basis cycle from the pulse recipe.

    l1 = |+1>, l2 = |-1>, l3 = R_a(-g) l1, and each further state applies
    W = R_a(-g) R_b(-g) (R_b first) to the state two steps back. With
    g = arccos(2 - sqrt(5)) the cycle closes: l6 = l1.

    `gamma` overrides the closure angle (testing hook); any override that
    breaks closure beyond 1e-10 raises ClosureFailure.
    """
    g = angles().gamma if gamma is None else float(gamma)
    w = compose([rot_b(-g), rot_a(-g)])
    l1 = KET_PLUS.copy()
    l2 = KET_MINUS.copy()
    l3 = rot_a(-g) @ l1
    l4 = w @ l2
    l5 = w @ l3
    l6 = w @ l4
    q = Quintuplet(states=(l1, l2, l3, l4, l5, l6), source="pulse")
    if closure_defect(q) > GEOMETRY_ATOL:
        raise ClosureFailure(
            f"|<l6|l1>| deviates from 1 by {closure_defect(q):.3e} "
            f"(gamma = {g!r})"
        )
    if adjacency_defect(q) > GEOMETRY_ATOL:
        raise ClosureFailure(
            f"adjacent states not orthogonal, max overlap {adjacency_defect(q):.3e}"
        )
    return q


def pentagram_directions() -> list[np.ndarray]:
    """Five unit vectors at the vertices of the regular pentagram.

    All make angle alpha with +z where cos^2(alpha) = 1/sqrt(5); the
    azimuthal step is 4*pi/5 so that consecutive directions (pentagram
    order, not pentagon order) are orthogonal.
    """
    cos_alpha = 5.0 ** -0.25
    sin_alpha = math.sqrt(1.0 - 1.0 / SQRT5)
    dirs = []
    for j in range(1, 6):
        az = 4.0 * math.pi * j / 5.0
        dirs.append(
            np.array(
                [sin_alpha * math.cos(az), sin_alpha * math.sin(az), cos_alpha]
            )
        )
    return dirs


def build_cartesian_quintuplet() -> tuple[list[np.ndarray], Quintuplet]:
    """Pentagram directions plus their m = 0 embeddings (l6 := l1)."""
    dirs = pentagram_directions()
    states = [qutrit.cartesian_embed(n) for n in dirs]
    states.append(states[0])
    return dirs, Quintuplet(states=tuple(states), source="cartesian")


def psi0_pulses() -> tuple[tuple[str, float], ...]:
    """Pulse sequence (in application order) preparing the symmetry-axis
    state from |+1>."""
    ang = angles()
    return (("a", -math.pi), ("b", -ang.theta), ("a", ang.phi))


def build_psi0() -> np.ndarray:
    """Symmetry-axis state of the pentagram.

    Built both from its explicit amplitudes
    (5^(-1/4), sqrt(1 - 2/sqrt(5)), 5^(-1/4)) and from the pulse sequence
    R_a(phi) R_b(-theta) R_a(-pi) |+1>; raises ConventionMismatch when the
    two disagree beyond a global phase (which would indicate a rotation
    sign bug).
    """
    coeff = qutrit.make_state(5.0 ** -0.25, math.sqrt(1.0 - 2.0 / SQRT5), 5.0 ** -0.25)
    seq = [rot_a(t) if ax == "a" else rot_b(t) for ax, t in psi0_pulses()]
    pulsed = compose(seq) @ KET_PLUS
    if not qutrit.states_equal_up_to_phase(coeff, pulsed):
        raise ConventionMismatch(
            "pulse-built symmetry-axis state disagrees with its explicit "
            f"amplitudes: |<coeff|pulsed>| = {abs(overlap(coeff, pulsed)):.12f}"
        )
    return fix_phase(coeff)


def gram(states) -> np.ndarray:
    """Matrix of overlap magnitudes |<s_i|s_j>|."""
    states = list(states)
    if not states:
        raise ValueError("gram of an empty state list")
    n = len(states)
    g = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            g[i, j] = abs(overlap(states[i], states[j]))
    return g
