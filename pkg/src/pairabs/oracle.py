"""Brute-force cross-check of the closed-form absorption amplitude.

Builds the initial and final superpositions as explicit tensor monomials,
applies the single-absorption operator symbolically and evaluates the bracket
term by term.  The operator flips exactly one ground atom to the excited
state per output term (an already-excited atom is annihilated, keeping the
calculation at first order) and never touches CM labels: recoil is carried
entirely by the starred labels of the final-state monomials.

Agreement of :func:`oracle_matrix_element` with
:func:`pairabs.rates.matrix_element` over randomized configurations is the
central anti-regression property of the library.
"""

from __future__ import annotations

import math

from . import rates
from .algebra import (
    CHI,
    E,
    G,
    PHI,
    PSI,
    VARPHI,
    FormalState,
    OverlapTable,
    Statistics,
    Term,
    combine,
    inner_product,
    symmetrize,
)
from .rates import ExcludedStateError
from .scenarios import Coefficients

__all__ = [
    "apply_absorption",
    "build_final",
    "build_initial",
    "formal_final_norm_sq",
    "formal_initial_norm_sq",
    "oracle_matrix_element",
]


def build_initial(coeffs: Coefficients, statistics: Statistics) -> FormalState:
    """Unnormalized initial state: a weighted pair of (anti)symmetrized ground products."""
    parts = []
    if coeffs.a != 0:
        parts.append((coeffs.a, symmetrize(PSI, G, PHI, G, statistics)))
    if coeffs.b != 0:
        parts.append((coeffs.b, symmetrize(VARPHI, G, CHI, G, statistics)))
    return combine(parts)


def build_final(coeffs: Coefficients, statistics: Statistics) -> FormalState:
    """Unnormalized final superposition of the four recoiled absorption outcomes.

    Each outcome is itself (anti)symmetrized; the recoiled atom carries the
    starred CM label and the excited internal state.
    """
    s = float(statistics.sign)
    a, b = coeffs.a, coeffs.b
    monomials = (
        (a, PSI.star(), E, PHI, G),
        (a * s, PHI, G, PSI.star(), E),
        (a, PSI, G, PHI.star(), E),
        (a * s, PHI.star(), E, PSI, G),
        (b, VARPHI.star(), E, CHI, G),
        (b * s, CHI, G, VARPHI.star(), E),
        (b, VARPHI, G, CHI.star(), E),
        (b * s, CHI.star(), E, VARPHI, G),
    )
    return FormalState(tuple(Term(*m) for m in monomials if m[0] != 0))


def apply_absorption(state: FormalState) -> FormalState:
    """One photon absorbed by either atom.

    Each ground slot flips to excited in its own output term; an excited slot
    contributes nothing, so terms with two excitations never appear at first
    order.  CM labels are unchanged.
    """
    out: list[Term] = []
    for t in state.terms:
        if t.int1 is G:
            out.append(Term(t.weight, t.cm1, E, t.cm2, t.int2))
        if t.int2 is G:
            out.append(Term(t.weight, t.cm1, t.int1, t.cm2, E))
    return FormalState(tuple(out))


def formal_initial_norm_sq(
    coeffs: Coefficients, table: OverlapTable, statistics: Statistics
) -> float:
    """Initial squared norm from the raw expansion; cross-checks the closed form."""
    state = build_initial(coeffs, statistics)
    return inner_product(state, state, table).real


def formal_final_norm_sq(
    coeffs: Coefficients, table: OverlapTable, statistics: Statistics
) -> float:
    """Final squared norm from the raw expansion; cross-checks the closed form."""
    state = build_final(coeffs, statistics)
    return inner_product(state, state, table).real


def oracle_matrix_element(
    coeffs: Coefficients,
    table: OverlapTable,
    statistics: Statistics,
    formal_norms: bool = False,
) -> complex:
    """Absorption amplitude from the raw expansion.

    By default the normalizations reuse the closed forms so the comparison
    with :func:`pairabs.rates.matrix_element` isolates the bracket sum; with
    ``formal_norms=True`` both norms come from formal inner products as well,
    cross-checking those expressions too.
    """
    if formal_norms:
        n0_sq = formal_initial_norm_sq(coeffs, table, statistics)
        nf_sq = formal_final_norm_sq(coeffs, table, statistics)
    else:
        n0_sq = rates.initial_norm_sq(coeffs, table, statistics)
        nf_sq = rates.final_norm_sq(coeffs, table, statistics)
    if n0_sq < rates.EXCLUSION_EPS * 2.0 * coeffs.weight_sq:
        raise ExcludedStateError(
            "initial state is null (excluded); the normalized amplitude is a 0/0 form"
        )
    if nf_sq < rates.EXCLUSION_EPS * 4.0 * coeffs.weight_sq:
        raise ExcludedStateError(
            "final superposition is null; the normalized amplitude is a 0/0 form"
        )
    bracket = inner_product(
        build_final(coeffs, statistics),
        apply_absorption(build_initial(coeffs, statistics)),
        table,
    )
    return bracket / math.sqrt(n0_sq * nf_sq)
