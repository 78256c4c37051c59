"""Photon statistics and nonclassicality criteria for ladder states.

All quantities are weighted sums of the squared coefficients over the
truncated ladder, accumulated with fsum in a fixed serial order.  Criteria
whose defining denominator vanishes are reported as None (an explicit
"undefined" value), never as NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .states import ChargeState


@dataclass(frozen=True)
class MomentSet:
    """The mode-occupation moments entering the nonclassicality criteria.

    aa_corr and bb_corr are the normally ordered pair moments <a+a+ a a> and
    <b+b+ b b>; on a fixed-charge ladder they equal <n^2> - <n> exactly.
    """

    mean_na: float
    mean_na2: float
    mean_nb: float
    mean_nb2: float
    aa_corr: float
    bb_corr: float
    cross: float


def moments(state: ChargeState) -> MomentSet:
    """Occupation moments of the two modes over the truncated ladder."""
    na, nb = state.occupations()
    w = np.abs(state.coeffs) ** 2
    naf = na.astype(float)
    nbf = nb.astype(float)

    def wsum(values):
        return math.fsum(w * values)

    return MomentSet(
        mean_na=wsum(naf),
        mean_na2=wsum(naf * naf),
        mean_nb=wsum(nbf),
        mean_nb2=wsum(nbf * nbf),
        aa_corr=wsum(naf * (naf - 1.0)),
        bb_corr=wsum(nbf * (nbf - 1.0)),
        cross=wsum(naf * nbf),
    )


def _mode_moments(mom: MomentSet, mode: str):
    if mode == "a":
        return mom.mean_na, mom.mean_na2, mom.aa_corr
    if mode == "b":
        return mom.mean_nb, mom.mean_nb2, mom.bb_corr
    raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")


def mandel(state: ChargeState, mode: str = "a") -> Optional[float]:
    """Mandel parameter (<n^2> - <n>^2)/<n> - 1; None when <n> = 0."""
    mean, mean2, _ = _mode_moments(moments(state), mode)
    if mean == 0.0:
        return None
    return (mean2 - mean * mean) / mean - 1.0


def g2(state: ChargeState, mode: str = "a") -> Optional[float]:
    """Second-order correlation <x+x+ x x>/<n_x>^2; None when <n_x> = 0."""
    mean, _, corr = _mode_moments(moments(state), mode)
    if mean == 0.0:
        return None
    return corr / (mean * mean)


def g12(state: ChargeState) -> Optional[float]:
    """Inter-mode correlation <n_a n_b>/(<n_a><n_b>); None if a mean vanishes."""
    mom = moments(state)
    if mom.mean_na == 0.0 or mom.mean_nb == 0.0:
        return None
    return mom.cross / (mom.mean_na * mom.mean_nb)


def cauchy_schwartz(state: ChargeState) -> Optional[float]:
    """Cauchy-Schwartz ratio sqrt(<a+2a2><b+2b2>)/|<n_a n_b>| - 1.

    Negative values violate the classical inequality.  None when the cross
    moment vanishes.
    """
    mom = moments(state)
    if mom.cross == 0.0:
        return None
    return math.sqrt(mom.aa_corr * mom.bb_corr) / abs(mom.cross) - 1.0


def quadrature_variance(state: ChargeState) -> tuple[float, float]:
    """Variances of the x and p quadratures of mode a.

    On a fixed-charge ladder every first moment and pair amplitude of a
    single mode vanishes (the kets are orthogonal two-mode number states),
    so both variances reduce to <n_a> + 1/2 identically: no quadrature
    squeezing is possible for these states.
    """
    dx2 = moments(state).mean_na + 0.5
    return dx2, dx2


def photon_distribution(state: ChargeState):
    """Rows (n, n_a, n_b, P) of the joint photon-number distribution."""
    na, nb = state.occupations()
    w = np.abs(state.coeffs) ** 2
    return [(int(n), int(na[n]), int(nb[n]), float(w[n])) for n in range(state.n_max + 1)]


@dataclass(frozen=True)
class DiagnosticsReport:
    """All criteria for one state; None marks an undefined (0/0) entry."""

    mandel_a: Optional[float]
    mandel_b: Optional[float]
    g2_a: Optional[float]
    g2_b: Optional[float]
    g12: Optional[float]
    i0: Optional[float]
    dx2: float
    dp2: float


def full_report(state: ChargeState) -> DiagnosticsReport:
    dx2, dp2 = quadrature_variance(state)
    return DiagnosticsReport(
        mandel_a=mandel(state, "a"),
        mandel_b=mandel(state, "b"),
        g2_a=g2(state, "a"),
        g2_b=g2(state, "b"),
        g12=g12(state),
        i0=cauchy_schwartz(state),
        dx2=dx2,
        dp2=dp2,
    )
