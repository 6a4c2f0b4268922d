"""Half-plane geometry of the admissible inverse-exponent regions.

The base region (CSV column ``in_omega_gamma``) is the open polygon cut
out by the three admissibility inequalities plus y > 0; the refined
region (``in_omega_gamma_sigma``) adds x > 0 and the x-caps selected by
the (sigma, beta_tilde) case split.  Both predicates and the exact
vertex enumeration consume the same half-plane list, so membership and
polygon geometry cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import EmptyRegion
from .exponents import HALF, ProblemParams, derive


@dataclass(frozen=True)
class LebesguePair:
    """A region point (x, y) = (1/r, 1/q), exact-rational."""

    inv_r: Fraction
    inv_q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "inv_r", Fraction(self.inv_r))
        object.__setattr__(self, "inv_q", Fraction(self.inv_q))

    @property
    def x(self) -> Fraction:
        return self.inv_r

    @property
    def y(self) -> Fraction:
        return self.inv_q


@dataclass(frozen=True)
class HalfPlane:
    """Constraint a*x + b*y < c (strict inside; closure uses <=)."""

    a: Fraction
    b: Fraction
    c: Fraction
    name: str

    def slack(self, x: Fraction, y: Fraction) -> Fraction:
        """c - (a x + b y); positive strictly inside."""
        return self.c - (self.a * x + self.b * y)

    def normalized_slack(self, x: Fraction, y: Fraction) -> Fraction:
        """Slack divided by max(|a|, |b|), comparable across constraints."""
        scale = max(abs(self.a), abs(self.b))
        return self.slack(x, y) / scale


def base_halfplanes(params: ProblemParams) -> list[HalfPlane]:
    """The four constraints of the base region."""
    der = derive(params)
    sigma, eta, beta = der.sigma, der.eta, params.beta
    return [
        HalfPlane(2 * sigma, Fraction(1), sigma, "y < 2*sigma*(1/2 - x)"),
        HalfPlane(-sigma * beta, Fraction(1), -sigma * (1 - eta), "y < sigma*(beta*x - 1 + eta)"),
        HalfPlane(
            -sigma * (beta + 2), Fraction(-1), -sigma * (2 - eta),
            "y > sigma*(2 - eta - (beta+2)*x)",
        ),
        HalfPlane(Fraction(0), Fraction(-1), Fraction(0), "y > 0"),
    ]


def region_halfplanes(params: ProblemParams) -> list[HalfPlane]:
    """Base constraints plus the x-caps of the refined region.

    For sigma <= 1 the cap is x < x3.  For sigma > 1 the caps follow the
    case split on (2*eta - 1)*sigma vs 2 and beta_tilde vs 1/sigma, beta0,
    2/sigma; combinations not covered by the split (beta_tilde outside
    (0, 2/sigma]) fall back to applying every cap, which is equivalent on
    the covered range because dropped caps are exactly the redundant ones.
    """
    der = derive(params)
    hps = base_halfplanes(params)
    hps.append(HalfPlane(Fraction(-1), Fraction(0), Fraction(0), "x > 0"))
    sigma, bt = der.sigma, der.beta_tilde

    def cap_x3():
        return HalfPlane(Fraction(1), Fraction(0), der.x3, "x < x3")

    def cap_x5():
        return HalfPlane(Fraction(1), Fraction(0), der.x5, "x < x5")

    def floor_x4():
        return HalfPlane(Fraction(-1), Fraction(0), -der.x4, "x > x4")

    if sigma <= 1:
        hps.append(cap_x3())
        return hps

    steep = (2 * der.eta - 1) * sigma > 2
    if 0 < bt <= 1 / sigma:
        pass  # base region already carries the binding constraints
    elif not steep and 1 / sigma < bt <= 2 / sigma:
        hps.append(cap_x5())
    elif steep and 1 / sigma < bt <= der.beta0:
        hps.append(cap_x5())
    elif steep and der.beta0 < bt < 2 / sigma:
        hps.append(floor_x4())
        hps.append(cap_x5())
    else:
        hps.extend([cap_x3(), floor_x4(), cap_x5()])
    return hps


def in_omega_gamma(point: LebesguePair, params: ProblemParams) -> bool:
    """Strict membership in the base region; boundary points are out."""
    return all(hp.slack(point.x, point.y) > 0 for hp in base_halfplanes(params))


def in_omega_gamma_sigma(point: LebesguePair, params: ProblemParams) -> bool:
    """Strict membership in the refined region."""
    return all(hp.slack(point.x, point.y) > 0 for hp in region_halfplanes(params))


def margin_outside(point: LebesguePair, params: ProblemParams) -> Fraction:
    """Largest normalized violation of any constraint (<= 0 inside closure)."""
    return max(-hp.normalized_slack(point.x, point.y) for hp in region_halfplanes(params))


def _intersect(h1: HalfPlane, h2: HalfPlane) -> Optional[tuple[Fraction, Fraction]]:
    det = h1.a * h2.b - h2.a * h1.b
    if det == 0:
        return None
    x = (h1.c * h2.b - h2.c * h1.b) / det
    y = (h1.a * h2.c - h2.a * h1.c) / det
    return x, y


def region_vertices(params: ProblemParams) -> list[tuple[Fraction, Fraction]]:
    """Exact vertex enumeration of the closed region polygon."""
    hps = region_halfplanes(params)
    vertices: list[tuple[Fraction, Fraction]] = []
    for h1, h2 in combinations(hps, 2):
        pt = _intersect(h1, h2)
        if pt is None:
            continue
        x, y = pt
        if all(hp.slack(x, y) >= 0 for hp in hps) and pt not in vertices:
            vertices.append(pt)
    return vertices


def _interior_witness(params: ProblemParams) -> Optional[tuple[Fraction, Fraction]]:
    vertices = region_vertices(params)
    if len(vertices) < 3:
        return None
    n = len(vertices)
    cx = sum(v[0] for v in vertices) / n
    cy = sum(v[1] for v in vertices) / n
    if all(hp.slack(cx, cy) > 0 for hp in region_halfplanes(params)):
        return cx, cy
    return None


def region_is_empty(params: ProblemParams) -> bool:
    """True when the refined region has no interior."""
    return _interior_witness(params) is None


def alpha_tilde_sup(params: ProblemParams) -> Fraction:
    """sup of alpha_tilde = y + sigma*x over the closed region.

    Computed by exact vertex enumeration; the closed form
    (d*beta + gamma)/(m*(beta + 2)) is asserted against it, so a mismatch
    falsifies the closed-form claim rather than silently trusting it.
    """
    if region_is_empty(params):
        raise EmptyRegion(f"region has no interior for {params}")
    der = derive(params)
    sup = max(y + der.sigma * x for x, y in region_vertices(params))
    if sup != der.alpha_tilde_sup:
        raise AssertionError(
            f"vertex enumeration gives sup alpha_tilde = {sup}, "
            f"closed form says {der.alpha_tilde_sup}"
        )
    return sup


def interior_points(params: ProblemParams, count: int, rng) -> list[LebesguePair]:
    """Random strict-interior points as positive convex vertex combinations."""
    vertices = region_vertices(params)
    if _interior_witness(params) is None:
        raise EmptyRegion(f"region has no interior for {params}")
    points = []
    for _ in range(count):
        weights = [Fraction(rng.randint(1, 12)) for _ in vertices]
        total = sum(weights)
        x = sum(w * v[0] for w, v in zip(weights, vertices)) / total
        y = sum(w * v[1] for w, v in zip(weights, vertices)) / total
        points.append(LebesguePair(x, y))
    return points


def lattice_membership(params: ProblemParams, n: int):
    """Membership of the n x n rational lattice {(i/n, j/n)} of [0,1)^2.

    Yields (x, y, in_base, in_refined) rows in row-major order.  The
    half-plane lists are built once; the refined region is a subset of
    the base region, so its extra constraints are only checked on base
    members.
    """
    base = base_halfplanes(params)
    extra = region_halfplanes(params)[len(base):]
    for i in range(n):
        x = Fraction(i, n)
        for j in range(n):
            y = Fraction(j, n)
            in_base = all(hp.slack(x, y) > 0 for hp in base)
            in_refined = in_base and all(hp.slack(x, y) > 0 for hp in extra)
            yield x, y, in_base, in_refined
