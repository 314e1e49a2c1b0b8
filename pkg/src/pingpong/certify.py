"""Freeness certificates: contraction, proximality, ping-pong, Schottky.

Every inequality a certificate relies on is checked with the uniform
numeric slack DELTA_NUM, so SVD residuals cannot flip a boundary case
into a spurious certificate.  Absence of a certificate is a value
(``None``), never an error: it only means this test could not vouch for
the pair.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConfigError
from .matrices import IntMatrix, inverse
from .spectral import DELTA_NUM, svd
from .wedge import ProjElement, attractor_repeller, point_hyperplane_distance


@dataclass(frozen=True)
class ContractionWitness:
    epsilon: float
    k: int
    v: ProjElement
    h: ProjElement
    gap: float  # a_{k+1}/a_k, the top-two ratio of the wedge action


@dataclass(frozen=True)
class PingPongCertificate:
    r: float
    epsilon: float
    witnesses: tuple[ContractionWitness, ContractionWitness, ContractionWitness, ContractionWitness]
    min_separation: float


@dataclass(frozen=True)
class Circle:
    center: float
    radius: float


@dataclass(frozen=True)
class SchottkyCertificate:
    traces: tuple[int, int]
    fixed_points: tuple[float, float, float, float]  # alpha1, beta1, alpha2, beta2
    circles: tuple[Circle, Circle, Circle, Circle]  # C1, C2, C3, C4
    min_gap: float


def choose_k(n: int) -> int:
    """Exterior power used for certification: n/2 (even) or (n-1)/2 (odd)."""
    if n < 2:
        raise ConfigError(f"need n >= 2, got {n}")
    return n // 2


def epsilon_contracting(g: IntMatrix, k: int, eps: float) -> ContractionWitness | None:
    """Witness that g contracts P(wedge^k(R^n)), or None.

    Issues a witness iff a_{k+1}(g)/a_k(g) <= eps^2 - DELTA_NUM; the
    attractor/repeller pair then realizes the contraction.
    """
    if not 0 < eps < 0.25:
        raise ConfigError(f"need 0 < eps < 1/4, got {eps}")
    sigma = svd(g).sigma
    if not 1 <= k <= g.n - 1:
        raise ConfigError(f"k must be in [1, {g.n - 1}], got {k}")
    gap = sigma[k] / sigma[k - 1]
    if gap > eps * eps - DELTA_NUM:
        return None
    v, h = attractor_repeller(g, k)
    return ContractionWitness(eps, k, v, h, gap)


def very_proximal(
    g: IntMatrix, k: int, r: float, eps: float
) -> tuple[ContractionWitness, ContractionWitness] | None:
    """Witness pair for g and g^-1, each with d(v, H) >= r, or None."""
    if not r > 2 * eps:
        raise ConfigError(f"need r > 2*eps, got r = {r}, eps = {eps}")
    out = []
    for m in (g, inverse(g)):
        w = epsilon_contracting(m, k, eps)
        if w is None:
            return None
        if point_hyperplane_distance(w.v, w.h) < r + DELTA_NUM:
            return None
        out.append(w)
    return out[0], out[1]


def ping_pong_pair(
    g1: IntMatrix, g2: IntMatrix, k: int, r: float, eps: float
) -> PingPongCertificate | None:
    """Certificate that (g1, g2) plays ping-pong on P(wedge^k(R^n)).

    Requires both generators (r, eps)-very proximal and every attracting
    point of one generator at least r away from every repelling
    hyperplane of the other.  A certificate implies the group generated
    is free.
    """
    vp1 = very_proximal(g1, k, r, eps)
    if vp1 is None:
        return None
    vp2 = very_proximal(g2, k, r, eps)
    if vp2 is None:
        return None
    witnesses = (vp1[0], vp1[1], vp2[0], vp2[1])
    separations = [point_hyperplane_distance(w.v, w.h) for w in witnesses]
    for wa in vp1:
        for wb in vp2:
            separations.append(point_hyperplane_distance(wa.v, wb.h))
            separations.append(point_hyperplane_distance(wb.v, wa.h))
    min_sep = min(separations)
    if min_sep < r + DELTA_NUM:
        return None
    return PingPongCertificate(r, eps, witnesses, min_sep)


def _entries_2x2(g: IntMatrix) -> tuple[int, int, int, int]:
    if g.n != 2:
        raise ConfigError(f"expected a 2x2 matrix, got n = {g.n}")
    (a, b), (c, d) = g.entries
    return a, b, c, d


def sl2_fixed_points(g: IntMatrix) -> tuple[float, float]:
    """(attracting, repelling) boundary fixed points of a hyperbolic g.

    Roots of c x^2 + (d - a) x - b = 0; the attracting one has Moebius
    derivative 1/(c x + d)^2 of modulus < 1.  For c = 0 the fixed point
    at infinity is returned as math.inf with the appropriate role.
    """
    a, b, c, d = _entries_2x2(g)
    tr = a + d
    if abs(tr) <= 2:
        raise ConfigError(f"fixed points require |trace| > 2, got trace = {tr}")
    if c == 0:
        finite = b / (d - a)  # a != d since |a + d| > 2 and a*d = 1
        # derivative at infinity is (a/d)^2... attracting at inf iff |a| > |d|
        if abs(a) > abs(d):
            return math.inf, finite
        return finite, math.inf
    disc = math.sqrt(tr * tr - 4)
    r1 = ((a - d) + disc) / (2 * c)
    r2 = ((a - d) - disc) / (2 * c)
    # attracting root: |c x + d| > 1
    if abs(c * r1 + d) > 1:
        return r1, r2
    return r2, r1


def isometric_circles(g: IntMatrix) -> tuple[Circle, Circle]:
    """(circle of g, circle of g^-1): centers -d/c and a/c, radius 1/|c|."""
    a, b, c, d = _entries_2x2(g)
    if c == 0:
        raise ConfigError("isometric circles require c != 0")
    return Circle(-d / c, 1 / abs(c)), Circle(a / c, 1 / abs(c))


def _mobius(g: IntMatrix, z: complex) -> complex:
    a, b, c, d = _entries_2x2(g)
    return (a * z + b) / (c * z + d)


def _mapping_spot_check(g1: IntMatrix, g2: IntMatrix, circles, samples: int = 64) -> bool:
    """g_i must map the exterior of C_i into the (closed) interior of C_{i+2}."""
    actions = [
        (g1, 0, 2),
        (g2, 1, 3),
        (inverse(g1), 2, 0),
        (inverse(g2), 3, 1),
    ]
    angles = [2 * math.pi * t / samples for t in range(samples)]
    for g, src, dst in actions:
        target = circles[dst]
        for j, circ in enumerate(circles):
            pts = [circ.center + circ.radius * cmath.exp(1j * t) for t in angles]
            for z in pts:
                w = _mobius(g, z)
                dist = abs(w - target.center)
                if j == src:
                    # the source boundary maps exactly onto the target boundary
                    if dist > target.radius * (1 + 1e-9) + 1e-12:
                        return False
                elif dist > target.radius + DELTA_NUM:
                    return False
    return True


def schottky_sl2(g1: IntMatrix, g2: IntMatrix) -> SchottkyCertificate | None:
    """Schottky certificate from disjoint isometric circles, or None.

    Needs both generators hyperbolic with c != 0, the four circles
    pairwise disjoint on the boundary line with positive gap, and the
    exterior-to-interior mapping property verified on sampled boundary
    points.
    """
    for g in (g1, g2):
        a, _, c, d = _entries_2x2(g)
        if abs(a + d) <= 2 or c == 0:
            return None
    c1, c3 = isometric_circles(g1)
    c2, c4 = isometric_circles(g2)
    circles = (c1, c2, c3, c4)
    gaps = []
    for i in range(4):
        for j in range(i + 1, 4):
            gaps.append(
                abs(circles[i].center - circles[j].center)
                - circles[i].radius
                - circles[j].radius
            )
    min_gap = min(gaps)
    if min_gap <= DELTA_NUM:
        return None
    if not _mapping_spot_check(g1, g2, circles):
        return None
    a1, b1 = sl2_fixed_points(g1)
    a2, b2 = sl2_fixed_points(g2)
    return SchottkyCertificate(
        (g1.trace(), g2.trace()), (a1, b1, a2, b2), circles, min_gap
    )


def hausdorff_upper_bound(cert: SchottkyCertificate) -> float | None:
    """Upper bound -log 3 / (2 log lambda) on the limit-set dimension.

    lambda is the worst ratio radius(i) / (|center(i) - center(j)| -
    radius(j)) over ordered pairs of distinct circles.  Returns None when
    lambda falls outside (0, 1) and the bound is vacuous.
    """
    lam = 0.0
    for i, ci in enumerate(cert.circles):
        for j, cj in enumerate(cert.circles):
            if i == j:
                continue
            denom = abs(ci.center - cj.center) - cj.radius
            if denom <= 0:
                return None
            lam = max(lam, ci.radius / denom)
    if not 0.0 < lam < 1.0:
        return None
    return -math.log(3.0) / (2.0 * math.log(lam))
