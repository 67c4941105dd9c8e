"""Fibered polytope bodies over a cube and their maps onto half-balls.

A convexoid is a family of convex polytope fibers over the cube
Q = [0,1] x [-1,1]^(nb-1), bounded with nonempty interior over interior base
points and over the interior of the bottom face {0} x [-1,1]^(nb-1).  Such a
body is homeomorphic to a closed half-ball with bottom going to bottom; two
of them glued along their bottoms give a closed ball.

Polytope data is exact rational; the half-ball and ball maps emit floats
with explicit tolerances (exit times by bisection to ``exit_tol``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import linalg, lp

__all__ = [
    "HPolytope",
    "ConvexoidSpec",
    "ExitTime",
    "UnboundedError",
    "DegenerateError",
    "DomainError",
    "StarConvexityViolation",
    "GluingError",
    "vertices",
    "barycenter",
    "center_fibers",
    "radial_project_base",
    "join_fiber",
    "exit_time",
    "scan_ray",
    "to_half_ball",
    "from_half_ball",
    "HalfBallMap",
    "glue",
    "GluedBallMap",
]

EXIT_TOL = Fraction(1, 10**10)
SLACK = Fraction(1, 10**9)
RATIONALIZE_DEN = 10**12


class UnboundedError(ValueError):
    """Raised when a polytope expected to be bounded is not."""


class DegenerateError(ValueError):
    """Raised when a full-dimensional polytope is required."""


class DomainError(ValueError):
    """Raised when a point lies outside the domain of a map."""


class StarConvexityViolation(RuntimeError):
    """Membership along a ray re-entered the body; hypothesis violation."""


class GluingError(ValueError):
    """The bottom identification disagrees beyond tolerance."""


def rationalize(value) -> Fraction:
    """Exact value for rationals; bounded-denominator rational for floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(value).limit_denominator(RATIONALIZE_DEN)


def rationalize_point(point) -> tuple[Fraction, ...]:
    return tuple(rationalize(v) for v in point)


def _interval_bounds(poly: "HPolytope") -> tuple[Fraction, Fraction]:
    """Exact [lo, hi] of a bounded one-dimensional polytope."""
    cached = poly._cache.get("interval")
    if cached is None:
        lo = hi = None
        for (a,), b in poly.constraints:
            v = b / a
            if a > 0:
                hi = v if hi is None else min(hi, v)
            else:
                lo = v if lo is None else max(lo, v)
        if lo is None or hi is None:
            raise UnboundedError("one-dimensional fiber is unbounded")
        cached = (lo, hi)
        poly._cache["interval"] = cached
    return cached


# ---------------------------------------------------------------------------
# polytopes


class HPolytope:
    """Intersection of half-spaces normal . y <= offset in dimension ``dim``."""

    __slots__ = ("dim", "constraints", "_cache")

    def __init__(self, dim: int, constraints: Sequence):
        clean = []
        for normal, offset in constraints:
            normal = tuple(Fraction(v) for v in normal)
            if len(normal) != dim:
                raise ValueError("constraint normal has the wrong dimension")
            if not any(normal):
                raise ValueError("constraint normal is zero")
            clean.append((normal, Fraction(offset)))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "constraints", tuple(clean))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("HPolytope is immutable")

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, n_constraints={len(self.constraints)})"

    def contains_point(self, point, slack: Fraction = Fraction(0)) -> bool:
        point = tuple(point)
        return all(
            linalg.dot(normal, point) <= offset + slack
            for normal, offset in self.constraints
        )

    def scaled(self, factor) -> "HPolytope":
        factor = Fraction(factor)
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        return HPolytope(
            self.dim, [(n, o * factor) for n, o in self.constraints]
        )

    def translated(self, shift) -> "HPolytope":
        shift = tuple(Fraction(v) for v in shift)
        return HPolytope(
            self.dim,
            [(n, o + linalg.dot(n, shift)) for n, o in self.constraints],
        )


def _recession_direction(poly: HPolytope):
    """A nonzero direction staying inside all half-spaces, or None."""
    a_ub = [list(n) for n, _ in poly.constraints]
    b_ub = [Fraction(0)] * len(a_ub)
    box = []
    for i in range(poly.dim):
        row = [Fraction(0)] * poly.dim
        row[i] = Fraction(1)
        box.append(row)
    for i in range(poly.dim):
        for sign in (1, -1):
            obj = [Fraction(0)] * poly.dim
            obj[i] = Fraction(sign)
            res = lp.lp_maximize(
                obj,
                a_ub + box + [[-v for v in row] for row in box],
                b_ub + [Fraction(1)] * poly.dim + [Fraction(1)] * poly.dim,
            )
            if res.status == lp.OPTIMAL and res.value > 0:
                return res.x
    return None


def vertices(poly: HPolytope) -> list[tuple[Fraction, ...]]:
    """Exact vertex set by exhaustive dim-subset constraint intersection."""
    if "vertices" in poly._cache:
        return poly._cache["vertices"]
    if poly.dim == 0:
        poly._cache["vertices"] = [()]
        return [()]
    if _recession_direction(poly) is not None:
        raise UnboundedError("polytope is unbounded")
    found = []
    seen = set()
    for subset in itertools.combinations(poly.constraints, poly.dim):
        mat = [list(n) for n, _ in subset]
        if linalg.det(mat) == 0:
            continue
        point = linalg.solve(mat, [o for _, o in subset])
        if point is None:
            continue
        point = tuple(point)
        if point not in seen and poly.contains_point(point):
            seen.add(point)
            found.append(point)
    poly._cache["vertices"] = found
    return found


def _hull_order_2d(points):
    """Counterclockwise convex hull order (Andrew's monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _polygon_centroid(ordered):
    """Area and centroid of a CCW polygon, exact."""
    area2 = Fraction(0)
    cx = Fraction(0)
    cy = Fraction(0)
    for (x0, y0), (x1, y1) in zip(ordered, ordered[1:] + ordered[:1]):
        cr = x0 * y1 - x1 * y0
        area2 += cr
        cx += (x0 + x1) * cr
        cy += (y0 + y1) * cr
    if area2 == 0:
        return Fraction(0), None
    return area2 / 2, (cx / (3 * area2), cy / (3 * area2))


def _facet_loop(verts3, normal):
    """Vertices of a planar facet in angular order around their mean."""
    drop = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != drop]
    flat = [(v[keep[0]], v[keep[1]]) for v in verts3]
    cx = sum(p[0] for p in flat) / len(flat)
    cy = sum(p[1] for p in flat) / len(flat)

    import functools

    def half(p):
        dx, dy = p[0] - cx, p[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def compare(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        cr = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx)
        if cr > 0:
            return -1
        if cr < 0:
            return 1
        return 0

    order = sorted(range(len(flat)), key=functools.cmp_to_key(
        lambda i, j: compare(flat[i], flat[j])
    ))
    return [verts3[i] for i in order]


def _tet_volume(a, b, c, d):
    mat = [
        [b[i] - a[i] for i in range(3)],
        [c[i] - a[i] for i in range(3)],
        [d[i] - a[i] for i in range(3)],
    ]
    return abs(linalg.det(mat)) / 6


def barycenter(poly: HPolytope) -> tuple[Fraction, ...]:
    """Exact volume-weighted centroid of a full-dimensional polytope.

    Fan decomposition from the lexicographically least vertex; implemented
    for fiber dimensions up to 3, which covers desk scale.
    """
    verts = vertices(poly)
    if not verts:
        raise DegenerateError("empty polytope")
    m = poly.dim
    if m == 0:
        return ()
    diffs = [tuple(v[i] - verts[0][i] for i in range(m)) for v in verts[1:]]
    if linalg.rank(diffs) < m:
        raise DegenerateError("polytope is not full-dimensional")
    if m == 1:
        lo = min(v[0] for v in verts)
        hi = max(v[0] for v in verts)
        return ((lo + hi) / 2,)
    if m == 2:
        ordered = _hull_order_2d(verts)
        _, centroid = _polygon_centroid(ordered)
        return centroid
    if m == 3:
        apex = min(verts)
        total = Fraction(0)
        acc = [Fraction(0)] * 3
        for normal, offset in poly.constraints:
            on_facet = [v for v in verts if linalg.dot(normal, v) == offset]
            if len(on_facet) < 3 or apex in on_facet:
                continue
            loop = _facet_loop(on_facet, normal)
            for b, c in zip(loop[1:], loop[2:]):
                vol = _tet_volume(apex, loop[0], b, c)
                if vol == 0:
                    continue
                total += vol
                for i in range(3):
                    acc[i] += vol * (apex[i] + loop[0][i] + b[i] + c[i]) / 4
        if total == 0:
            raise DegenerateError("polytope has zero volume")
        return tuple(a / total for a in acc)
    raise ValueError("barycenter implemented for fiber dimension <= 3")


def _centroid_any(poly: HPolytope) -> tuple[Fraction, ...]:
    """Centroid with respect to the polytope's own affine hull.

    Needed for the centering step on degenerate boundary fibers; exact for
    hull dimension <= 2, which is all the boundary strata used here.
    """
    verts = vertices(poly)
    if not verts:
        raise DegenerateError("empty polytope")
    if poly.dim == 0 or len(verts) == 1:
        return verts[0]
    base = verts[0]
    diffs = [tuple(v[i] - base[i] for i in range(poly.dim)) for v in verts[1:]]
    frame = linalg.orthogonalize(diffs)
    d = len(frame)
    if d == poly.dim:
        return barycenter(poly)
    if d == 0:
        return base
    coords = []
    for v in verts:
        delta = tuple(v[i] - base[i] for i in range(poly.dim))
        coords.append(
            tuple(
                linalg.dot(delta, f) / linalg.dot(f, f) for f in frame
            )
        )
    if d == 1:
        lo = min(c[0] for c in coords)
        hi = max(c[0] for c in coords)
        mid = ((lo + hi) / 2,)
    elif d == 2:
        ordered = _hull_order_2d(coords)
        area, centroid = _polygon_centroid(ordered)
        if centroid is None:
            xs = sorted(set(coords))
            lo, hi = xs[0], xs[-1]
            centroid = tuple((a + b) / 2 for a, b in zip(lo, hi))
        mid = centroid
    else:
        raise ValueError("degenerate centroid implemented for hull dim <= 2")
    out = list(base)
    for c, f in zip(mid, frame):
        for i in range(poly.dim):
            out[i] += c * f[i]
    return tuple(out)


# ---------------------------------------------------------------------------
# convexoid specs


@dataclass(frozen=True)
class ExitTime:
    direction: tuple
    t: Fraction


class ConvexoidSpec:
    """Cube base plus a deterministic continuous fiber-polytope oracle."""

    def __init__(self, base_dim: int, fiber_dim: int, fiber_oracle: Callable):
        if base_dim < 1 or fiber_dim < 1:
            raise ValueError("base and fiber dimensions must be positive")
        self.base_dim = base_dim
        self.fiber_dim = fiber_dim
        self._oracle = fiber_oracle
        self._memo: dict = {}

    @property
    def dim(self) -> int:
        return self.base_dim + self.fiber_dim

    def origin(self) -> tuple[Fraction, ...]:
        return (Fraction(0),) * self.base_dim

    def fiber(self, p) -> HPolytope:
        key = rationalize_point(p)
        poly = self._memo.get(key)
        if poly is None:
            poly = self._oracle(key)
            if poly.dim != self.fiber_dim:
                raise ValueError("oracle returned a fiber of the wrong dimension")
            self._memo[key] = poly
        return poly

    def in_base(self, p, slack: Fraction = Fraction(0)) -> bool:
        if not -slack <= p[0] <= 1 + slack:
            return False
        return all(-1 - slack <= v <= 1 + slack for v in p[1:])


def base_gauge(p) -> Fraction:
    """Minkowski gauge of the base cube as seen from the bottom center."""
    return max([p[0]] + [abs(v) for v in p[1:]])


def radial_project_base(p) -> tuple[tuple[Fraction, ...], Fraction]:
    """Radial projection onto the distinguished boundary, with its scale s.

    The distinguished boundary is the cube boundary minus the open bottom
    face; the ray from the bottom center through p meets it exactly once.
    """
    p = rationalize_point(p)
    if p[0] < 0 or p[0] > 1 or any(abs(v) > 1 for v in p[1:]):
        raise DomainError("point lies outside the base cube")
    g = base_gauge(p)
    if g == 0:
        raise ValueError("the bottom center has no radial projection")
    return tuple(v / g for v in p), g


def center_fibers(spec: ConvexoidSpec) -> ConvexoidSpec:
    """New spec whose fibers are translated to have centroid zero."""

    def oracle(p):
        raw = spec.fiber(p)
        return raw.translated([-c for c in _centroid_any(raw)])

    return ConvexoidSpec(spec.base_dim, spec.fiber_dim, oracle)


def _mink_vertices(poly_a: HPolytope, poly_b: HPolytope, s: Fraction):
    """Vertices of (1-s) * A  (+)  s * B (Minkowski combination)."""
    va = vertices(poly_a)
    vb = vertices(poly_b)
    out = set()
    for a in va:
        for b in vb:
            out.add(tuple((1 - s) * x + s * y for x, y in zip(a, b)))
    return sorted(out)


def _hull_h_rep(points, dim) -> HPolytope:
    """H-representation of a vertex hull, exact, for dim <= 3."""
    if dim == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        return HPolytope(1, [((Fraction(1),), hi), ((Fraction(-1),), -lo)])
    if dim == 2:
        ordered = _hull_order_2d(points)
        cons = []
        if len(ordered) == 1:
            p = ordered[0]
            return HPolytope(2, [
                ((Fraction(1), Fraction(0)), p[0]),
                ((Fraction(-1), Fraction(0)), -p[0]),
                ((Fraction(0), Fraction(1)), p[1]),
                ((Fraction(0), Fraction(-1)), -p[1]),
            ])
        if len(ordered) == 2:
            (x0, y0), (x1, y1) = ordered
            d = (x1 - x0, y1 - y0)
            n = (d[1], -d[0])
            cons.append((n, n[0] * x0 + n[1] * y0))
            cons.append(((-n[0], -n[1]), -(n[0] * x0 + n[1] * y0)))
            cons.append((d, d[0] * x1 + d[1] * y1))
            cons.append(((-d[0], -d[1]), -(d[0] * x0 + d[1] * y0)))
            return HPolytope(2, cons)
        for a, b in zip(ordered, ordered[1:] + ordered[:1]):
            d = (b[0] - a[0], b[1] - a[1])
            n = (d[1], -d[0])  # outward for counterclockwise order
            cons.append((n, n[0] * a[0] + n[1] * a[1]))
        return HPolytope(2, cons)
    if dim == 3:
        cons = {}
        pts = sorted(set(points))
        for trio in itertools.combinations(pts, 3):
            a, b, c = trio
            u = [b[i] - a[i] for i in range(3)]
            v = [c[i] - a[i] for i in range(3)]
            normal = (
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            )
            if not any(normal):
                continue
            offset = linalg.dot(normal, a)
            values = [linalg.dot(normal, p) - offset for p in pts]
            if all(val <= 0 for val in values):
                pass
            elif all(val >= 0 for val in values):
                normal = tuple(-x for x in normal)
                offset = -offset
            else:
                continue
            lead = next(x for x in normal if x)
            scale = Fraction(1) / abs(lead)
            key = tuple(x * scale for x in normal)
            cons[key] = (normal, offset)
        if not cons:
            # all points affinely dependent; box the degenerate hull
            cons_list = []
            for i in range(3):
                lo = min(p[i] for p in pts)
                hi = max(p[i] for p in pts)
                e = [Fraction(0)] * 3
                e[i] = Fraction(1)
                cons_list.append((tuple(e), hi))
                cons_list.append((tuple(-x for x in e), -lo))
            return HPolytope(3, cons_list)
        return HPolytope(3, list(cons.values()))
    raise ValueError("hull H-representation implemented for dim <= 3")


def join_fiber(spec: ConvexoidSpec, p) -> HPolytope:
    """Fiber of the joined body: (1-s) E(0) (+) s E(P(p)).

    ``spec`` must already be centered.  The joined body is the union of all
    segments from the bottom-center fiber to the fibers over the
    distinguished boundary, and its slice over p is this Minkowski
    combination.
    """
    p = rationalize_point(p)
    origin_fiber = spec.fiber(spec.origin())
    if all(v == 0 for v in p):
        return origin_fiber
    q, s = radial_project_base(p)
    outer = spec.fiber(q)
    if s == 1:
        return outer
    points = _mink_vertices(origin_fiber, outer, s)
    return _hull_h_rep(points, spec.fiber_dim)


# ---------------------------------------------------------------------------
# rays, exit times, half-ball map


class _Ray:
    """Membership oracle along the ray t -> t * direction, t >= 0."""

    def __init__(self, fiber_at: Callable, base_dim: int, direction):
        self.base_dim = base_dim
        self.v = rationalize_point(direction)
        self.vb = self.v[:base_dim]
        self.vf = self.v[base_dim:]
        if not any(self.v):
            raise ValueError("ray direction is zero")
        self.g = base_gauge(self.vb) if any(self.vb) else Fraction(0)
        self.E0 = fiber_at(tuple(Fraction(0) for _ in range(base_dim)))
        if self.g > 0:
            q = tuple(x / self.g for x in self.vb)
            self.E1 = fiber_at(q)
        else:
            self.E1 = None

    def member(self, t: Fraction) -> bool:
        if t < 0:
            return False
        p = tuple(t * x for x in self.vb)
        if p[0] < 0 or p[0] > 1 or any(abs(x) > 1 for x in p[1:]):
            return False
        y = tuple(t * x for x in self.vf)
        s = t * self.g
        if s == 0:
            return self.E0.contains_point(y)
        if s == 1:
            return self.E1.contains_point(y)
        return self._combo_feasible(s, y)

    def _combo_feasible(self, s: Fraction, y) -> bool:
        m = len(y)
        if m == 1:
            lo0, hi0 = _interval_bounds(self.E0)
            lo1, hi1 = _interval_bounds(self.E1)
            lo = (1 - s) * lo0 + s * lo1
            hi = (1 - s) * hi0 + s * hi1
            return lo <= y[0] <= hi
        # substitute y0 = (y - s*y1)/(1 - s): feasibility in y1 alone
        a_ub = []
        b_ub = []
        for normal, offset in self.E0.constraints:
            a_ub.append([-s * v for v in normal])
            b_ub.append((1 - s) * offset - linalg.dot(normal, y))
        for normal, offset in self.E1.constraints:
            a_ub.append(list(normal))
            b_ub.append(offset)
        return lp.lp_feasible(a_ub, b_ub)

    def exit_scale(self, tol: Fraction = EXIT_TOL) -> Fraction:
        """sup{t : t * direction in the joined body}, by doubling + bisection."""
        hi = Fraction(1)
        steps = 0
        while self.member(hi):
            hi *= 2
            steps += 1
            if steps > 80:
                raise UnboundedError("ray never leaves the joined body")
        lo = Fraction(0)
        if hi > 1:
            lo = hi / 2
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if self.member(mid):
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


def exit_time(spec: ConvexoidSpec, direction, tol: Fraction = EXIT_TOL) -> ExitTime:
    """Exit time of a ray from the joined body of a centered spec."""
    ray = _Ray(spec.fiber, spec.base_dim, direction)
    return ExitTime(tuple(direction), ray.exit_scale(tol))


def scan_ray(spec: ConvexoidSpec, direction, ts) -> list[bool]:
    """Membership pattern along a ray; must be a prefix of True values."""
    ray = _Ray(spec.fiber, spec.base_dim, direction)
    flags = [ray.member(rationalize(t)) for t in ts]
    if any(
        later and not earlier
        for earlier, later in zip(flags, flags[1:])
    ):
        raise StarConvexityViolation(
            f"ray {direction} re-entered the body: {flags}"
        )
    return flags


class HalfBallMap:
    """Homeomorphism from a convexoid body onto the closed unit half-ball.

    Pipeline: center fibers, radially rescale each fiber onto the joined
    body's fiber, then divide by the exit time of the ray through the point.
    The bottom (base first coordinate 0) lands on the half-ball bottom.
    """

    def __init__(self, spec: ConvexoidSpec, exit_tol: Fraction = EXIT_TOL,
                 slack: Fraction = SLACK):
        self.spec = spec
        self.exit_tol = exit_tol
        self.slack = slack
        self.degenerate_rescales = 0
        self._centroids: dict = {}
        self._centered_memo: dict = {}

    # -- centered fibers ----------------------------------------------------

    def centroid(self, p) -> tuple[Fraction, ...]:
        key = rationalize_point(p)
        c = self._centroids.get(key)
        if c is None:
            c = _centroid_any(self.spec.fiber(key))
            self._centroids[key] = c
        return c

    def centered_fiber(self, p) -> HPolytope:
        key = rationalize_point(p)
        poly = self._centered_memo.get(key)
        if poly is None:
            poly = self.spec.fiber(key).translated(
                [-c for c in self.centroid(key)]
            )
            self._centered_memo[key] = poly
        return poly

    # -- radial rescale between the fiber and the joined fiber --------------

    def _lambda_fiber(self, poly: HPolytope, y) -> Fraction:
        """sup{l >= 0 : l * y in poly} for a centered bounded fiber."""
        best = None
        for normal, offset in poly.constraints:
            d = linalg.dot(normal, y)
            if d > 0:
                lam = offset / d
                if best is None or lam < best:
                    best = lam
        if best is None:
            raise UnboundedError("radial function undefined; fiber unbounded")
        return best

    def _lambda_joined(self, p, y) -> Fraction:
        """sup{l : l * y in joined fiber over p}, via one exact LP."""
        key = rationalize_point(p)
        if all(v == 0 for v in key):
            return self._lambda_fiber(self.centered_fiber(key), y)
        q, s = radial_project_base(key)
        if s == 1:
            return self._lambda_fiber(self.centered_fiber(key), y)
        e0 = self.centered_fiber(self.spec.origin())
        e1 = self.centered_fiber(q)
        m = len(y)
        if m == 1:
            lo0, hi0 = _interval_bounds(e0)
            lo1, hi1 = _interval_bounds(e1)
            lo = (1 - s) * lo0 + s * lo1
            hi = (1 - s) * hi0 + s * hi1
            return hi / y[0] if y[0] > 0 else lo / y[0]
        # variables: lam, y1; y0 substituted as (lam*y - s*y1)/(1 - s)
        a_ub = []
        b_ub = []
        for normal, offset in e0.constraints:
            a_ub.append(
                [linalg.dot(normal, y)] + [-s * v for v in normal]
            )
            b_ub.append((1 - s) * offset)
        for normal, offset in e1.constraints:
            a_ub.append([Fraction(0)] + list(normal))
            b_ub.append(offset)
        obj = [Fraction(1)] + [Fraction(0)] * m
        res = lp.lp_maximize(obj, a_ub, b_ub)
        if res.status != lp.OPTIMAL:
            raise UnboundedError("joined fiber radial function undefined")
        return res.value

    def _rescale_report(self, lam_from, lam_to):
        # 0 on the boundary of either body means the radial map degenerates;
        # perturb by the slack and carry on, as the hypotheses put such
        # points over the distinguished boundary only.
        if lam_from <= 0 or lam_to <= 0:
            self.degenerate_rescales += 1
        if lam_from <= 0:
            lam_from = self.slack
        if lam_to <= 0:
            lam_to = self.slack
        return lam_from, lam_to

    # -- forward / inverse ---------------------------------------------------

    def forward(self, x) -> np.ndarray:
        nb = self.spec.base_dim
        x = rationalize_point(x)
        p, y = x[:nb], x[nb:]
        if not self.spec.in_base(p, self.slack):
            raise DomainError("base point outside the cube")
        p = tuple(
            min(max(v, lo), hi)
            for v, (lo, hi) in zip(
                p,
                [(Fraction(0), Fraction(1))]
                + [(Fraction(-1), Fraction(1))] * (nb - 1),
            )
        )
        if not self.spec.fiber(p).contains_point(y, self.slack):
            raise DomainError("fiber point outside its polytope")
        yc = tuple(a - b for a, b in zip(y, self.centroid(p)))
        if any(yc):
            # gauge fraction in the fiber becomes gauge fraction in the
            # joined fiber: y' = y * (radial of joined / radial of fiber)
            lam_e = self._lambda_fiber(self.centered_fiber(p), yc)
            lam_j = self._lambda_joined(p, yc)
            lam_e, lam_j = self._rescale_report(lam_e, lam_j)
            yj = tuple(v * lam_j / lam_e for v in yc)
        else:
            yj = yc
        point = p + yj
        if not any(point):
            return np.zeros(self.spec.dim)
        ray = _Ray(self.centered_fiber, nb, point)
        t_star = ray.exit_scale(self.exit_tol)
        arr = np.array([float(v) for v in point])
        return arr / (float(t_star) * float(np.linalg.norm(arr)))

    def inverse(self, h) -> tuple[float, ...]:
        nb = self.spec.base_dim
        h = np.array(h, dtype=float)
        norm = float(np.linalg.norm(h))
        if norm > 1 + float(self.slack):
            raise DomainError(f"half-ball point has norm {norm} > 1")
        if h[0] < -float(self.slack):
            raise DomainError("half-ball point has negative height")
        h[0] = max(h[0], 0.0)
        if norm < 1e-15:
            p = self.spec.origin()
            return tuple(float(v) for v in p) + tuple(
                float(v) for v in self.centroid(p)
            )
        direction = rationalize_point(h)
        ray = _Ray(self.centered_fiber, nb, direction)
        t_star = ray.exit_scale(self.exit_tol)
        point = tuple(v * t_star * rationalize(norm) for v in direction)
        p = point[:nb]
        p = tuple(
            min(max(v, lo), hi)
            for v, (lo, hi) in zip(
                p,
                [(Fraction(0), Fraction(1))]
                + [(Fraction(-1), Fraction(1))] * (nb - 1),
            )
        )
        yj = point[nb:]
        if any(yj):
            lam_e = self._lambda_fiber(self.centered_fiber(p), yj)
            lam_j = self._lambda_joined(p, yj)
            lam_e, lam_j = self._rescale_report(lam_e, lam_j)
            yc = tuple(v * lam_e / lam_j for v in yj)
        else:
            yc = yj
        y = tuple(a + b for a, b in zip(yc, self.centroid(p)))
        return tuple(float(v) for v in p) + tuple(float(v) for v in y)


def to_half_ball(spec: ConvexoidSpec, x, exit_tol: Fraction = EXIT_TOL):
    return _half_ball_map(spec, exit_tol).forward(x)


def from_half_ball(spec: ConvexoidSpec, h, exit_tol: Fraction = EXIT_TOL):
    return _half_ball_map(spec, exit_tol).inverse(h)


def _half_ball_map(spec: ConvexoidSpec, exit_tol: Fraction) -> HalfBallMap:
    cached = getattr(spec, "_half_ball_map", None)
    if cached is None or cached.exit_tol != exit_tol:
        cached = HalfBallMap(spec, exit_tol)
        spec._half_ball_map = cached
    return cached


# ---------------------------------------------------------------------------
# gluing two convexoids into a ball


def _half_ball_to_cylinder(h):
    h = np.asarray(h, dtype=float)
    norm = float(np.linalg.norm(h))
    if norm < 1e-15:
        return 0.0, np.zeros(len(h) - 1)
    gauge = max(max(h[0], 0.0), float(np.linalg.norm(h[1:])))
    c = h * (norm / gauge)
    return float(c[0]), c[1:]


def _cylinder_to_half_ball(u, w):
    c = np.concatenate(([u], np.asarray(w, dtype=float)))
    norm = float(np.linalg.norm(c))
    if norm < 1e-15:
        return c
    gauge = max(max(c[0], 0.0), float(np.linalg.norm(c[1:])))
    return c * (gauge / norm)


def _cylinder_to_ball(a, w):
    c = np.concatenate(([a - 1.0], np.asarray(w, dtype=float)))
    norm = float(np.linalg.norm(c))
    if norm < 1e-15:
        return c
    gauge = max(abs(c[0]), float(np.linalg.norm(c[1:])))
    return c * (gauge / norm)


def _ball_to_cylinder(b):
    b = np.asarray(b, dtype=float)
    norm = float(np.linalg.norm(b))
    if norm < 1e-15:
        return 1.0, b[1:]
    gauge = max(abs(b[0]), float(np.linalg.norm(b[1:])))
    c = b * (norm / gauge)
    return float(c[0]) + 1.0, c[1:]


class GluedBallMap:
    """Two convexoids glued along their bottoms, mapped onto a closed ball.

    Each side goes to a half-ball, then to a unit cylinder with the bottom
    at the shared slice; the E cylinder occupies axis [0,1], the F cylinder
    [1,2], with the F disk factor re-coordinated through the bottom
    identification so identified points agree; finally the long cylinder is
    radially rescaled onto the ball.
    """

    def __init__(self, e_spec, f_spec, phi, phi_inverse=None,
                 bottom_samples=(), tol=1e-6, exit_tol: Fraction = EXIT_TOL):
        if e_spec.dim != f_spec.dim:
            raise ValueError("the two convexoids have different dimensions")
        self.dim = e_spec.dim
        self.e_map = HalfBallMap(e_spec, exit_tol)
        self.f_map = HalfBallMap(f_spec, exit_tol)
        self.phi = phi
        self.phi_inverse = phi_inverse
        self.tol = tol
        for x in bottom_samples:
            a = self.forward("E", x)
            b = self.forward("F", phi(x))
            err = float(np.linalg.norm(a - b))
            if err > tol:
                raise GluingError(
                    f"bottom identification disagrees by {err:.3g} at {x}"
                )

    def _psi(self, w):
        """F-side disk coordinate -> shared (E-side) disk coordinate."""
        if self.phi_inverse is None:
            raise GluingError("gluing needs phi_inverse for F-side evaluation")
        x_f = self.f_map.inverse(np.concatenate(([0.0], w)))
        x_e = self.phi_inverse(x_f)
        h = self.e_map.forward(x_e)
        return h[1:]

    def _psi_inverse(self, w):
        x_e = self.e_map.inverse(np.concatenate(([0.0], w)))
        x_f = self.phi(x_e)
        h = self.f_map.forward(x_f)
        return h[1:]

    def forward(self, side: str, x) -> np.ndarray:
        if side == "E":
            u, w = _half_ball_to_cylinder(self.e_map.forward(x))
            return _cylinder_to_ball(1.0 - u, w)
        if side == "F":
            u, w = _half_ball_to_cylinder(self.f_map.forward(x))
            return _cylinder_to_ball(1.0 + u, self._psi(w))
        raise ValueError(f"unknown side {side!r}")

    def inverse(self, ball_point):
        b = np.asarray(ball_point, dtype=float)
        if float(np.linalg.norm(b)) > 1 + 1e-9:
            raise DomainError("point outside the closed ball")
        a, w = _ball_to_cylinder(b)
        if a <= 1.0:
            h = _cylinder_to_half_ball(1.0 - a, w)
            return "E", self.e_map.inverse(h)
        h = _cylinder_to_half_ball(a - 1.0, self._psi_inverse(w))
        return "F", self.f_map.inverse(h)


def glue(e_spec, f_spec, phi, phi_inverse=None, bottom_samples=(),
         tol=1e-6, exit_tol: Fraction = EXIT_TOL) -> GluedBallMap:
    """Build the ball evaluator for two convexoids with identified bottoms."""
    return GluedBallMap(
        e_spec, f_spec, phi, phi_inverse, bottom_samples, tol, exit_tol
    )
