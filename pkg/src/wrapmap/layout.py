"""Stress-based graph layout on the plane, the unit sphere and the unit
torus, minimised by stochastic pairwise gradient descent.

The objective is sum over node pairs of w_ij * (delta_ij - d_ij)^2 where
delta are graph-theoretic target distances, w_ij = 1 / delta_ij^2, and d is
the geometry's distance: Euclidean on the plane, great-circle arc length on
the sphere, and on the torus the pair term uses whichever of the 9 wrapped
copies of the second node gives the smallest squared residual.

Each solver sweep visits every pair once in shuffled order and moves both
endpoints along the pair's descent direction with step mu = min(w * eta, 1),
eta annealed geometrically. Sphere moves are made in the tangent plane and
renormalized; torus positions are rewrapped into [0, 1)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DisconnectedGraphError
from .graphs import Graph, all_pairs_distances
from .sphere import clamp

TORUS_ALPHAS = tuple((ax, ay) for ax in (-1, 0, 1) for ay in (-1, 0, 1))


class Geometry(str, Enum):
    PLANE = "plane"
    SPHERE = "sphere"
    TORUS = "torus"


@dataclass(frozen=True)
class IdealDistances:
    """Symmetric target-distance and weight matrices (diagonal zero)."""

    delta: np.ndarray
    weight: np.ndarray


@dataclass(frozen=True)
class Layout:
    geometry: Geometry
    positions: np.ndarray  # (n, 2) plane/torus, (n, 3) sphere

    def __post_init__(self) -> None:
        pos = np.asarray(self.positions, dtype=float)
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)


@dataclass(frozen=True)
class SgdSchedule:
    """Annealing schedule; eta_max = None derives the saturation step size
    (max target distance squared) from the ideal distances."""

    iterations: int = 60
    eta_max: float | None = None
    eta_min: float = 0.01
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.eta_min <= 0:
            raise ValueError("eta_min must be positive")
        if self.eta_max is not None and self.eta_max < self.eta_min:
            raise ValueError("eta_max must be >= eta_min")


def ideal_distances(g: Graph, geometry: Geometry) -> IdealDistances:
    """Target distances from all-pairs BFS lengths.

    Sphere targets are scaled by pi / diameter so the longest equals pi;
    torus targets by 1 / (2 * diameter) so the longest equals the half-domain
    wrap distance; plane targets stay in hop units.
    """
    hops = all_pairs_distances(g).astype(float)
    diam = hops.max()
    if geometry is Geometry.SPHERE:
        delta = hops * (math.pi / diam)
    elif geometry is Geometry.TORUS:
        delta = hops * (1.0 / (2.0 * diam))
    else:
        delta = hops
    with np.errstate(divide="ignore"):
        weight = np.where(delta > 0, 1.0 / np.square(np.where(delta > 0, delta, 1.0)), 0.0)
    return IdealDistances(delta=delta, weight=weight)


def random_layout(g: Graph, geometry: Geometry, seed: int) -> Layout:
    """Seeded random initialization: uniform unit square (plane), uniform on
    the sphere via normalized Gaussians, uniform fundamental domain (torus)."""
    rng = np.random.default_rng(seed)
    n = g.node_count
    if geometry is Geometry.SPHERE:
        pos = rng.normal(size=(n, 3))
        norms = np.linalg.norm(pos, axis=1)
        while np.any(norms < 1e-12):
            bad = norms < 1e-12
            pos[bad] = rng.normal(size=(int(bad.sum()), 3))
            norms = np.linalg.norm(pos, axis=1)
        pos = pos / norms[:, None]
    else:
        pos = rng.random((n, 2))
    return Layout(geometry=geometry, positions=pos)


# ---------------------------------------------------------------------------
# Pair terms and gradients
# ---------------------------------------------------------------------------

def torus_min_alpha(xi, xj, delta: float) -> tuple[int, int]:
    """Wrapped copy of node j whose distance gives the smallest residual."""
    best = None
    best_alpha = (0, 0)
    for ax, ay in TORUS_ALPHAS:
        dx = xj[0] + ax - xi[0]
        dy = xj[1] + ay - xi[1]
        res = (delta - math.hypot(dx, dy)) ** 2
        if best is None or res < best:
            best = res
            best_alpha = (ax, ay)
    return best_alpha


def pair_term(geometry: Geometry, xi, xj, delta: float, w: float, alpha=None) -> float:
    """Stress contribution of one node pair; for the torus, `alpha` fixes a
    wrapped copy (None selects the minimizing one)."""
    if geometry is Geometry.PLANE:
        d = math.hypot(xj[0] - xi[0], xj[1] - xi[1])
    elif geometry is Geometry.SPHERE:
        d = math.acos(clamp(float(np.dot(xi, xj))))
    else:
        if alpha is None:
            alpha = torus_min_alpha(xi, xj, delta)
        d = math.hypot(xj[0] + alpha[0] - xi[0], xj[1] + alpha[1] - xi[1])
    return w * (delta - d) ** 2


def pair_gradient(geometry: Geometry, xi, xj, delta: float, w: float, alpha=None):
    """Analytic gradient of the pair term with respect to both endpoints.

    Sphere gradients live in the tangent planes at xi and xj. For the torus
    the gradient is of the smooth branch at the (given or minimizing) alpha.
    """
    if geometry is Geometry.PLANE:
        dx, dy = xj[0] - xi[0], xj[1] - xi[1]
        d = math.hypot(dx, dy)
        if d < 1e-12:
            return np.zeros(2), np.zeros(2)
        coef = 2.0 * w * (delta - d) / d
        gi = np.array([coef * dx, coef * dy])
        return gi, -gi
    if geometry is Geometry.SPHERE:
        dot = clamp(float(np.dot(xi, xj)))
        d = math.acos(dot)
        sin_d = math.sqrt(max(1.0 - dot * dot, 0.0))
        if sin_d < 1e-12:
            return np.zeros(3), np.zeros(3)
        ti = (np.asarray(xj) - dot * np.asarray(xi)) / sin_d
        tj = (np.asarray(xi) - dot * np.asarray(xj)) / sin_d
        coef = 2.0 * w * (delta - d)
        return coef * ti, coef * tj
    if alpha is None:
        alpha = torus_min_alpha(xi, xj, delta)
    dx = xj[0] + alpha[0] - xi[0]
    dy = xj[1] + alpha[1] - xi[1]
    d = math.hypot(dx, dy)
    if d < 1e-12:
        return np.zeros(2), np.zeros(2)
    coef = 2.0 * w * (delta - d) / d
    gi = np.array([coef * dx, coef * dy])
    return gi, -gi


def stress(layout: Layout, ideal: IdealDistances) -> float:
    """Total stress, accumulated over pairs i < j in index order."""
    pos = layout.positions
    n = pos.shape[0]
    delta = ideal.delta
    weight = ideal.weight
    total = 0.0
    if layout.geometry is Geometry.PLANE:
        for i in range(n - 1):
            xi0, xi1 = float(pos[i, 0]), float(pos[i, 1])
            for j in range(i + 1, n):
                d = math.hypot(float(pos[j, 0]) - xi0, float(pos[j, 1]) - xi1)
                total += float(weight[i, j]) * (float(delta[i, j]) - d) ** 2
    elif layout.geometry is Geometry.SPHERE:
        for i in range(n - 1):
            xi = pos[i]
            for j in range(i + 1, n):
                d = math.acos(clamp(float(np.dot(xi, pos[j]))))
                total += float(weight[i, j]) * (float(delta[i, j]) - d) ** 2
    else:
        for i in range(n - 1):
            xi0, xi1 = float(pos[i, 0]), float(pos[i, 1])
            for j in range(i + 1, n):
                xj0, xj1 = float(pos[j, 0]), float(pos[j, 1])
                dl = float(delta[i, j])
                best = None
                for ax, ay in TORUS_ALPHAS:
                    d = math.hypot(xj0 + ax - xi0, xj1 + ay - xi1)
                    res = (dl - d) ** 2
                    if best is None or res < best:
                        best = res
                total += float(weight[i, j]) * best
    return total


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------

def _hash_angle(i: int, j: int) -> float:
    h = (i * 2654435761 + j * 40503 + 2463534242) & 0xFFFFFFFF
    return 2.0 * math.pi * h / 4294967296.0


def _eta_sequence(iterations: int, eta_max: float, eta_min: float) -> list[float]:
    if iterations == 1:
        return [eta_max]
    ratio = eta_min / eta_max
    return [eta_max * ratio ** (t / (iterations - 1)) for t in range(iterations)]


def sgd_layout(g: Graph, geometry: Geometry, schedule: SgdSchedule) -> Layout:
    """Run the pairwise descent from a seeded random layout; deterministic
    for a fixed schedule."""
    ideal = ideal_distances(g, geometry)
    n = g.node_count
    pairs_i: list[int] = []
    pairs_j: list[int] = []
    pairs_d: list[float] = []
    pairs_w: list[float] = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            pairs_i.append(i)
            pairs_j.append(j)
            pairs_d.append(float(ideal.delta[i, j]))
            pairs_w.append(float(ideal.weight[i, j]))

    eta_max = schedule.eta_max
    if eta_max is None:
        eta_max = max(pairs_d) ** 2  # saturates mu = 1 for every weight at start
    if eta_max < schedule.eta_min:
        raise ValueError("derived eta_max below eta_min")
    etas = _eta_sequence(schedule.iterations, eta_max, schedule.eta_min)

    rng = np.random.default_rng(schedule.seed)
    init = random_layout(g, geometry, schedule.seed)
    pos = [list(map(float, row)) for row in init.positions]

    sphere = geometry is Geometry.SPHERE
    torus = geometry is Geometry.TORUS

    for eta in etas:
        order = rng.permutation(len(pairs_i)).tolist()
        for k in order:
            i, j = pairs_i[k], pairs_j[k]
            dl, w = pairs_d[k], pairs_w[k]
            mu = w * eta
            if mu > 1.0:
                mu = 1.0
            pi, pj = pos[i], pos[j]
            if sphere:
                dot = pi[0] * pj[0] + pi[1] * pj[1] + pi[2] * pj[2]
                dot = clamp(dot)
                d = math.acos(dot)
                sin_d = math.sqrt(max(1.0 - dot * dot, 0.0))
                if sin_d < 1e-9:
                    ang = _hash_angle(i, j)
                    ref = (math.cos(ang), math.sin(ang), 0.5)
                    ux = ref[1] * pi[2] - ref[2] * pi[1]
                    uy = ref[2] * pi[0] - ref[0] * pi[2]
                    uz = ref[0] * pi[1] - ref[1] * pi[0]
                    un = math.sqrt(ux * ux + uy * uy + uz * uz)
                    if un < 1e-12:
                        ux, uy, uz, un = pi[1], -pi[0], 0.0, math.hypot(pi[0], pi[1]) or 1.0
                    ti = (ux / un, uy / un, uz / un)
                    tj = (-ti[0], -ti[1], -ti[2])
                else:
                    ti = ((pj[0] - dot * pi[0]) / sin_d, (pj[1] - dot * pi[1]) / sin_d, (pj[2] - dot * pi[2]) / sin_d)
                    tj = ((pi[0] - dot * pj[0]) / sin_d, (pi[1] - dot * pj[1]) / sin_d, (pi[2] - dot * pj[2]) / sin_d)
                step = mu * (d - dl) * 0.5
                nx = pi[0] + step * ti[0]
                ny = pi[1] + step * ti[1]
                nz = pi[2] + step * ti[2]
                nn = math.sqrt(nx * nx + ny * ny + nz * nz)
                pos[i] = [nx / nn, ny / nn, nz / nn]
                nx = pj[0] + step * tj[0]
                ny = pj[1] + step * tj[1]
                nz = pj[2] + step * tj[2]
                nn = math.sqrt(nx * nx + ny * ny + nz * nz)
                pos[j] = [nx / nn, ny / nn, nz / nn]
            else:
                ax = ay = 0
                if torus:
                    best = None
                    for cx, cy in TORUS_ALPHAS:
                        ddx = pj[0] + cx - pi[0]
                        ddy = pj[1] + cy - pi[1]
                        res = (dl - math.hypot(ddx, ddy)) ** 2
                        if best is None or res < best:
                            best = res
                            ax, ay = cx, cy
                dx = pj[0] + ax - pi[0]
                dy = pj[1] + ay - pi[1]
                d = math.hypot(dx, dy)
                if d < 1e-9:
                    ang = _hash_angle(i, j)
                    ux, uy = math.cos(ang), math.sin(ang)
                else:
                    ux, uy = dx / d, dy / d
                step = mu * (d - dl) * 0.5
                pi[0] += step * ux
                pi[1] += step * uy
                pj[0] -= step * ux
                pj[1] -= step * uy
                if torus:
                    pi[0] %= 1.0
                    pi[1] %= 1.0
                    pj[0] %= 1.0
                    pj[1] %= 1.0

    return Layout(geometry=geometry, positions=np.array(pos))


# ---------------------------------------------------------------------------
# Transforms and serialization
# ---------------------------------------------------------------------------

def apply_torus_offset(layout: Layout, du: float, dv: float) -> Layout:
    if layout.geometry is not Geometry.TORUS:
        raise ValueError("offset panning applies to torus layouts")
    return Layout(Geometry.TORUS, np.mod(layout.positions + np.array([du, dv]), 1.0))


def layout_to_json(
    layout: Layout,
    graph_ref: str | None = None,
    seed: int | None = None,
    schedule: SgdSchedule | None = None,
    initial_stress: float | None = None,
    final_stress: float | None = None,
    pan: dict | None = None,
) -> dict:
    obj: dict = {
        "schemaVersion": 1,
        "geometry": layout.geometry.value,
        "positions": [[float(c) for c in row] for row in layout.positions],
        "graphRef": graph_ref,
        "seed": seed,
        "schedule": None
        if schedule is None
        else {
            "iterations": schedule.iterations,
            "etaMax": schedule.eta_max,
            "etaMin": schedule.eta_min,
        },
        "initialStress": initial_stress,
        "finalStress": final_stress,
    }
    if pan is not None:
        obj["pan"] = pan
    return obj


def layout_from_json(obj: dict) -> Layout:
    return Layout(Geometry(obj["geometry"]), np.array(obj["positions"], dtype=float))
