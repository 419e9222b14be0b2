"""Direct least-squares ellipse fitting and projection helpers.

The fit minimizes the algebraic distance of a general conic subject to
``4ac - b^2 = 1``, which admits only ellipses. The 6x6 generalized eigenproblem
is reduced to a 3x3 one (numerically stable partitioned form) after the points
are centred on their centroid and scaled to unit RMS radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, InsufficientPointsError, ParameterError


@dataclass(frozen=True)
class Ellipse:
    """Ellipse with centre ``(cx, cy)``, semi-axes ``a >= b > 0`` and major-axis
    angle ``theta`` in ``[0, pi)`` measured from +x."""
    cx: float
    cy: float
    a: float
    b: float
    theta: float

    def __post_init__(self):
        if not (self.a >= self.b > 0):
            raise ParameterError(f"invalid semi-axes a={self.a}, b={self.b}")
        if not (0.0 <= self.theta < math.pi):
            raise ParameterError(f"theta {self.theta} outside [0, pi)")

    @classmethod
    def canonical(cls, cx, cy, a, b, theta):
        """Build from possibly swapped axes / unnormalized angle."""
        if b > a:
            a, b = b, a
            theta += math.pi / 2
        return cls(float(cx), float(cy), float(a), float(b), normalize_angle(theta))

    @property
    def center(self):
        return (self.cx, self.cy)

    @property
    def area(self) -> float:
        return math.pi * self.a * self.b

    @property
    def aspect_ratio(self) -> float:
        return self.a / self.b

    def implicit(self, x, y):
        """``(u/a)^2 + (v/b)^2 - 1`` in the ellipse frame; <= 0 inside."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        dx = np.asarray(x, dtype=np.float64) - self.cx
        dy = np.asarray(y, dtype=np.float64) - self.cy
        u = dx * c + dy * s
        v = -dx * s + dy * c
        return (u / self.a) ** 2 + (v / self.b) ** 2 - 1.0

    def sample(self, n: int = 64, t0: float = 0.0, t1: float = 2 * math.pi,
               endpoint: bool = False) -> np.ndarray:
        """Points at parametric angles in ``[t0, t1)`` as an ``(n, 2)`` array."""
        t = np.linspace(t0, t1, n, endpoint=endpoint)
        c, s = math.cos(self.theta), math.sin(self.theta)
        u, v = self.a * np.cos(t), self.b * np.sin(t)
        return np.column_stack([self.cx + u * c - v * s, self.cy + u * s + v * c])

    def bbox(self):
        """Axis-aligned ``(xmin, ymin, xmax, ymax)``."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        hx = math.hypot(self.a * c, self.b * s)
        hy = math.hypot(self.a * s, self.b * c)
        return self.cx - hx, self.cy - hy, self.cx + hx, self.cy + hy


def normalize_angle(theta: float) -> float:
    t = math.fmod(theta, math.pi)
    if t < 0:
        t += math.pi
    if t >= math.pi:
        t -= math.pi
    return t


def angle_distance(t1: float, t2: float) -> float:
    """Distance between two axis orientations, wrapping at pi."""
    d = abs(t1 - t2) % math.pi
    return min(d, math.pi - d)


def aspect_ratio(e: Ellipse) -> float:
    return e.a / e.b


# Inverse of the constraint block [[0, 0, 2], [0, -1, 0], [2, 0, 0]].
_C1_INV = np.array([[0.0, 0.0, 0.5], [0.0, -1.0, 0.0], [0.5, 0.0, 0.0]])


def reduced_system(x: np.ndarray, y: np.ndarray):
    """Return ``(M, T)`` of the reduced eigenproblem for normalized data.

    The quadratic coefficients ``(A, B, C)`` are an eigenvector of ``M``; the
    linear ones follow as ``T @ (A, B, C)``.
    """
    d1 = np.column_stack([x * x, x * y, y * y])
    d2 = np.column_stack([x, y, np.ones_like(x)])
    s1 = d1.T @ d1
    s2 = d1.T @ d2
    s3 = d2.T @ d2
    if np.linalg.cond(s3) > 1e12:
        raise DegenerateFitError("points are collinear")
    t = -np.linalg.solve(s3, s2.T)
    m = _C1_INV @ (s1 + s2 @ t)
    return m, t


def constrained_eigvec(m: np.ndarray) -> np.ndarray:
    """Eigenvector of ``m`` satisfying the ellipse constraint ``4AC - B^2 > 0``."""
    vals, vecs = np.linalg.eig(m)
    vecs = np.real(vecs)
    cond = 4 * vecs[0] * vecs[2] - vecs[1] ** 2
    ok = np.flatnonzero(cond > 0)
    if len(ok) == 0:
        raise DegenerateFitError("no elliptical solution")
    if len(ok) > 1:
        ok = ok[np.argsort(np.abs(np.real(vals[ok])))]
    return vecs[:, ok[0]]


def conic_to_ellipse(coef) -> Ellipse:
    """Convert ``A x^2 + B xy + C y^2 + D x + E y + F = 0`` to geometric form."""
    a_, b_, c_, d_, e_, f_ = (float(v) for v in coef)
    q = np.array([[a_, b_ / 2], [b_ / 2, c_]])
    det = a_ * c_ - b_ * b_ / 4
    if det <= 0:
        raise DegenerateFitError("conic is not an ellipse")
    cx, cy = np.linalg.solve(2 * q, [-d_, -e_])
    f0 = f_ + (d_ * cx + e_ * cy) / 2
    if f0 > 0:
        q, f0 = -q, -f0
    lam, vec = np.linalg.eigh(q)
    if f0 == 0 or lam[0] <= 0:
        raise DegenerateFitError("conic is not a real ellipse")
    semi = np.sqrt(-f0 / lam)  # ascending eigenvalues -> descending semi-axes
    major = vec[:, 0]
    theta = math.atan2(major[1], major[0])
    return Ellipse.canonical(cx, cy, semi[0], semi[1], theta)


def _normalization(pts):
    mx, my = pts.mean(axis=0)
    r = math.sqrt(float(((pts - (mx, my)) ** 2).sum(axis=1).mean()))
    if r == 0:
        raise DegenerateFitError("all points coincide")
    return mx, my, r


def fit_conic(points) -> np.ndarray:
    """Unit-norm ellipse-constrained conic coefficients in image coordinates."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or len(pts) < 5:
        raise InsufficientPointsError("need at least 5 points")
    mx, my, r = _normalization(pts)
    x = (pts[:, 0] - mx) / r
    y = (pts[:, 1] - my) / r
    m, t = reduced_system(x, y)
    q = constrained_eigvec(m)
    lin = t @ q
    a_, b_, c_ = q
    d_, e_, f_ = lin
    # Undo x' = (x - mx) / r.
    s2 = r * r
    coef = np.array([
        a_ / s2,
        b_ / s2,
        c_ / s2,
        (-2 * a_ * mx - b_ * my) / s2 + d_ / r,
        (-2 * c_ * my - b_ * mx) / s2 + e_ / r,
        (a_ * mx * mx + b_ * mx * my + c_ * my * my) / s2 - (d_ * mx + e_ * my) / r + f_,
    ])
    return coef / np.linalg.norm(coef)


def fit_ellipse_lsq(points) -> Ellipse:
    """Direct least-squares ellipse through ``(N, 2)`` points, ``N >= 5``.

    Raises ``InsufficientPointsError`` for fewer than five points and
    ``DegenerateFitError`` for collinear data or a non-elliptic solution.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or len(pts) < 5:
        raise InsufficientPointsError("need at least 5 points")
    mx, my, r = _normalization(pts)
    x = (pts[:, 0] - mx) / r
    y = (pts[:, 1] - my) / r
    m, t = reduced_system(x, y)
    q = constrained_eigvec(m)
    e = conic_to_ellipse(np.concatenate([q, t @ q]))
    return Ellipse(float(mx + r * e.cx), float(my + r * e.cy), r * e.a, r * e.b, e.theta)


def project_extent(points, origin, direction):
    """Min and max signed projection of ``points - origin`` on ``direction``."""
    d = np.asarray(direction, dtype=np.float64)
    norm = math.hypot(d[0], d[1])
    if norm == 0:
        raise ParameterError("zero direction vector")
    d = d / norm
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    proj = (pts - np.asarray(origin, dtype=np.float64)) @ d
    return float(proj.min()), float(proj.max())
