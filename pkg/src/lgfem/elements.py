"""Reference-triangle finite elements and symmetric Gaussian quadrature.

The reference triangle is K_hat = {(x, y) : x >= 0, y >= 0, x + y <= 1} with
barycentric coordinates l0 = 1 - x - y, l1 = x, l2 = y.  Local degree-of-
freedom layouts:

    P1        3 vertex values
    P2        3 vertex values + midpoints of edges (0,1), (1,2), (2,0)
    P1Bubble  3 vertex values + one interior bubble 27*l0*l1*l2
    P0disc    1 constant (projection space)
    P1disc    3 vertex values, discontinuous (projection space)

Quadrature rules are symmetric Gauss tables on the reference triangle with
physical weights (sum = reference area 1/2); see _quadrature_tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._quadrature_tables import TABLES


@dataclass(frozen=True)
class ElementKind:
    """Reference element family: local basis layout and polynomial degree."""

    tag: str
    ndof: int
    degree: int  # polynomial degree m of the span (bubble counts as its cubic)


P1 = ElementKind("p1", 3, 1)
P2 = ElementKind("p2", 6, 2)
P1BUBBLE = ElementKind("p1bubble", 4, 3)  # span includes the cubic bubble
P0DISC = ElementKind("p0disc", 1, 0)
P1DISC = ElementKind("p1disc", 3, 1)

ELEMENT_KINDS = {k.tag: k for k in (P1, P2, P1BUBBLE, P0DISC, P1DISC)}


@dataclass(frozen=True)
class QuadratureRule:
    """Symmetric rule on the reference triangle; weights sum to 1/2."""

    n: int
    degree: int
    points_bary: np.ndarray  # (n, 3)
    weights: np.ndarray      # (n,)

    @property
    def points_ref(self) -> np.ndarray:
        """Cartesian reference coordinates (x, y) = (l1, l2), shape (n, 2)."""
        return self.points_bary[:, 1:]


def _freeze(a):
    a = np.asarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


_RULES = {}
for _n, (_deg, _rows) in TABLES.items():
    _arr = np.array(_rows, dtype=np.float64)
    _RULES[_n] = QuadratureRule(_n, _deg, _freeze(_arr[:, 1:].copy()), _freeze(_arr[:, 0].copy()))

RULE_COUNTS = tuple(sorted(_RULES))


def get_rule(points: int) -> QuadratureRule:
    """Return the symmetric rule with the given point count.

    Supported counts are 7, 12, 16, 25, 42 with exactness degrees
    5, 6, 8, 10, 14 respectively.
    """
    try:
        return _RULES[points]
    except KeyError:
        raise ValueError(
            f"unsupported quadrature point count {points}; supported: {RULE_COUNTS}"
        ) from None


def basis_values(kind: ElementKind, pts: np.ndarray) -> np.ndarray:
    """Basis values at reference points, shape (ndof, npts)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    x, y = pts[:, 0], pts[:, 1]
    l0 = 1.0 - x - y
    l1, l2 = x, y
    if kind.tag == "p1" or kind.tag == "p1disc":
        return np.stack([l0, l1, l2])
    if kind.tag == "p2":
        return np.stack([
            l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
            4 * l0 * l1, 4 * l1 * l2, 4 * l2 * l0,
        ])
    if kind.tag == "p1bubble":
        return np.stack([l0, l1, l2, 27 * l0 * l1 * l2])
    if kind.tag == "p0disc":
        return np.ones((1, len(x)))
    raise ValueError(f"unknown element kind {kind.tag!r}")


def basis_gradients(kind: ElementKind, pts: np.ndarray) -> np.ndarray:
    """Reference gradients at reference points, shape (ndof, npts, 2)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    x, y = pts[:, 0], pts[:, 1]
    l0 = 1.0 - x - y
    l1, l2 = x, y
    npts = len(x)
    one = np.ones(npts)
    zero = np.zeros(npts)
    # gradients of barycentric coordinates on the reference triangle
    g0 = np.stack([-one, -one], axis=1)
    g1 = np.stack([one, zero], axis=1)
    g2 = np.stack([zero, one], axis=1)
    if kind.tag == "p1" or kind.tag == "p1disc":
        return np.stack([g0, g1, g2])
    if kind.tag == "p2":
        def vg(l, g):
            return (4 * l - 1)[:, None] * g
        def eg(la, ga, lb, gb):
            return 4 * (la[:, None] * gb + lb[:, None] * ga)
        return np.stack([
            vg(l0, g0), vg(l1, g1), vg(l2, g2),
            eg(l0, g0, l1, g1), eg(l1, g1, l2, g2), eg(l2, g2, l0, g0),
        ])
    if kind.tag == "p1bubble":
        bub = 27 * (
            (l1 * l2)[:, None] * g0 + (l0 * l2)[:, None] * g1 + (l0 * l1)[:, None] * g2
        )
        return np.stack([g0, g1, g2, bub])
    if kind.tag == "p0disc":
        return np.zeros((1, npts, 2))
    raise ValueError(f"unknown element kind {kind.tag!r}")


def evaluate_basis(kind: ElementKind, p) -> tuple[np.ndarray, np.ndarray]:
    """Values and reference gradients of each local basis function at p.

    Parameters
    ----------
    kind : ElementKind
    p : (2,) reference point

    Returns
    -------
    values : (ndof,) ndarray
    gradients : (ndof, 2) ndarray
    """
    vals = basis_values(kind, p)[:, 0]
    grads = basis_gradients(kind, p)[:, 0, :]
    return vals, grads


def integrate_element(rule: QuadratureRule, B, offset, f) -> float:
    """Quadrature of a callback over one physical element.

    The element is the image of the reference triangle under x = B xhat + offset
    (det B > 0); constants integrate to the element area |det B|/2.
    f receives an (n, 2) array of physical points and returns n values.
    """
    B = np.asarray(B, dtype=np.float64)
    offset = np.asarray(offset, dtype=np.float64)
    det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
    phys = rule.points_ref @ B.T + offset
    return float(det * (rule.weights @ np.asarray(f(phys), dtype=np.float64)))
