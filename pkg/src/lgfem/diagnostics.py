"""Measured quantities for transport runs.

L2 errors against a reference solution, the running mesh-dependent norm
(L2 plus accumulated stabilization energy), log-log rate fitting, nodal
extrema, and the per-run CSV record consumed by the plotting tools.
"""

from __future__ import annotations

import re

import numpy as np

from .elements import basis_values
from .transport import Field

RUN_CSV_HEADER = "step,t,l2norm,dissipation_inc,triple_sq,min,max,dc_iters,stab_energy"

FLAG_UNSTABLE = "unstable"
FLAG_DC_NONCONVERGED = "dc_nonconverged"


def l2_error(c, exact, rule):
    """L2 distance between a finite-element field and a callback solution.

    Integrates (c - exact)^2 with the given rule on the field's own mesh
    and returns the square root.
    """
    space = c.space
    mesh = space.mesh
    vals_ref = basis_values(space.kind, rule.points_ref)  # (nl, nq)
    field_vals = c.coeffs[space.element_dofs] @ vals_ref  # (nt, nq)
    phys = mesh.b_off[:, None, :] + rule.points_ref[None] @ np.swapaxes(mesh.b_mat, 1, 2)
    exact_vals = np.asarray(exact(phys.reshape(-1, 2)), dtype=np.float64)
    diff = field_vals - exact_vals.reshape(field_vals.shape)
    total = np.sum(mesh.det_b[:, None] * rule.weights[None] * diff**2)
    return float(np.sqrt(total))


class TripleNormAccumulator:
    """Running mesh-dependent norm: ||c^n||^2 + dt * sum_{j<=n} S(c^j, c^j).

    The stabilization energy S(c, c) is supplied by the caller each step;
    with zero energy the value reduces to the plain L2 norm squared.
    """

    def __init__(self, mass):
        self._mass = mass
        self._stab_sum = 0.0

    def triple_norm_sq_increment(self, c: Field, stab_energy: float, dt: float) -> float:
        if stab_energy < 0.0:
            raise ValueError("stabilization energy must be nonnegative")
        self._stab_sum += dt * stab_energy
        norm_sq = float(c.coeffs @ (self._mass @ c.coeffs))
        return norm_sq + self._stab_sum


def fit_rate(series) -> float:
    """Least-squares slope of log(error) against log(parameter).

    Needs at least two points; every parameter and error must be positive.
    """
    pts = np.asarray(list(series), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("fit_rate needs at least two (parameter, error) pairs")
    if (pts <= 0.0).any():
        raise ValueError("fit_rate needs positive parameters and errors")
    slope = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)[0]
    return float(slope)


def extrema(c: Field) -> tuple[float, float]:
    """Minimum and maximum over the field's nodal coefficient values.

    Nodal coefficients are function values (vertices, and midpoints for the
    quadratic space); enrichment coefficients are increments over the nodal
    part, not values, and are excluded.
    """
    nodal = c.coeffs[: c.space.n_nodal]
    return float(nodal.min()), float(nodal.max())


class RunRecord:
    """Per-step diagnostics of one transport run plus its summary footer."""

    __slots__ = ("dt", "rows", "l2_error", "runtime_s", "flags")

    def __init__(self, dt: float):
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        self.dt = float(dt)
        self.rows: list[tuple] = []
        self.l2_error: float | None = None
        self.runtime_s: float = 0.0
        self.flags: list[str] = []

    def append(self, step, t, l2norm, dissipation_inc, triple_sq, vmin, vmax,
               dc_iters, stab_energy):
        if self.rows and step <= self.rows[-1][0]:
            raise ValueError("steps must be strictly increasing")
        if abs(t - step * self.dt) > 1e-14 * max(1.0, abs(t)):
            raise ValueError(f"row time {t} is not step*dt = {step * self.dt}")
        self.rows.append((int(step), float(t), float(l2norm), float(dissipation_inc),
                          float(triple_sq), float(vmin), float(vmax), int(dc_iters),
                          float(stab_energy)))

    def write_csv(self, path):
        lines = [RUN_CSV_HEADER]
        for row in self.rows:
            step, t, l2n, diss, trip, vmin, vmax, iters, stab = row
            lines.append(
                f"{step},{t:.16e},{l2n:.16e},{diss:.16e},{trip:.16e},"
                f"{vmin:.16e},{vmax:.16e},{iters},{stab:.16e}"
            )
        err = float("nan") if self.l2_error is None else self.l2_error
        flags = ",".join(self.flags) if self.flags else "none"
        lines.append(f"# l2_error={err:.16e} runtime_s={self.runtime_s:.16e} flags={flags}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


class RunTable:
    """Columns of a run CSV read back from disk."""

    __slots__ = ("_cols", "l2_error", "runtime_s", "flags")

    def __init__(self, cols, l2_error, runtime_s, flags):
        self._cols = cols
        self.l2_error = l2_error
        self.runtime_s = runtime_s
        self.flags = flags

    def column(self, name: str) -> np.ndarray:
        return self._cols[name]


_FOOTER_RE = re.compile(r"^# l2_error=(\S+) runtime_s=(\S+) flags=(\S+)$")


def read_run_csv(path) -> RunTable:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != RUN_CSV_HEADER:
        raise ValueError(f"unrecognized run CSV header in {path}")
    m = _FOOTER_RE.match(lines[-1])
    if m is None:
        raise ValueError(f"missing summary footer in {path}")
    names = RUN_CSV_HEADER.split(",")
    data = [ln.split(",") for ln in lines[1:-1]]
    cols = {}
    for j, name in enumerate(names):
        vals = [row[j] for row in data]
        if name in ("step", "dc_iters"):
            cols[name] = np.array(vals, dtype=np.int64)
        else:
            cols[name] = np.array(vals, dtype=np.float64)
    flags = [] if m.group(3) == "none" else m.group(3).split(",")
    return RunTable(cols, float(m.group(1)), float(m.group(2)), flags)
