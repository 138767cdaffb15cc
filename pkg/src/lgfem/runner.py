"""Experiment runner: build the discretization once per (config, dt), march
the scheme, record per-step diagnostics, and write the run and sweep CSVs."""

from __future__ import annotations

import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse.linalg as spla

from .config import ELEMENT_KINDS, ConfigError, ExperimentConfig
from .dc import dc_step
from .diagnostics import (FLAG_DC_NONCONVERGED, FLAG_UNSTABLE, RunRecord,
                          TripleNormAccumulator, extrema, l2_error)
from .elements import P0DISC, P1DISC, get_rule
from .mesh import build_macro_partition, build_uniform_mesh, refine_3split
from .problems import exact_solution, make_problem
from .space import build_space
from .stabilization import LpsConfig, assemble_lps
from .transport import (ConvergenceError, Field, TransportAssembler,
                        assemble_mass, project_l2, quad_norm_sq, solve_spd)

SWEEP_CSV_HEADER = "dt,l2_error,max_l2norm,min,max,unstable_flag"

# a run is flagged unstable when any ||c^n|| exceeds this multiple of ||c^0||,
# and aborted outright past the much larger blowup factor
UNSTABLE_FACTOR = 10.0
BLOWUP_FACTOR = 1e6


def flags_for(unstable: bool, dc_nonconverged_steps: int) -> list[str]:
    flags = []
    if unstable:
        flags.append(FLAG_UNSTABLE)
    if dc_nonconverged_steps > 0:
        flags.append(FLAG_DC_NONCONVERGED)
    return flags


@dataclass
class RunResult:
    record: RunRecord
    csv_path: Path
    norm0: float
    max_l2norm: float
    vmin: float
    vmax: float
    unstable: bool
    dc_nonconverged_steps: int


@dataclass
class _Setup:
    problem: object
    space: object
    rule: object
    mass: object
    stab: object  # LPS stabilization matrix, or None
    c0: Field


def _build(cfg: ExperimentConfig) -> _Setup:
    problem = make_problem(cfg.problem, slot_side=cfg.slot_side)
    rule = get_rule(cfg.points)
    kind = ELEMENT_KINDS[cfg.element]
    n = cfg.mesh_n()

    stab = None
    lps_cfg = None
    if cfg.scheme == "lps" and cfg.lps.variant == "two_level":
        # leg refers to the macro mesh; elements come from its 3-split
        coarse = build_uniform_mesh(problem.domain, n)
        mesh = refine_3split(coarse)
        tau = lambda h: cfg.lps.c_tau * h
        partition = build_macro_partition(mesh, "two", tau, split=3)
        lps_cfg = LpsConfig(cfg.lps.variant, P1DISC)
    elif cfg.scheme == "lps":
        mesh = build_uniform_mesh(problem.domain, n)
        tau = lambda h: cfg.lps.c_tau * h
        partition = build_macro_partition(mesh, "one", tau)
        lps_cfg = LpsConfig(cfg.lps.variant, P0DISC)
    else:
        mesh = build_uniform_mesh(problem.domain, n)
        partition = None

    space = build_space(mesh, kind, dirichlet=True)
    mass = assemble_mass(space, rule)
    if partition is not None:
        stab = assemble_lps(space, partition, lps_cfg, rule)
    c0 = project_l2(space, problem.ic, rule)
    return _Setup(problem, space, rule, mass, stab, c0)


def _make_solver(system, space):
    """Direct factorization with an iterative fallback.

    The factorization is reused across steps; each solve is checked against
    the residual so a bad pivot quietly degrades to conjugate gradients
    instead of polluting the run.
    """
    try:
        lu = spla.splu(system.tocsc())
    except RuntimeError:
        lu = None

    def solve(b):
        if lu is not None:
            x = lu.solve(b)
            bn = np.linalg.norm(b)
            if np.linalg.norm(system @ x - b) <= 1e-12 * max(bn, 1e-300):
                if space.dirichlet:
                    x[space.boundary_dof] = 0.0
                return x
        x = solve_spd(system, b)
        if space.dirichlet:
            x[space.boundary_dof] = 0.0
        return x

    return solve


def _dump_mesh(mesh, path: Path):
    with open(path, "w") as fh:
        fh.write(f"{len(mesh.vertices)} {len(mesh.triangles)}\n")
        np.savetxt(fh, mesh.vertices, fmt="%.17g")
        np.savetxt(fh, mesh.triangles, fmt="%d")


def _dump_field(field: Field, step: int, out: Path):
    space = field.space
    path = out / f"field_step{step:06d}.txt"
    with open(path, "w") as fh:
        fh.write(f"# space={space.kind.tag} ndof={space.ndof} "
                 f"step={step} t={field.t!r}\n")
        np.savetxt(fh, np.column_stack([space.dof_coords, field.coeffs]),
                   fmt="%.17g")


def run_single(cfg: ExperimentConfig, dt: float, out_dir=None,
               dump_mesh: bool = False, dump_field_every: int = 0) -> RunResult:
    t_start = time.perf_counter()
    n_steps = cfg.n_steps(dt)
    setup = _build(cfg)
    problem, space, rule, mass = setup.problem, setup.space, setup.rule, setup.mass

    out = Path(out_dir) if out_dir is not None else Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)

    asm = TransportAssembler(space, problem.velocity, dt, rule)
    if cfg.scheme == "lps":
        solver = _make_solver((mass + dt * setup.stab).tocsr(), space)
    else:
        solver = _make_solver(mass, space)

    record = RunRecord(dt)
    acc = TripleNormAccumulator(mass)
    c = setup.c0
    norm0 = math.sqrt(float(c.coeffs @ (mass @ c.coeffs)))

    if dump_mesh:
        _dump_mesh(space.mesh, out / "mesh.txt")
    if dump_field_every > 0:
        _dump_field(c, 0, out)

    unstable = False
    nonconv = 0
    max_l2 = 0.0
    gmin = math.inf
    gmax = -math.inf

    for n in range(1, n_steps + 1):
        t_n = n * dt
        b, cstar = asm.rhs(c.coeffs, t_n)
        if cfg.scheme == "lg":
            c = Field(space, solver(b), t_n)
            stab_energy = 0.0
            iters = 0
        elif cfg.scheme == "lps":
            c = Field(space, solver(b), t_n)
            stab_energy = float(c.coeffs @ (setup.stab @ c.coeffs))
            iters = 0
        else:
            res = dc_step(c, problem.velocity, dt, rule, mass, cfg.dc,
                          assembler=asm)
            c = res.field
            stab_energy = res.stab_energy
            iters = res.iterations
            if not res.converged:
                nonconv += 1

        diss = math.sqrt(max(0.0, quad_norm_sq(
            space.mesh, rule, asm.dest_values(c.coeffs) - cstar)))
        l2 = math.sqrt(max(0.0, float(c.coeffs @ (mass @ c.coeffs))))
        triple = acc.triple_norm_sq_increment(c, stab_energy, dt)
        vmin, vmax = extrema(c)
        record.append(n, t_n, l2, diss, triple, vmin, vmax, iters, stab_energy)

        if not math.isfinite(l2):
            unstable = True
            break
        max_l2 = max(max_l2, l2)
        gmin = min(gmin, vmin)
        gmax = max(gmax, vmax)
        if l2 > UNSTABLE_FACTOR * norm0:
            unstable = True
        if dump_field_every > 0 and n % dump_field_every == 0:
            _dump_field(c, n, out)
        if l2 > BLOWUP_FACTOR * norm0:
            break

    if dump_field_every > 0 and c.t == n_steps * dt and \
            n_steps % dump_field_every != 0:
        _dump_field(c, n_steps, out)

    exact = lambda x: exact_solution(problem, x, c.t)
    record.l2_error = l2_error(c, exact, rule)
    record.runtime_s = time.perf_counter() - t_start
    record.flags = flags_for(unstable, nonconv)

    csv_path = out / f"run_dt{dt:.10g}.csv"
    record.write_csv(csv_path)
    return RunResult(record=record, csv_path=csv_path, norm0=norm0,
                     max_l2norm=max_l2, vmin=gmin, vmax=gmax,
                     unstable=unstable, dc_nonconverged_steps=nonconv)


def _sweep_one(args):
    cfg, dt, out = args
    try:
        r = run_single(cfg, dt, out_dir=out)
        return (r.record.l2_error, r.max_l2norm, r.vmin, r.vmax,
                int(r.unstable), None)
    except (ConvergenceError, FloatingPointError) as exc:
        return (math.nan, math.nan, math.nan, math.nan, 1, str(exc))


def run_sweep(cfg: ExperimentConfig, out_dir=None, threads=None) -> Path:
    out = Path(out_dir) if out_dir is not None else Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    nthreads = threads if threads is not None else cfg.threads

    args = [(cfg, dt, str(out)) for dt in cfg.dts]
    if nthreads == 1 or len(args) == 1:
        results = [_sweep_one(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=min(nthreads, len(args))) as ex:
            results = list(ex.map(_sweep_one, args))

    lines = [SWEEP_CSV_HEADER]
    for dt, (err, ml2, vmin, vmax, flag, msg) in zip(cfg.dts, results):
        if msg is not None:
            print(f"run dt={dt:.10g} failed: {msg}", file=sys.stderr)
        lines.append(f"{dt:.16e},{err:.16e},{ml2:.16e},"
                     f"{vmin:.16e},{vmax:.16e},{flag:d}")
    sweep_path = out / "sweep.csv"
    sweep_path.write_text("\n".join(lines) + "\n")
    return sweep_path


def read_sweep_csv(path) -> list[dict]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != SWEEP_CSV_HEADER:
        raise ValueError(f"bad sweep header in {path}")
    names = SWEEP_CSV_HEADER.split(",")
    rows = []
    for line in lines[1:]:
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(names):
            raise ValueError(f"bad sweep row in {path}: {line!r}")
        row = {k: float(v) for k, v in zip(names[:-1], parts[:-1])}
        row["unstable_flag"] = int(parts[-1])
        rows.append(row)
    return rows
