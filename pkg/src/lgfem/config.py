"""Experiment configuration files: flat key = value lines under bracket
section headers.

[run] carries the problem and discretization; an [lps] or [dc] section is
required exactly when the scheme uses it. Unknown keys and sections are
hard errors so a typo cannot silently fall back to a default, and
serialize_config emits a canonical form that parses back to an equal
config.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .dc import DcConfig
from .elements import P1, P1BUBBLE, P2, get_rule

ELEMENT_KINDS = {"p1": P1, "p2": P2, "p1bubble": P1BUBBLE}

_PROBLEMS = ("rotating_hump", "slotted_cylinder")
_SCHEMES = ("lg", "lps", "dc")
_POINTS = (7, 12, 16, 25, 42)
_VARIANTS = ("one_level", "two_level")
_SLOT_SIDES = ("bottom", "top")
_DOMAIN_WIDTH = 2.0  # both benchmark problems live on [-1, 1]^2


class ConfigError(ValueError):
    """A configuration file or value is invalid."""


@dataclass(frozen=True)
class LpsSettings:
    """Scheme block for local projection stabilization: the macro variant
    and the constant in tau_M = c_tau * h_M."""

    variant: str
    c_tau: float

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be one of {_VARIANTS}, "
                             f"got {self.variant!r}")
        if not self.c_tau > 0.0:
            raise ValueError("c_tau must be positive")


def _whole(ratio: float) -> int | None:
    n = round(ratio)
    if n >= 1 and abs(ratio - n) <= 1e-9 * max(1.0, abs(ratio)):
        return n
    return None


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    scheme: str
    element: str
    leg: float
    dts: tuple[float, ...]
    points: int
    revolutions: float = 1.0
    out: str = "runs"
    seed: int = 0
    threads: int = 1
    slot_side: str = "bottom"
    lps: LpsSettings | None = None
    dc: DcConfig | None = None

    def __post_init__(self):
        if self.problem not in _PROBLEMS:
            raise ValueError(f"problem must be one of {_PROBLEMS}")
        if self.scheme not in _SCHEMES:
            raise ValueError(f"scheme must be one of {_SCHEMES}")
        if self.element not in ELEMENT_KINDS:
            raise ValueError(f"element must be one of {tuple(ELEMENT_KINDS)}")
        if self.points not in _POINTS:
            raise ValueError(f"points must be one of {_POINTS}")
        if self.slot_side not in _SLOT_SIDES:
            raise ValueError(f"slot_side must be one of {_SLOT_SIDES}")
        if not self.leg > 0.0:
            raise ValueError("leg must be positive")
        if _whole(_DOMAIN_WIDTH / self.leg) is None:
            raise ValueError(
                f"leg {self.leg} does not divide the domain width {_DOMAIN_WIDTH}")
        if not self.revolutions > 0.0:
            raise ValueError("revolutions must be positive")
        if not self.dts:
            raise ValueError("dt list is empty")
        for dt in self.dts:
            if not dt > 0.0:
                raise ValueError(f"dt must be positive, got {dt}")
            if _whole(self.revolutions / dt) is None:
                raise ValueError(
                    f"dt {dt} does not divide the run length {self.revolutions}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        kind = ELEMENT_KINDS[self.element]
        if get_rule(self.points).degree < 2 * kind.degree:
            raise ValueError(
                f"points = {self.points} cannot integrate {self.element} mass "
                f"terms; the rule must be exact to degree {2 * kind.degree}")
        if self.scheme == "lps":
            if self.lps is None:
                raise ValueError("scheme lps requires an [lps] section")
            if self.lps.variant == "one_level" and self.element != "p1bubble":
                raise ValueError("one_level stabilization requires element "
                                 "p1bubble")
            if self.lps.variant == "two_level" and self.element != "p2":
                raise ValueError("two_level stabilization requires element p2")
        elif self.lps is not None:
            raise ValueError(f"[lps] section is not used by scheme {self.scheme}")
        if self.scheme == "dc":
            if self.dc is None:
                raise ValueError("scheme dc requires a [dc] section")
        elif self.dc is not None:
            raise ValueError(f"[dc] section is not used by scheme {self.scheme}")

    def n_steps(self, dt: float) -> int:
        n = _whole(self.revolutions / dt)
        if n is None:
            raise ConfigError(
                f"dt {dt} does not divide the run length {self.revolutions}")
        return n

    def mesh_n(self) -> int:
        return _whole(_DOMAIN_WIDTH / self.leg)


def _read_sections(text: str) -> dict[str, dict[str, str]]:
    cp = configparser.ConfigParser(interpolation=None, strict=True,
                                   inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    return {name: dict(cp[name]) for name in cp.sections()}


def _float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def _int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from None


def _check_keys(section: str, given: dict, required: tuple, optional: tuple):
    unknown = sorted(set(given) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    missing = sorted(set(required) - set(given))
    if missing:
        raise ConfigError(f"missing key(s) in [{section}]: {', '.join(missing)}")


def parse_config(text: str) -> ExperimentConfig:
    sections = _read_sections(text)
    if "run" not in sections:
        raise ConfigError("missing [run] section")
    unknown = sorted(set(sections) - {"run", "lps", "dc"})
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(unknown)}")

    run = sections["run"]
    _check_keys("run", run,
                required=("problem", "scheme", "element", "leg", "dt", "points"),
                optional=("revolutions", "out", "seed", "threads", "slot_side"))
    dts = tuple(_float("run", "dt", tok)
                for tok in run["dt"].replace(",", " ").split())
    if not dts:
        raise ConfigError("[run] dt: empty list")

    kwargs = dict(
        problem=run["problem"],
        scheme=run["scheme"],
        element=run["element"],
        leg=_float("run", "leg", run["leg"]),
        dts=dts,
        points=_int("run", "points", run["points"]),
    )
    if "revolutions" in run:
        kwargs["revolutions"] = _float("run", "revolutions", run["revolutions"])
    if "out" in run:
        kwargs["out"] = run["out"]
    if "seed" in run:
        kwargs["seed"] = _int("run", "seed", run["seed"])
    if "threads" in run:
        kwargs["threads"] = _int("run", "threads", run["threads"])
    if "slot_side" in run:
        kwargs["slot_side"] = run["slot_side"]

    if "lps" in sections:
        lps = sections["lps"]
        _check_keys("lps", lps, required=("variant", "c_tau"), optional=())
        try:
            kwargs["lps"] = LpsSettings(variant=lps["variant"],
                                        c_tau=_float("lps", "c_tau", lps["c_tau"]))
        except ValueError as exc:
            raise ConfigError(f"[lps] {exc}") from None

    if "dc" in sections:
        dc = sections["dc"]
        _check_keys("dc", dc, required=("c_eps", "alpha"),
                    optional=("tol", "max_iter", "mode"))
        dc_kwargs = dict(c_eps=_float("dc", "c_eps", dc["c_eps"]),
                         alpha=_float("dc", "alpha", dc["alpha"]))
        if "tol" in dc:
            dc_kwargs["tol"] = _float("dc", "tol", dc["tol"])
        if "max_iter" in dc:
            dc_kwargs["max_iter"] = _int("dc", "max_iter", dc["max_iter"])
        if "mode" in dc:
            dc_kwargs["mode"] = dc["mode"]
        try:
            kwargs["dc"] = DcConfig(**dc_kwargs)
        except ValueError as exc:
            raise ConfigError(f"[dc] {exc}") from None

    try:
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_config(cfg: ExperimentConfig) -> str:
    lines = [
        "[run]",
        f"problem = {cfg.problem}",
        f"scheme = {cfg.scheme}",
        f"element = {cfg.element}",
        f"leg = {_fmt(cfg.leg)}",
        "dt = " + " ".join(_fmt(dt) for dt in cfg.dts),
        f"points = {cfg.points}",
        f"revolutions = {_fmt(cfg.revolutions)}",
        f"out = {cfg.out}",
        f"seed = {cfg.seed}",
        f"threads = {cfg.threads}",
        f"slot_side = {cfg.slot_side}",
    ]
    if cfg.lps is not None:
        lines += ["", "[lps]",
                  f"variant = {cfg.lps.variant}",
                  f"c_tau = {_fmt(cfg.lps.c_tau)}"]
    if cfg.dc is not None:
        lines += ["", "[dc]",
                  f"c_eps = {_fmt(cfg.dc.c_eps)}",
                  f"alpha = {_fmt(cfg.dc.alpha)}",
                  f"tol = {_fmt(cfg.dc.tol)}",
                  f"max_iter = {cfg.dc.max_iter}",
                  f"mode = {cfg.dc.mode}"]
    return "\n".join(lines) + "\n"
