"""Experiment configuration: an INI file with fixed sections and keys.

Example::

    [problem]
    kind = LexicoSphereInt
    dco = 100
    din = 100

    [strategy]
    variant = LB
    s = 5
    p_mut = 1/200

    [run]
    seeds = 0-9
    budget = 200000
    epsilon = 1e-8

Sections and their keys (defaults in parentheses):

``[problem]``  kind, dco, din (0)
``[strategy]`` variant, alpha (1.5), s (5), p_mut | sigma_lb
``[init]``     sigma0 (1), m0_mode (uniform_1_3), m0, m_int0_mode (zeros), m_int0, d0 (ones)
``[run]``      seeds, budget, epsilon (none), trace_stride (1)

``p_mut`` and ``sigma_lb`` are mutually exclusive.  When neither is given,
``p_mut = 1/(dco + din)``.  Fractions such as ``1/200`` are accepted.
Unknown sections or keys are errors.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..errors import ConfigError, ContractError, DomainError
from ..normal_math import sigma_lb_from_pmut
from ..problems import ProblemKind, ProblemSpec
from ..strategies import StrategyParams, StrategyState, Variant, init_state

M0_MODES = ("uniform_1_3", "explicit")
M_INT0_MODES = ("zeros", "uniform_1_3_int", "explicit")

SCHEMA = {
    "problem": ("kind", "dco", "din"),
    "strategy": ("variant", "alpha", "s", "p_mut", "sigma_lb"),
    "init": ("sigma0", "m0_mode", "m0", "m_int0_mode", "m_int0", "d0"),
    "run": ("seeds", "budget", "epsilon", "trace_stride"),
}
REQUIRED = (("problem", "kind"), ("problem", "dco"), ("strategy", "variant"),
            ("run", "seeds"), ("run", "budget"))


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemSpec
    variant: Variant
    seeds: tuple[int, ...]
    budget: int
    alpha: float = 1.5
    s: float = 5.0
    p_mut: float | None = None
    sigma_lb: float = 0.0
    sigma0: float = 1.0
    m0_mode: str = "uniform_1_3"
    m0: tuple[float, ...] | None = None
    m_int0_mode: str = "zeros"
    m_int0: tuple[int, ...] | None = None
    d0: tuple[float, ...] | None = None
    epsilon: float | None = None
    trace_stride: int = 1
    source: str | None = field(default=None, compare=False)

    @property
    def params(self) -> StrategyParams:
        return StrategyParams(alpha=self.alpha, s=self.s, sigma_lb=self.sigma_lb, variant=self.variant)

    def with_overrides(self, **changes) -> "ExperimentConfig":
        return validate(replace(self, **changes))

    def initial_state(self, seed: int, run_index: int = 0) -> StrategyState:
        """Initial state for ``seed``; random parts use stream ``(seed, run_index, 1)``."""
        rng = np.random.default_rng([int(seed), int(run_index), 1])
        dco, din = self.problem.dco, self.problem.din
        if self.m0_mode == "uniform_1_3":
            m0 = rng.uniform(1.0, 3.0, dco)
        else:
            m0 = np.asarray(self.m0, dtype=float)
        if self.m_int0_mode == "zeros":
            m_int0 = np.zeros(din, dtype=np.int64)
        elif self.m_int0_mode == "uniform_1_3_int":
            m_int0 = rng.integers(1, 4, din)
        else:
            m_int0 = np.asarray(self.m_int0, dtype=np.int64)
        d0 = None if self.d0 is None else np.asarray(self.d0, dtype=float)
        return init_state(m0, m_int0, self.sigma0, d0)

    def to_pairs(self) -> list[tuple[str, str]]:
        """Flat ``section.key -> text`` listing used in summaries."""
        def fmt(v):
            if v is None:
                return "none"
            if isinstance(v, tuple):
                return ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
            if isinstance(v, float):
                return repr(v)
            return str(getattr(v, "value", v))

        return [
            ("problem.kind", self.problem.kind.value),
            ("problem.dco", str(self.problem.dco)),
            ("problem.din", str(self.problem.din)),
            ("strategy.variant", self.variant.value),
            ("strategy.alpha", fmt(self.alpha)),
            ("strategy.s", fmt(self.s)),
            ("strategy.p_mut", fmt(self.p_mut)),
            ("strategy.sigma_lb", fmt(self.sigma_lb)),
            ("init.sigma0", fmt(self.sigma0)),
            ("init.m0_mode", self.m0_mode),
            ("init.m0", fmt(self.m0)),
            ("init.m_int0_mode", self.m_int0_mode),
            ("init.m_int0", fmt(self.m_int0)),
            ("init.d0", fmt(self.d0) if self.d0 is not None else "ones"),
            ("run.seeds", fmt(self.seeds)),
            ("run.budget", str(self.budget)),
            ("run.epsilon", fmt(self.epsilon)),
            ("run.trace_stride", str(self.trace_stride)),
        ]


def _number(text: str, key: str) -> float:
    try:
        return float(Fraction(text.strip())) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a number: {text!r}", key) from None


def _integer(text: str, key: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}", key) from None


def _vector(text: str, key: str, cast=float) -> tuple:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ConfigError("empty vector", key)
    return tuple(cast(_number(p, key)) if cast is float else _integer(p, key) for p in parts)


def parse_seeds(text: str, key: str = "run.seeds") -> tuple[int, ...]:
    """``0,3,7`` or inclusive ranges ``0-9``; order is kept verbatim."""
    seeds = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1) if not part.startswith("-") else (part, None)
            a, b = _integer(lo, key), _integer(hi, key)
            if b < a:
                raise ConfigError(f"empty seed range {part!r}", key)
            seeds.extend(range(a, b + 1))
        else:
            seeds.append(_integer(part, key))
    return tuple(seeds)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    """Check cross-field invariants and materialize ``sigma_lb``."""
    if not cfg.seeds:
        raise ConfigError("at least one seed is required", "run.seeds")
    if len(set(cfg.seeds)) != len(cfg.seeds):
        raise ConfigError("seeds must be distinct", "run.seeds")
    if cfg.budget < 1:
        raise ConfigError("budget must be >= 1", "run.budget")
    if cfg.trace_stride < 1:
        raise ConfigError("trace_stride must be >= 1", "run.trace_stride")
    if cfg.epsilon is not None and not cfg.epsilon > 0.0:
        raise ConfigError("epsilon must be positive", "run.epsilon")
    if not cfg.sigma0 > 0.0:
        raise ConfigError("sigma0 must be positive", "init.sigma0")
    if cfg.m0_mode not in M0_MODES:
        raise ConfigError(f"must be one of {M0_MODES}", "init.m0_mode")
    if cfg.m_int0_mode not in M_INT0_MODES:
        raise ConfigError(f"must be one of {M_INT0_MODES}", "init.m_int0_mode")
    dco, din = cfg.problem.dco, cfg.problem.din
    if cfg.m0_mode == "explicit" and (cfg.m0 is None or len(cfg.m0) != dco):
        raise ConfigError(f"explicit m0 needs {dco} components", "init.m0")
    if cfg.m_int0_mode == "explicit" and (cfg.m_int0 is None or len(cfg.m_int0) != din):
        raise ConfigError(f"explicit m_int0 needs {din} components", "init.m_int0")
    if cfg.d0 is not None and (len(cfg.d0) != din or min(cfg.d0, default=1.0) <= 0.0):
        raise ConfigError(f"d0 needs {din} positive components", "init.d0")
    sigma_lb = cfg.sigma_lb
    if cfg.p_mut is not None:
        try:
            sigma_lb = sigma_lb_from_pmut(cfg.p_mut)
        except DomainError as exc:
            raise ConfigError(str(exc), "strategy.p_mut") from None
    try:
        StrategyParams(cfg.alpha, cfg.s, sigma_lb, cfg.variant)
    except ContractError as exc:
        raise ConfigError(str(exc), "strategy") from None
    return replace(cfg, sigma_lb=sigma_lb)


def parse_config(text: str, source: str | None = None) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__",
                                       inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        raise ConfigError(f"parse error: {exc}") from None

    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError("unknown section", section)
        for key in parser[section]:
            if key not in SCHEMA[section]:
                raise ConfigError("unknown key", f"{section}.{key}")
    for section, key in REQUIRED:
        if not parser.has_option(section, key):
            raise ConfigError("missing required key", f"{section}.{key}")

    def get(section, key):
        return parser.get(section, key) if parser.has_option(section, key) else None

    has_pmut = get("strategy", "p_mut") is not None
    has_lb = get("strategy", "sigma_lb") is not None
    if has_pmut and has_lb:
        raise ConfigError("p_mut and sigma_lb are mutually exclusive", "strategy.p_mut")

    try:
        problem = ProblemSpec(
            kind=ProblemKind(get("problem", "kind").strip()),
            dco=_integer(get("problem", "dco"), "problem.dco"),
            din=_integer(get("problem", "din") or "0", "problem.din"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), "problem") from None
    try:
        variant = Variant(get("strategy", "variant").strip())
    except ValueError:
        raise ConfigError("must be LB or LUB", "strategy.variant") from None

    kwargs = {}
    if has_pmut:
        kwargs["p_mut"] = _number(get("strategy", "p_mut"), "strategy.p_mut")
    elif has_lb:
        kwargs["sigma_lb"] = _number(get("strategy", "sigma_lb"), "strategy.sigma_lb")
    else:
        kwargs["p_mut"] = 1.0 / (problem.dco + problem.din)
    for key in ("alpha", "s"):
        if get("strategy", key) is not None:
            kwargs[key] = _number(get("strategy", key), f"strategy.{key}")
    if get("init", "sigma0") is not None:
        kwargs["sigma0"] = _number(get("init", "sigma0"), "init.sigma0")
    for key in ("m0_mode", "m_int0_mode"):
        if get("init", key) is not None:
            kwargs[key] = get("init", key).strip()
    if get("init", "m0") is not None:
        kwargs["m0"] = _vector(get("init", "m0"), "init.m0")
        kwargs.setdefault("m0_mode", "explicit")
    if get("init", "m_int0") is not None:
        kwargs["m_int0"] = _vector(get("init", "m_int0"), "init.m_int0", cast=int)
        kwargs.setdefault("m_int0_mode", "explicit")
    d0 = get("init", "d0")
    if d0 is not None and d0.strip() != "ones":
        kwargs["d0"] = _vector(d0, "init.d0")
    eps = get("run", "epsilon")
    if eps is not None and eps.strip().lower() != "none":
        kwargs["epsilon"] = _number(eps, "run.epsilon")
    if get("run", "trace_stride") is not None:
        kwargs["trace_stride"] = _integer(get("run", "trace_stride"), "run.trace_stride")

    cfg = ExperimentConfig(
        problem=problem,
        variant=variant,
        seeds=parse_seeds(get("run", "seeds")),
        budget=_integer(get("run", "budget"), "run.budget"),
        source=source,
        **kwargs,
    )
    return validate(cfg)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, source=str(path))


def config_text(cfg: ExperimentConfig) -> str:
    """Serialize back to the INI schema (round-trips through :func:`parse_config`)."""
    sections: dict[str, list[str]] = {}
    for dotted, value in cfg.to_pairs():
        section, key = dotted.split(".")
        if value == "none" or (key == "sigma_lb" and cfg.p_mut is not None):
            continue
        if key in ("m0",) and cfg.m0_mode != "explicit":
            continue
        if key in ("m_int0",) and cfg.m_int0_mode != "explicit":
            continue
        if key == "seeds":
            value = ",".join(str(s) for s in cfg.seeds)
        sections.setdefault(section, []).append(f"{key} = {value}")
    return "\n".join(f"[{sec}]\n" + "\n".join(lines) + "\n" for sec, lines in sections.items())


def is_finite_number(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)
