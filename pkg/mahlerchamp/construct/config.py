"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Construction Config - Typed settings for a staged construction run.

Numbers are exact: rationals as "p/q", never decimals. Unknown keys and
out-of-range values are reported with the line they came from.
"""

from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from ..core.precision import PrecisionPolicy
from ..entire.registry import default_registry
from ..entire.theta import ThetaSequence
from .config_parser import ConfigEntry, ConfigError, ConfigParser

FIELDS = ("gaussian",)
ENUMERATIONS = ("height-lex",)
CYCLE_SUPPLY = ("demand", "full")


def parse_rational(text: str) -> Fraction:
    """
    Raises:
        ValueError: for decimals and anything that is not p/q
    """
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"'{text}' is not exact; write rationals as p/q")
    return Fraction(text)


def parse_sigma(text: str) -> Dict[int, Optional[int]]:
    """'1:2, 2:1, 3:inf' -> {1: 2, 2: 1, 3: None}; None means infinity."""
    sigma: Dict[int, Optional[int]] = {}
    for item in (p.strip() for p in text.split(",")):
        if not item:
            continue
        if ":" not in item:
            raise ValueError(f"sigma item '{item}' must look like k:s")
        k_text, s_text = (x.strip() for x in item.split(":", 1))
        k = int(k_text)
        if k in sigma:
            raise ValueError(f"sigma sets period {k} twice")
        sigma[k] = None if s_text in ("inf", "infinity") else int(s_text)
    return sigma


@dataclass
class ConstructionConfig:
    base: str = "exp"
    field: str = "gaussian"
    sigma: Dict[int, Optional[int]] = dc_field(default_factory=dict)
    theta: ThetaSequence = dc_field(default_factory=ThetaSequence)
    max_stage: int = 3
    seed: int = 0
    precision_bits: int = 128
    max_precision_bits: int = 8192
    enumeration: str = "height-lex"
    radius_step: Fraction = Fraction(1, 2)
    radius_cap: Fraction = Fraction(64)
    seed_density: int = 8
    max_resamples: int = 24
    cycle_supply: str = "demand"
    quadrature_tolerance: Fraction = Fraction(1, 10 ** 12)
    initial_radius: Optional[Fraction] = None

    # schedule -----------------------------------------------------------

    def s(self, k: int) -> Optional[int]:
        """s_k, None for infinity; s_0 is ignored."""
        if k < 1:
            return 0
        return self.sigma.get(k, 0)

    def orbit_target(self, k: int, m: int) -> int:
        """min(m, s_k); an infinite s_k behaves like s_k >= max_stage."""
        s = self.s(k)
        return m if s is None else min(m, s)

    @property
    def policy(self) -> PrecisionPolicy:
        return PrecisionPolicy(self.precision_bits, self.max_precision_bits)

    # validation ---------------------------------------------------------

    def validate(self) -> List[str]:
        problems = []
        if not default_registry().has(self.base):
            problems.append(f"unknown base '{self.base}'")
        if self.field not in FIELDS:
            problems.append(f"unknown field '{self.field}' (supported: {', '.join(FIELDS)})")
        if self.enumeration not in ENUMERATIONS:
            problems.append(f"unknown enumeration '{self.enumeration}'")
        if self.cycle_supply not in CYCLE_SUPPLY:
            problems.append(f"cycle_supply must be one of {', '.join(CYCLE_SUPPLY)}")
        if self.max_stage < 1:
            problems.append("max_stage must be at least 1")
        for k, s in sorted(self.sigma.items()):
            if k < 0:
                problems.append(f"sigma has negative period {k}")
            if s is not None and s < 0:
                problems.append(f"s_{k} = {s} must be non-negative")
        problems.extend(self.theta.violations(self.max_stage + 2))
        if self.precision_bits < 16 or self.precision_bits > self.max_precision_bits:
            problems.append(
                f"precision_bits {self.precision_bits} must lie in [16, {self.max_precision_bits}]"
            )
        if self.radius_step <= 0:
            problems.append("radius_step must be positive")
        if self.radius_cap <= 1:
            problems.append("radius_cap must exceed 1")
        if self.initial_radius is not None and self.initial_radius <= 1:
            problems.append("initial_radius must exceed 1")
        if self.seed_density < 1 or self.max_resamples < 1:
            problems.append("seed_density and max_resamples must be positive")
        if self.quadrature_tolerance <= 0:
            problems.append("quadrature_tolerance must be positive")
        return problems

    def check(self) -> "ConstructionConfig":
        """
        Raises:
            ConfigError: listing every problem found
        """
        problems = self.validate()
        if problems:
            raise ConfigError("Invalid configuration: " + "; ".join(problems))
        return self

    # snapshot -----------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base,
            "field": self.field,
            "sigma": {str(k): ("inf" if s is None else s) for k, s in sorted(self.sigma.items())},
            "theta": self.theta.to_dict(),
            "max_stage": self.max_stage,
            "seed": self.seed,
            "precision_bits": self.precision_bits,
            "max_precision_bits": self.max_precision_bits,
            "enumeration": self.enumeration,
            "radius_step": _text(self.radius_step),
            "radius_cap": _text(self.radius_cap),
            "seed_density": self.seed_density,
            "max_resamples": self.max_resamples,
            "cycle_supply": self.cycle_supply,
            "quadrature_tolerance": _text(self.quadrature_tolerance),
            "initial_radius": None if self.initial_radius is None else _text(self.initial_radius),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ConstructionConfig":
        return cls(
            base=data["base"],
            field=data.get("field", "gaussian"),
            sigma={int(k): (None if v == "inf" else int(v)) for k, v in data["sigma"].items()},
            theta=ThetaSequence.from_dict(data.get("theta", {})),
            max_stage=int(data["max_stage"]),
            seed=int(data["seed"]),
            precision_bits=int(data["precision_bits"]),
            max_precision_bits=int(data["max_precision_bits"]),
            enumeration=data.get("enumeration", "height-lex"),
            radius_step=Fraction(data["radius_step"]),
            radius_cap=Fraction(data["radius_cap"]),
            seed_density=int(data["seed_density"]),
            max_resamples=int(data["max_resamples"]),
            cycle_supply=data.get("cycle_supply", "demand"),
            quadrature_tolerance=Fraction(data["quadrature_tolerance"]),
            initial_radius=(None if data.get("initial_radius") is None
                            else Fraction(data["initial_radius"])),
        )


def _text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _int(text: str) -> int:
    return int(text.strip())


_SCALARS: Dict[str, Callable[[str], Any]] = {
    "base": str,
    "field": str,
    "sigma": parse_sigma,
    "max_stage": _int,
    "seed": _int,
    "precision_bits": _int,
    "max_precision_bits": _int,
    "enumeration": str,
    "radius_step": parse_rational,
    "radius_cap": parse_rational,
    "seed_density": _int,
    "max_resamples": _int,
    "cycle_supply": str,
    "quadrature_tolerance": parse_rational,
    "initial_radius": parse_rational,
}


def config_from_entries(entries: Dict[str, ConfigEntry]) -> ConstructionConfig:
    """
    Raises:
        ConfigError: for unknown keys, bad values (with line numbers) and
            failed validation
    """
    values: Dict[str, Any] = {}
    overrides: Dict[int, Fraction] = {}
    for key, entry in entries.items():
        try:
            if key.startswith("theta."):
                overrides[int(key.split(".", 1)[1])] = parse_rational(entry.value)
            elif key in _SCALARS:
                values[key] = _SCALARS[key](entry.value)
            else:
                raise entry.error("unknown key")
        except ValueError as e:
            raise entry.error(str(e))
    config = ConstructionConfig(theta=ThetaSequence(overrides), **values)
    problems = config.validate()
    if problems:
        # point at the line of the first key a problem names, if any
        for problem in problems:
            for key, entry in entries.items():
                if problem.startswith(key) or f"'{entry.value}'" in problem:
                    raise entry.error(problem)
        raise ConfigError("Invalid configuration: " + "; ".join(problems))
    return config


def parse_config(source: str) -> ConstructionConfig:
    return config_from_entries(ConfigParser().parse(source))


def load_config(path: Union[str, Path]) -> ConstructionConfig:
    """
    Raises:
        ConfigError: for unreadable or invalid files
    """
    path = Path(path)
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}")
    return parse_config(source)
