"""
Base Function Registry

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

Maps base-function ids (as written in configs and stage files) to
BaseFunction instances. The supplied bases are pre-registered; user bases
can be added from Python or loaded from a module.
"""

from __future__ import annotations

import importlib
import re
from typing import Callable, Dict, List, Optional

from ..core.errors import MahlerError
from ..core.gaussian import GaussianRational
from .base_functions import BaseFunction, ExpAffine, PolynomialBase, Trig


class BaseRegistryError(MahlerError):
    """Exception raised for base registry errors."""
    pass


_AFFINE = re.compile(r"^exp_affine\[(?P<c0>[^,\]]+),(?P<c1>[^\]]+)\]$")
_POLY = re.compile(r"^poly\[(?P<coeffs>[^\]]*)\]$")


class BaseRegistry:
    """
    Registry of base functions by id.

    Example usage:
        registry = BaseRegistry()
        g = registry.get("exp")
        registry.register("my_base", lambda: MyBase())
    """

    def __init__(self):
        self._factories: Dict[str, Callable[[], BaseFunction]] = {}
        self._metadata: Dict[str, Dict] = {}
        self._instances: Dict[str, BaseFunction] = {}
        self._register_supplied()

    def _register_supplied(self) -> None:
        self.register("exp", lambda: ExpAffine(0, 0), "e^z")
        self.register("exp_minus_1", lambda: ExpAffine(-1, 0), "e^z - 1")
        self.register("exp_plus_z", lambda: ExpAffine(0, 1), "e^z + z (no fixed points)")
        self.register("exp_plus_1", lambda: ExpAffine(1, 0), "e^z + 1")
        self.register("sin", lambda: Trig("sin", 1), "sin z")
        self.register("cos", lambda: Trig("cos", 1), "cos z")
        self.register("neg_sin", lambda: Trig("sin", -1), "-sin z")
        self.register("neg_cos", lambda: Trig("cos", -1), "-cos z")

    def register(
        self,
        name: str,
        factory: Callable[[], BaseFunction],
        description: Optional[str] = None,
    ) -> None:
        """
        Register a base under `name`.

        Raises:
            BaseRegistryError: If the name is invalid or factory is not callable
        """
        if not name or not isinstance(name, str) or not re.match(r"^[A-Za-z_][\w']*$", name):
            raise BaseRegistryError(f"Invalid base id: {name!r}")
        if not callable(factory):
            raise BaseRegistryError(f"Factory for '{name}' is not callable")
        self._factories[name] = factory
        self._metadata[name] = {"description": description, "source": "direct"}
        self._instances.pop(name, None)

    def register_module(self, module_name: str, prefix: str = "") -> List[str]:
        """Register every BaseFunction subclass instance exposed as BASES in a module."""
        try:
            module = importlib.import_module(module_name)
        except ImportError as e:
            raise BaseRegistryError(f"Cannot import module '{module_name}': {e}")
        bases = getattr(module, "BASES", None)
        if not isinstance(bases, dict):
            raise BaseRegistryError(f"Module '{module_name}' has no BASES dictionary")
        registered = []
        for name, factory in bases.items():
            self.register(f"{prefix}{name}", factory, description=f"module:{module_name}")
            self._metadata[f"{prefix}{name}"]["source"] = f"module:{module_name}"
            registered.append(f"{prefix}{name}")
        return registered

    def has(self, name: str) -> bool:
        return name in self._factories or bool(_AFFINE.match(name) or _POLY.match(name))

    def get(self, name: str) -> BaseFunction:
        """
        Instance for `name`; instances are cached so equal ids share an object.

        Raises:
            BaseRegistryError: If the id is unknown
        """
        if name in self._instances:
            return self._instances[name]
        instance = self._build(name)
        if not isinstance(instance, BaseFunction):
            raise BaseRegistryError(f"Factory for '{name}' did not return a BaseFunction")
        self._instances[name] = instance
        return instance

    def _build(self, name: str) -> BaseFunction:
        if name in self._factories:
            return self._factories[name]()
        match = _AFFINE.match(name)
        if match:
            return ExpAffine(GaussianRational.parse(match["c0"]), GaussianRational.parse(match["c1"]))
        match = _POLY.match(name)
        if match:
            items = [t for t in match["coeffs"].split(",") if t]
            return PolynomialBase([GaussianRational.parse(t) for t in items], name=name)
        raise BaseRegistryError(
            f"Unknown base function '{name}'. Available: {', '.join(self.list_bases())}"
        )

    def list_bases(self) -> List[str]:
        return sorted(self._factories)

    def describe(self, name: str) -> Optional[str]:
        return self._metadata.get(name, {}).get("description")


_default_registry: Optional[BaseRegistry] = None


def default_registry() -> BaseRegistry:
    global _default_registry
    if _default_registry is None:
        _default_registry = BaseRegistry()
    return _default_registry


def get_base(name: str) -> BaseFunction:
    return default_registry().get(name)
