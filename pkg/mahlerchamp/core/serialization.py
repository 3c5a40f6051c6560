"""
Serialization - Canonical text forms for exact values and symbolic DAGs.

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

Exact numbers are written as decimal integer strings ("p/q", "a/b+c/di").
A DAG is an indexed node list in topological order; nodes refer to their
children by index, so shared subexpressions are written once.
"""

from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional

import mpmath
from mpmath import iv

from .balls import ComplexBox
from .gaussian import GaussianRational, fraction_from_mpf
from .symbolic import SymbolicValue


class DagFormatError(ValueError):
    """Raised for malformed node lists."""
    pass


def fraction_to_text(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_from_text(text: str) -> Fraction:
    if not isinstance(text, str) or "." in text or "e" in text.lower():
        raise DagFormatError(f"Not an exact rational: {text!r}")
    return Fraction(text)


def gaussian_to_text(q: GaussianRational) -> str:
    return q.canonical()


def gaussian_from_text(text: str) -> GaussianRational:
    try:
        return GaussianRational.parse(text)
    except ValueError as e:
        raise DagFormatError(str(e))


def mpf_to_text(x) -> str:
    """Exact binary value of an mpmath real as a rational string."""
    return fraction_to_text(fraction_from_mpf(x))


def box_to_dict(box: ComplexBox) -> Dict[str, List[str]]:
    """Exact interval endpoints of the box."""
    re, im = box.value.real, box.value.imag
    return {
        "re": [mpf_to_text(re.a), mpf_to_text(re.b)],
        "im": [mpf_to_text(im.a), mpf_to_text(im.b)],
    }


def box_from_dict(data: Dict[str, List[str]]) -> ComplexBox:
    try:
        parts = [fraction_from_text(t) for key in ("re", "im") for t in data[key]]
    except (KeyError, TypeError) as e:
        raise DagFormatError(f"Malformed box: {data!r}") from e
    if len(parts) != 4 or parts[0] > parts[1] or parts[2] > parts[3]:
        raise DagFormatError(f"Malformed box: {data!r}")
    longest = max(q.numerator.bit_length() + q.denominator.bit_length() for q in parts) + 8
    # binary rationals convert exactly once the precision covers them
    with mpmath.workprec(max(53, longest)):
        a, b, c, d = (mpmath.mpf(q.numerator) / q.denominator for q in parts)
        return ComplexBox.of_interval(iv.mpc(iv.mpf([a, b]), iv.mpf([c, d])))


class DagWriter:
    """Assigns indices to nodes reachable from the values it is given."""

    def __init__(self):
        self.nodes: List[Dict[str, Any]] = []
        self._index: Dict[int, int] = {}

    def add(self, value: SymbolicValue) -> int:
        # iterative post-order so deep chains do not hit the recursion limit
        stack = [(value, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in self._index:
                continue
            if not expanded:
                stack.append((node, True))
                for child in reversed(node.args):
                    if id(child) not in self._index:
                        stack.append((child, False))
                continue
            self._index[id(node)] = len(self.nodes)
            self.nodes.append(self._encode(node))
        return self._index[id(value)]

    def _encode(self, node: SymbolicValue) -> Dict[str, Any]:
        entry: Dict[str, Any] = {"op": node.kind}
        if node.kind == "exact":
            entry["value"] = gaussian_to_text(node.payload)
            return entry
        entry["args"] = [self._index[id(a)] for a in node.args]
        if node.kind == "base":
            entry["base"] = node.payload.id
        elif node.kind == "pow":
            entry["exponent"] = node.payload
        return entry


def read_dag(
    nodes: Iterable[Dict[str, Any]],
    resolve_base: Callable[[str], Any],
) -> List[SymbolicValue]:
    """Rebuild nodes; `resolve_base` maps a base id to a base function."""
    built: List[SymbolicValue] = []
    for position, entry in enumerate(nodes):
        op = entry.get("op")
        refs = entry.get("args", [])
        if not all(isinstance(i, int) and 0 <= i < position for i in refs):
            raise DagFormatError(f"Node {position} refers to an unknown or later node")
        args = tuple(built[i] for i in refs)
        if op == "exact":
            built.append(SymbolicValue.exact(gaussian_from_text(entry["value"])))
        elif op == "base":
            built.append(SymbolicValue.base_eval(resolve_base(entry["base"]), args[0]))
        elif op == "pow":
            built.append(SymbolicValue("pow", args, int(entry["exponent"])))
        elif op in ("add", "mul", "div", "neg"):
            built.append(SymbolicValue(op, args))
        else:
            raise DagFormatError(f"Unknown node op at {position}: {op!r}")
    return built


def node_ref(nodes: List[SymbolicValue], index: Optional[int]) -> Optional[SymbolicValue]:
    if index is None:
        return None
    if not 0 <= index < len(nodes):
        raise DagFormatError(f"Node reference {index} out of range")
    return nodes[index]
