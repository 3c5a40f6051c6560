"""

Copyright (C) 2025-2030, All Rights Reserved
Ashutosh Sinha
Email: ajsinha@gmail.com

LEGAL NOTICE:
This software is proprietary and confidential. Unauthorized copying,
distribution, modification, or use is strictly prohibited without
explicit written permission from the copyright holder.

Patent Pending: Certain implementations may be subject to patent applications.

Symbolic Values - Exactly-known complex quantities as immutable DAGs.

A SymbolicValue is an ExactElement of K, a BaseEval(base, argument), or a
field combination of other values. Each node carries:
- a per-precision cache of certified enclosures (enclose refines on demand)
- a normal form used by reduce_exact: a polynomial over K in "atoms",
  where an atom is a base evaluation at a canonical argument or a quotient
  with a non-constant denominator. A value is exact when its normal form
  is a constant.

Base functions are duck-typed here: any object with `id`,
`eval_enclosure(box)` and `exact_value(q)` can sit in a BaseEval node.
"""

import threading
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import mpmath

from .balls import ComplexBox
from .errors import DivisionByEnclosedZero, PrecisionExhausted
from .gaussian import ONE, ZERO, GaussianRational
from .precision import PrecisionPolicy, default_policy

NORMAL_FORM_LIMIT = 4096


class ExactnessTag(Enum):
    EXACT_IN_K = "exact-in-K"
    EXACT_ALGEBRAIC = "exact-algebraic"
    TRANSCENDENTAL = "transcendental-symbolic"


class _NotExact:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NotExact"


NOT_EXACT = _NotExact()


class _FormTooLarge(Exception):
    pass


# ---------------------------------------------------------------------------
# Normal forms: {monomial: coefficient}, monomial = sorted ((atom, power), ...)
# ---------------------------------------------------------------------------

Monomial = Tuple[Tuple[str, int], ...]
Form = Dict[Monomial, GaussianRational]

_UNIT: Monomial = ()


def _form_const(q: GaussianRational) -> Form:
    return {} if q.is_zero() else {_UNIT: q}


def _form_atom(key: str) -> Form:
    return {((key, 1),): ONE}


def _form_add(a: Form, b: Form) -> Form:
    out = dict(a)
    for mono, coef in b.items():
        total = out.get(mono, ZERO) + coef
        if total.is_zero():
            out.pop(mono, None)
        else:
            out[mono] = total
    if len(out) > NORMAL_FORM_LIMIT:
        raise _FormTooLarge()
    return out


def _form_scale(a: Form, q: GaussianRational) -> Form:
    if q.is_zero():
        return {}
    return {mono: coef * q for mono, coef in a.items()}


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    powers: Dict[str, int] = dict(m1)
    for atom, p in m2:
        powers[atom] = powers.get(atom, 0) + p
    return tuple(sorted(powers.items()))


def _form_mul(a: Form, b: Form) -> Form:
    out: Form = {}
    if len(a) * len(b) > NORMAL_FORM_LIMIT * 4:
        raise _FormTooLarge()
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = _mono_mul(m1, m2)
            total = out.get(mono, ZERO) + c1 * c2
            if total.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = total
    if len(out) > NORMAL_FORM_LIMIT:
        raise _FormTooLarge()
    return out


def _form_constant(a: Form) -> Optional[GaussianRational]:
    if not a:
        return ZERO
    if len(a) == 1 and _UNIT in a:
        return a[_UNIT]
    return None


def _form_key(a: Form) -> str:
    parts = []
    for mono in sorted(a):
        atoms = "*".join(f"{atom}^{p}" for atom, p in mono)
        parts.append(f"({a[mono].canonical()}){'*' + atoms if atoms else ''}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# DAG nodes
# ---------------------------------------------------------------------------

Operand = Union["SymbolicValue", GaussianRational, int, Fraction]


class SymbolicValue:
    """Immutable expression node; see module docstring."""

    __slots__ = (
        "kind", "args", "payload", "_boxes", "_lock", "_form", "_has_base", "witness",
    )

    KINDS = ("exact", "base", "add", "mul", "div", "neg", "pow")

    def __init__(self, kind: str, args: Tuple["SymbolicValue", ...] = (), payload: Any = None):
        if kind not in self.KINDS:
            raise ValueError(f"Unknown symbolic node kind: {kind}")
        self.kind = kind
        self.args = tuple(args)
        self.payload = payload
        self._boxes: Dict[int, ComplexBox] = {}
        self._lock = threading.Lock()
        self._form: Optional[Form] = None
        self._has_base = kind == "base" or any(a._has_base for a in self.args)
        self.witness: Optional[Tuple[int, Fraction]] = None
        if kind == "div":
            self.witness = _nonzero_witness(self.args[1])

    # constructors -------------------------------------------------------

    @classmethod
    def exact(cls, value: Union[GaussianRational, int, Fraction]) -> "SymbolicValue":
        return cls("exact", (), GaussianRational.of(value))

    @classmethod
    def base_eval(cls, base: Any, argument: Operand) -> "SymbolicValue":
        return cls("base", (_lift(argument),), base)

    @classmethod
    def sum(cls, values) -> "SymbolicValue":
        items = [_lift(v) for v in values]
        if not items:
            return cls.exact(0)
        if len(items) == 1:
            return items[0]
        return cls("add", tuple(items))

    # operators ----------------------------------------------------------

    def __add__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("add", (self, _lift(other)))

    def __radd__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("add", (_lift(other), self))

    def __sub__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("add", (self, -_lift(other)))

    def __rsub__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("add", (_lift(other), -self))

    def __mul__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("mul", (self, _lift(other)))

    def __rmul__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("mul", (_lift(other), self))

    def __truediv__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("div", (self, _lift(other)))

    def __rtruediv__(self, other: Operand) -> "SymbolicValue":
        return SymbolicValue("div", (_lift(other), self))

    def __neg__(self) -> "SymbolicValue":
        return SymbolicValue("neg", (self,))

    def __pow__(self, exponent: int) -> "SymbolicValue":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("Symbolic powers take non-negative integer exponents")
        return SymbolicValue("pow", (self,), exponent)

    # enclosures ---------------------------------------------------------

    def box(self, bits: int) -> ComplexBox:
        """Certified enclosure computed at `bits` of working precision."""
        cached = self._boxes.get(bits)
        if cached is not None:
            return cached
        with mpmath.workprec(bits):
            for node in _postorder(self, lambda n: bits not in n._boxes):
                result = node._compute_box(bits)
                with node._lock:
                    node._boxes.setdefault(bits, result)
        return self._boxes[bits]

    def _compute_box(self, bits: int) -> ComplexBox:
        kind = self.kind
        if kind == "exact":
            return ComplexBox.from_gaussian(self.payload)
        if kind == "base":
            arg = self.args[0]
            if arg.kind == "exact":
                known = self.payload.exact_value(arg.payload)
                if known is not None:
                    return ComplexBox.from_gaussian(known)
            return self.payload.eval_enclosure(arg.box(bits))
        if kind == "add":
            total = self.args[0].box(bits)
            for a in self.args[1:]:
                total = total + a.box(bits)
            return total
        if kind == "mul":
            total = self.args[0].box(bits)
            for a in self.args[1:]:
                total = total * a.box(bits)
            return total
        if kind == "neg":
            return -self.args[0].box(bits)
        if kind == "pow":
            return self.args[0].box(bits) ** self.payload
        num, den = self.args
        return num.box(bits) / den.box(bits)

    @property
    def cached_enclosure(self) -> Optional[ComplexBox]:
        """Tightest enclosure computed so far."""
        with self._lock:
            if not self._boxes:
                return None
            return self._boxes[max(self._boxes)]

    def approx(self, bits: int = 128) -> "mpmath.mpc":
        return self.box(bits).center

    # exactness ----------------------------------------------------------

    def normal_form(self) -> Form:
        if self._form is None:
            for node in _postorder(self, lambda n: n._form is None):
                node._form = node._compute_form()
        return self._form

    def _compute_form(self) -> Form:
        kind = self.kind
        if kind == "exact":
            return _form_const(self.payload)
        if kind == "base":
            arg_form = self.args[0].normal_form()
            const = _form_constant(arg_form)
            if const is not None:
                known = self.payload.exact_value(const)
                if known is not None:
                    return _form_const(known)
                return _form_atom(f"{self.payload.id}[{const.canonical()}]")
            return _form_atom(f"{self.payload.id}[{_form_key(arg_form)}]")
        if kind == "add":
            out: Form = {}
            for a in self.args:
                out = _form_add(out, a.normal_form())
            return out
        if kind == "mul":
            out = _form_const(ONE)
            for a in self.args:
                out = _form_mul(out, a.normal_form())
            return out
        if kind == "neg":
            return _form_scale(self.args[0].normal_form(), GaussianRational(-1))
        if kind == "pow":
            out = _form_const(ONE)
            base = self.args[0].normal_form()
            for _ in range(self.payload):
                out = _form_mul(out, base)
            return out
        num = self.args[0].normal_form()
        den = self.args[1].normal_form()
        const = _form_constant(den)
        if const is not None and not const.is_zero():
            return _form_scale(num, const.inverse())
        return _form_atom(f"div[{_form_key(num)} / {_form_key(den)}]")

    @property
    def has_base(self) -> bool:
        return self._has_base

    @property
    def tag(self) -> ExactnessTag:
        value = reduce_exact(self)
        if value is NOT_EXACT:
            return ExactnessTag.TRANSCENDENTAL
        return ExactnessTag.EXACT_ALGEBRAIC if self._has_base else ExactnessTag.EXACT_IN_K

    def __repr__(self) -> str:
        if self.kind == "exact":
            return f"Exact({self.payload})"
        if self.kind == "base":
            return f"{self.payload.id}({self.args[0]!r})"
        if self.kind == "pow":
            return f"({self.args[0]!r})^{self.payload}"
        return f"{self.kind}({', '.join(repr(a) for a in self.args)})"


def _postorder(root: SymbolicValue, pending) -> List[SymbolicValue]:
    """Nodes under root (children first) for which `pending(node)` holds."""
    order: List[SymbolicValue] = []
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded:
            seen.add(id(node))
            order.append(node)
            continue
        if not pending(node):
            seen.add(id(node))
            continue
        stack.append((node, True))
        for child in reversed(node.args):
            if id(child) not in seen:
                stack.append((child, False))
    return order


def _lift(value: Operand) -> SymbolicValue:
    if isinstance(value, SymbolicValue):
        return value
    return SymbolicValue.exact(value)


def _nonzero_witness(den: SymbolicValue) -> Tuple[int, Fraction]:
    """Precision and a positive lower bound on |den|."""
    try:
        form = den.normal_form()
        const = _form_constant(form)
    except _FormTooLarge:
        const = None
    if const is not None:
        if const.is_zero():
            raise DivisionByEnclosedZero("Denominator reduces exactly to 0")
        return 0, const.abs_bounds()[0]
    for bits in default_policy().levels():
        try:
            b = den.box(bits)
        except DivisionByEnclosedZero:
            continue
        if not b.contains_zero():
            return bits, b.abs_lower_fraction()
    raise DivisionByEnclosedZero("Denominator enclosure contains 0 at the precision ceiling")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def _as_mpf(value) -> "mpmath.mpf":
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def enclose(
    value: SymbolicValue,
    target_radius,
    policy: Optional[PrecisionPolicy] = None,
) -> ComplexBox:
    """
    Enclosure of `value` with radius at most `target_radius`.

    Raises:
        PrecisionExhausted: the ceiling precision cannot reach the radius
        DivisionByEnclosedZero: a denominator still straddles 0 at the ceiling
    """
    policy = policy or default_policy()
    target = _as_mpf(target_radius)
    last_error: Optional[Exception] = None
    last_box: Optional[ComplexBox] = None
    for bits in policy.levels():
        try:
            last_box = value.box(bits)
        except DivisionByEnclosedZero as e:
            last_error = e
            continue
        last_error = None
        if last_box.radius <= target:
            return last_box
    if last_error is not None:
        raise last_error
    raise PrecisionExhausted(
        f"Cannot reach radius {mpmath.nstr(target, 5)} within {policy.max_bits} bits "
        f"(best {mpmath.nstr(last_box.radius, 5) if last_box else 'none'})",
        bits=policy.max_bits,
    )


def enclose_relative(
    value: SymbolicValue,
    bits: int,
    policy: Optional[PrecisionPolicy] = None,
) -> ComplexBox:
    """Enclosure whose radius is at most 2^-bits times its modulus."""
    policy = policy or default_policy()
    exact = reduce_exact(value)
    if exact is not NOT_EXACT:
        with mpmath.workprec(max(bits, 53) + 2):
            return ComplexBox.from_gaussian(exact)
    ceiling = max(policy.max_bits, bits * 2)
    p = max(bits, policy.start_bits)
    while True:
        try:
            b = value.box(p)
            if b.radius <= mpmath.ldexp(abs(b.center), -bits):
                return b
        except DivisionByEnclosedZero:
            pass
        if p >= ceiling:
            raise PrecisionExhausted(
                f"Relative enclosure 2^-{bits} not reached within {ceiling} bits", bits=ceiling
            )
        p = min(p * 2, ceiling)


def reduce_exact(value: SymbolicValue):
    """The GaussianRational the DAG simplifies to, or NOT_EXACT."""
    try:
        form = value.normal_form()
    except _FormTooLarge:
        return NOT_EXACT
    const = _form_constant(form)
    return NOT_EXACT if const is None else const


def is_exactly(value: SymbolicValue, q: GaussianRational) -> bool:
    r = reduce_exact(value)
    return r is not NOT_EXACT and r == q
