"""Scalar tower underlying all curve arithmetic.

Four kinds of scalar coexist and interoperate:

* exact rationals -- plain :class:`fractions.Fraction`;
* :class:`QuadExt` -- elements ``a + b*sqrt(radicand)`` of a quadratic
  extension of the rationals, in canonical form;
* :class:`ComplexApprox` -- arbitrary-precision complex numbers (mpmath
  backed) carrying their working precision and an equality tolerance;
* :class:`SymbolicScalar` -- rational functions in the formal symbols
  ``gamma`` (base genus), ``r`` (number of marked points / sections),
  ``deg_cover`` (degree of the smooth base cover), ``lam`` (curve
  parameter) and the intersection unknowns ``Rsq``, ``x1``, ``x2``, kept
  in canonical cancelled form (sympy backed).

Exact kinds satisfy the field axioms exactly; ComplexApprox satisfies
them to within its tolerance, and *all* equality tests on it are
approximate by design (``|z - w| < tol``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
import sympy as sp

DEFAULT_PREC_BITS = 256
DEFAULT_TOL = 1e-30

# Formal symbols available to SymbolicScalar (fixed registry).
SYM_GAMMA = sp.Symbol("gamma")
SYM_R = sp.Symbol("r")
SYM_DEG_COVER = sp.Symbol("deg_cover")
SYM_LAM = sp.Symbol("lam")
SYM_RSQ = sp.Symbol("Rsq")
SYM_X1 = sp.Symbol("x1")
SYM_X2 = sp.Symbol("x2")

_SYMBOLS = {
    "gamma": SYM_GAMMA,
    "r": SYM_R,
    "deg_cover": SYM_DEG_COVER,
    "lam": SYM_LAM,
    "Rsq": SYM_RSQ,
    "x1": SYM_X1,
    "x2": SYM_X2,
}


class NotRepresentable:
    """Outcome of a square root that leaves the exact tower.

    This is a normal result, not an error: callers fall back to
    :class:`ComplexApprox` arithmetic when they receive it.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOT_REPRESENTABLE"

    def __bool__(self):
        return False


NOT_REPRESENTABLE = NotRepresentable()


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` (or a plain integer/decimal string) exactly."""
    return Fraction(text.strip())


def format_rational(q) -> str:
    """Render a rational as the canonical ``"num/den"`` string."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_sqrt(q: Fraction):
    """Exact square root of a rational, or ``None`` if irrational."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# Quadratic extension Q(sqrt(radicand))
# ---------------------------------------------------------------------------


def quadext(a, b, radicand) -> Union[Fraction, "QuadExt"]:
    """Canonical element ``a + b*sqrt(radicand)``.

    Collapses to a plain Fraction when ``b == 0`` or when the radicand is
    a perfect rational square, so that a QuadExt instance always has
    ``b != 0`` and a non-square radicand; equality is then componentwise.
    """
    a, b, radicand = Fraction(a), Fraction(b), Fraction(radicand)
    if radicand == 0:
        raise ValueError("radicand must be nonzero")
    if b == 0:
        return a
    root = rational_sqrt(radicand)
    if root is not None:
        return a + b * root
    return QuadExt(a, b, radicand)


@dataclass(frozen=True)
class QuadExt:
    """``a + b*sqrt(radicand)`` with ``b != 0`` and a non-square radicand.

    Use the :func:`quadext` factory; direct construction skips the
    canonical collapse.
    """

    a: Fraction
    b: Fraction
    radicand: Fraction

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.radicand != self.radicand:
                return None
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(Fraction(other), Fraction(0), self.radicand)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quadext(self.a + o.a, self.b + o.b, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.radicand)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quadext(self.a - o.a, self.b - o.b, self.radicand)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return quadext(
            self.a * o.a + self.b * o.b * self.radicand,
            self.a * o.b + self.b * o.a,
            self.radicand,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - b^2 * radicand`` (a rational)."""
        return self.a * self.a - self.b * self.b * self.radicand

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.radicand)

    def inverse(self):
        n = self.norm()
        if n == 0:
            # cannot happen in canonical form (radicand non-square)
            raise ZeroDivisionError("zero-norm quadratic extension element")
        return quadext(self.a / n, -self.b / n, self.radicand)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, QuadExt) and o.a == 0 and o.b == 0:
            raise ZeroDivisionError("division by zero")
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return quadext(self.a / Fraction(other), self.b / Fraction(other), self.radicand)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result: Union[Fraction, QuadExt] = Fraction(1)
        base: Union[Fraction, QuadExt] = self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (
                self.a == other.a
                and self.b == other.b
                and self.radicand == other.radicand
            )
        if isinstance(other, (int, Fraction)):
            return False  # canonical QuadExt has b != 0
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.radicand))

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.radicand}))"

    def to_mpc(self, prec: int) -> mpmath.mpc:
        with mpmath.workprec(prec):
            rad = mpmath.mpf(self.radicand.numerator) / self.radicand.denominator
            root = mpmath.sqrt(mpmath.mpc(rad))
            a = mpmath.mpf(self.a.numerator) / self.a.denominator
            b = mpmath.mpf(self.b.numerator) / self.b.denominator
            return a + b * root


# ---------------------------------------------------------------------------
# Arbitrary-precision complex approximations
# ---------------------------------------------------------------------------


def _lift_to_mpc(value, prec: int):
    """Lift an exact scalar (or mpmath number) to an mpc at ``prec`` bits."""
    with mpmath.workprec(prec):
        if isinstance(value, ComplexApprox):
            return mpmath.mpc(value.re, value.im)
        if isinstance(value, QuadExt):
            return value.to_mpc(prec)
        if isinstance(value, Fraction):
            return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
        if isinstance(value, int):
            return mpmath.mpc(value)
        if isinstance(value, (mpmath.mpf, mpmath.mpc)):
            return mpmath.mpc(value)
        if isinstance(value, (float, complex)):
            return mpmath.mpc(value)
    raise TypeError(f"cannot lift {type(value).__name__} to a complex approximation")


@dataclass(frozen=True)
class ComplexApprox:
    """Arbitrary-precision complex value with precision and tolerance.

    Equality testing is approximate by design: two values are considered
    equal when ``|z - w| < tol``.  Use :meth:`approx_equal`; the ``==``
    operator compares representations exactly (so instances stay
    hashable) and is not the numeric equality of the type.
    """

    re: mpmath.mpf
    im: mpmath.mpf
    prec: int = DEFAULT_PREC_BITS
    tol: float = DEFAULT_TOL

    @classmethod
    def of(cls, value, prec: int = DEFAULT_PREC_BITS, tol: float = DEFAULT_TOL) -> "ComplexApprox":
        z = _lift_to_mpc(value, prec)
        return cls(z.real, z.imag, prec, tol)

    @classmethod
    def from_re_im_strings(cls, re: str, im: str, prec: int = DEFAULT_PREC_BITS,
                           tol: float = DEFAULT_TOL) -> "ComplexApprox":
        with mpmath.workprec(prec):
            return cls(mpmath.mpf(re), mpmath.mpf(im), prec, tol)

    @property
    def mpc(self) -> mpmath.mpc:
        return mpmath.mpc(self.re, self.im)

    def _binary(self, other, op):
        try:
            prec = max(self.prec, other.prec) if isinstance(other, ComplexApprox) else self.prec
            tol = max(self.tol, other.tol) if isinstance(other, ComplexApprox) else self.tol
            zo = _lift_to_mpc(other, prec)
        except TypeError:
            return NotImplemented
        with mpmath.workprec(prec):
            z = op(mpmath.mpc(self.re, self.im), zo)
        return ComplexApprox(z.real, z.imag, prec, tol)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ComplexApprox) and other.is_zero():
            raise ZeroDivisionError("division by (approximately) zero")
        if isinstance(other, (int, Fraction)) and other == 0:
            raise ZeroDivisionError("division by zero")
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        if self.is_zero():
            raise ZeroDivisionError("division by (approximately) zero")
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        with mpmath.workprec(self.prec):
            return ComplexApprox(-self.re, -self.im, self.prec, self.tol)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        with mpmath.workprec(self.prec):
            z = mpmath.mpc(self.re, self.im) ** n
        return ComplexApprox(z.real, z.imag, self.prec, self.tol)

    def sqrt(self) -> "ComplexApprox":
        with mpmath.workprec(self.prec):
            z = mpmath.sqrt(mpmath.mpc(self.re, self.im))
        return ComplexApprox(z.real, z.imag, self.prec, self.tol)

    def abs_value(self) -> mpmath.mpf:
        with mpmath.workprec(self.prec):
            return abs(mpmath.mpc(self.re, self.im))

    def distance(self, other) -> mpmath.mpf:
        prec = max(self.prec, getattr(other, "prec", self.prec))
        with mpmath.workprec(prec):
            return abs(mpmath.mpc(self.re, self.im) - _lift_to_mpc(other, prec))

    def approx_equal(self, other) -> bool:
        """Tolerance equality: ``|self - other| < tol`` (approximate)."""
        return self.distance(other) < max(self.tol, getattr(other, "tol", 0.0))

    def is_zero(self) -> bool:
        return self.abs_value() < self.tol

    def at_precision(self, prec: int, tol=None) -> "ComplexApprox":
        return ComplexApprox(self.re, self.im, prec, self.tol if tol is None else tol)

    def __repr__(self):
        with mpmath.workprec(self.prec):
            return f"~({mpmath.nstr(self.re, 17)} + {mpmath.nstr(self.im, 17)}j)"

    def to_str(self, digits: int = 40) -> str:
        with mpmath.workprec(self.prec):
            return f"{mpmath.nstr(self.re, digits)},{mpmath.nstr(self.im, digits)}"


# ---------------------------------------------------------------------------
# Symbolic rational functions
# ---------------------------------------------------------------------------


def _to_sympy(value):
    if isinstance(value, SymbolicScalar):
        return value.expr
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, sp.Expr):
        return value
    raise TypeError(f"cannot interpret {type(value).__name__} as a symbolic scalar")


class SymbolicScalar:
    """Rational function in the fixed formal symbols, canonically cancelled.

    Canonical form: ``cancel`` of the expression, i.e. expanded numerator
    and denominator with their polynomial gcd removed and a normalised
    leading sign.  Equality of canonical forms is decidable and is what
    every symbolic identity check in the package uses.
    """

    __slots__ = ("expr",)

    def __init__(self, expr):
        object.__setattr__(self, "expr", sp.cancel(sp.together(_to_sympy(expr))))

    def __setattr__(self, *_):
        raise AttributeError("SymbolicScalar is immutable")

    @classmethod
    def symbol(cls, name: str) -> "SymbolicScalar":
        return cls(_SYMBOLS[name])

    def _binary(self, other, op):
        try:
            o = _to_sympy(other)
        except TypeError:
            return NotImplemented
        return SymbolicScalar(op(self.expr, o))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _to_sympy(other)
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return SymbolicScalar(self.expr / o)

    def __rtruediv__(self, other):
        if self.expr == 0:
            raise ZeroDivisionError("division by zero")
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        return SymbolicScalar(-self.expr)

    def __pow__(self, n: int):
        return SymbolicScalar(self.expr ** n)

    def __eq__(self, other):
        try:
            o = _to_sympy(other)
        except TypeError:
            return NotImplemented
        return sp.cancel(self.expr - o) == 0

    def __hash__(self):
        return hash(self.expr)

    def is_zero(self) -> bool:
        return self.expr == 0

    def free_symbol_names(self) -> set:
        return {s.name for s in self.expr.free_symbols}

    def substitute(self, assignments: dict) -> "SymbolicScalar":
        """Substitute ``{symbol name: exact value or SymbolicScalar}``."""
        subs = {_SYMBOLS[name]: _to_sympy(val) for name, val in assignments.items()}
        return SymbolicScalar(self.expr.subs(subs, simultaneous=True))

    def as_fraction(self) -> Fraction:
        """Exact rational value of a constant expression."""
        v = sp.nsimplify(self.expr)
        if not v.is_Rational:
            raise ValueError(f"not a constant rational: {self.expr}")
        return Fraction(int(v.p), int(v.q))

    def __repr__(self):
        return f"SymbolicScalar({self.expr})"

    def __str__(self):
        return str(self.expr)


def symbols(*names: str):
    """Convenience constructor: ``gamma, r = symbols('gamma', 'r')``."""
    made = tuple(SymbolicScalar.symbol(n) for n in names)
    return made[0] if len(made) == 1 else made


# ---------------------------------------------------------------------------
# Square roots inside the exact tower
# ---------------------------------------------------------------------------


def sqrt_in_tower(x, radicand=None):
    """Exact square root of ``x`` within ``Q(sqrt(radicand))`` if possible.

    Returns a Fraction or QuadExt ``y`` with ``y*y == x``, or
    :data:`NOT_REPRESENTABLE` when the root leaves the tower (the caller
    then falls back to ComplexApprox arithmetic).
    """
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        root = rational_sqrt(x)
        if root is not None:
            return root
        if radicand is not None and radicand != 0:
            ratio = x / Fraction(radicand)
            t = rational_sqrt(ratio)
            if t is not None:
                # (t*sqrt(radicand))^2 == t^2 * radicand == x
                return quadext(0, t, radicand)
        return NOT_REPRESENTABLE
    if isinstance(x, QuadExt):
        # solve (c + d*sqrt(rad))^2 == a + b*sqrt(rad)
        n = rational_sqrt(x.norm())
        if n is None:
            return NOT_REPRESENTABLE
        for signed in (n, -n):
            csq = (x.a + signed) / 2
            c = rational_sqrt(csq)
            if c is not None and c != 0:
                d = x.b / (2 * c)
                candidate = quadext(c, d, x.radicand)
                if candidate * candidate == x:
                    return candidate
        return NOT_REPRESENTABLE
    raise TypeError(f"sqrt_in_tower expects an exact scalar, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# Kind-aware helpers used throughout the curve layers
# ---------------------------------------------------------------------------

ExactScalar = Union[int, Fraction, QuadExt]
Scalar = Union[int, Fraction, QuadExt, ComplexApprox, SymbolicScalar]


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadExt))


def is_approx(x) -> bool:
    return isinstance(x, ComplexApprox)


def as_approx(x, prec: int = DEFAULT_PREC_BITS, tol: float = DEFAULT_TOL) -> ComplexApprox:
    if isinstance(x, ComplexApprox):
        return x
    return ComplexApprox.of(x, prec, tol)


def scalar_is_zero(x) -> bool:
    if isinstance(x, ComplexApprox):
        return x.is_zero()
    if isinstance(x, SymbolicScalar):
        return x.is_zero()
    return x == 0


def scalars_equal(a, b) -> bool:
    """Equality across kinds: exact where possible, tolerance otherwise."""
    if isinstance(a, ComplexApprox) or isinstance(b, ComplexApprox):
        prec = max(getattr(a, "prec", DEFAULT_PREC_BITS), getattr(b, "prec", DEFAULT_PREC_BITS))
        tol = max(getattr(a, "tol", 0.0), getattr(b, "tol", 0.0)) or DEFAULT_TOL
        return as_approx(a, prec, tol).approx_equal(as_approx(b, prec, tol))
    return a == b


def scalar_to_json(x):
    """Tagged, canonical JSON form; rationals as ``"num/den"`` strings."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return {"kind": "rational", "value": format_rational(x)}
    if isinstance(x, QuadExt):
        return {
            "kind": "quadext",
            "a": format_rational(x.a),
            "b": format_rational(x.b),
            "radicand": format_rational(x.radicand),
        }
    if isinstance(x, ComplexApprox):
        digits = max(8, int(x.prec * 0.302) + 2)
        with mpmath.workprec(x.prec):
            return {
                "kind": "complex",
                "re": mpmath.nstr(x.re, digits),
                "im": mpmath.nstr(x.im, digits),
                "prec": x.prec,
                "tol": repr(x.tol),
            }
    if isinstance(x, SymbolicScalar):
        return {"kind": "symbolic", "value": str(x.expr)}
    raise TypeError(f"cannot serialize scalar of type {type(x).__name__}")


def scalar_from_json(obj):
    kind = obj["kind"]
    if kind == "rational":
        return parse_rational(obj["value"])
    if kind == "quadext":
        return quadext(
            parse_rational(obj["a"]),
            parse_rational(obj["b"]),
            parse_rational(obj["radicand"]),
        )
    if kind == "complex":
        return ComplexApprox.from_re_im_strings(
            obj["re"], obj["im"], int(obj["prec"]), float(obj["tol"])
        )
    if kind == "symbolic":
        return SymbolicScalar(sp.sympify(obj["value"], locals=_SYMBOLS))
    raise ValueError(f"unknown scalar kind {kind!r}")
