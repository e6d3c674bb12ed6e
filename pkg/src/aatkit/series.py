"""Truncated power series with explicit centers, in one and two variables.

A TruncSeries represents f(z) = sum c_k (z - center)^k for k in
[low, order), plus an unknown tail O((z-center)^order).  Coefficients are
either all ExactScalar (exact mode) or all complex (numeric mode); the two
never mix inside one series, and promotion exact -> numeric is explicit and
one-way via ``to_numeric``.  Negative ``low`` gives finite Laurent tails for
pole-type elements.

Every operation records the order to which its output is trustworthy, so
callers (and tests) never compare coefficients beyond validity.

BiSeries is the two-variable analogue with total-degree truncation; it
realizes expansions of f(u+v) and the bivariate coefficients that appear in
addition-theorem work.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import (
    CenterMismatch,
    DivisionByZeroSeries,
    OutsideDisc,
    SingularCenter,
    TooFewCoefficients,
)
from .scalars import ExactScalar

_NUMERIC_ZERO_REL = 1e-12


def _is_exact_scalar(c) -> bool:
    return isinstance(c, (ExactScalar, int, Fraction))


def _as_numeric(c):
    """Numeric coercion that leaves high-precision complex types alone."""
    if isinstance(c, (complex, float, int)):
        return complex(c)
    if isinstance(c, ExactScalar):
        return complex(c)
    return c  # duck-typed complex (e.g. mpmath.mpc) passes through


def _coerce_coeffs(coeffs: Sequence, exact: bool) -> list:
    if exact:
        return [ExactScalar.coerce(c) for c in coeffs]
    return [complex(c) for c in coeffs]


class TruncSeries:
    """Function element: coefficients for exponents low .. order-1."""

    __slots__ = ("center", "low", "coeffs", "order", "exact")

    def __init__(self, center, coeffs: Sequence, low: int = 0,
                 order: int | None = None, exact: bool | None = None):
        if exact is None:
            exact = all(_is_exact_scalar(c) for c in coeffs) and (
                _is_exact_scalar(center) or center == 0)
        self.exact = bool(exact)
        if self.exact:
            self.center = ExactScalar.coerce(center if _is_exact_scalar(center) else 0)
        else:
            self.center = complex(center)
        self.low = int(low)
        self.coeffs = _coerce_coeffs(coeffs, self.exact)
        self.order = int(order) if order is not None else self.low + len(self.coeffs)
        if len(self.coeffs) != self.order - self.low:
            raise ValueError("coefficient list length must equal order - low")

    # -- basics -------------------------------------------------------------

    @staticmethod
    def zeros(center, order: int, exact: bool, low: int = 0) -> "TruncSeries":
        n = order - low
        fill = [ExactScalar.zero()] * n if exact else [0j] * n
        return TruncSeries(center, fill, low=low, order=order, exact=exact)

    @staticmethod
    def const(value, center, order: int, exact: bool) -> "TruncSeries":
        s = TruncSeries.zeros(center, order, exact)
        s.coeffs[0 - s.low] = ExactScalar.coerce(value) if exact else complex(value)
        return s

    @staticmethod
    def identity(center, order: int, exact: bool) -> "TruncSeries":
        """The local coordinate (z - center) itself."""
        s = TruncSeries.zeros(center, order, exact)
        if order > 1:
            s.coeffs[1] = ExactScalar.one() if exact else 1 + 0j
        return s

    def coefficient(self, k: int):
        if k < self.low or k >= self.order:
            return ExactScalar.zero() if self.exact else 0j
        return self.coeffs[k - self.low]

    def _zero_coeff(self):
        return ExactScalar.zero() if self.exact else 0j

    def _coeff_is_zero(self, c, scale: float = 1.0) -> bool:
        if self.exact:
            return c.is_zero()
        return abs(c) <= _NUMERIC_ZERO_REL * scale

    def _scale_hint(self) -> float:
        m = max((abs(complex(c)) for c in self.coeffs), default=0.0)
        return m if m > 0 else 1.0

    def valuation(self) -> int | None:
        """Exponent of the first nonzero coefficient, or None if all zero."""
        scale = None if self.exact else self._scale_hint()
        for k in range(self.low, self.order):
            c = self.coefficient(k)
            if not self._coeff_is_zero(c, scale if scale is not None else 1.0):
                return k
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def normalized_low(self) -> "TruncSeries":
        """Strip leading zero coefficients (raise low to the valuation)."""
        v = self.valuation()
        if v is None or v == self.low:
            return self
        return TruncSeries(self.center, self.coeffs[v - self.low:], low=v,
                           order=self.order, exact=self.exact)

    def truncate(self, order: int) -> "TruncSeries":
        order = min(order, self.order)
        return TruncSeries(self.center, self.coeffs[: order - self.low],
                           low=self.low, order=order, exact=self.exact)

    def to_numeric(self) -> "TruncSeries":
        """Explicit one-way promotion of coefficients to complex."""
        if not self.exact:
            return self
        return TruncSeries(complex(self.center), [complex(c) for c in self.coeffs],
                           low=self.low, order=self.order, exact=False)

    def _same_center(self, other: "TruncSeries") -> bool:
        if self.exact and other.exact:
            return self.center == other.center
        return abs(complex(self.center) - complex(other.center)) == 0.0

    def _pair(self, other: "TruncSeries") -> tuple["TruncSeries", "TruncSeries"]:
        if not isinstance(other, TruncSeries):
            raise TypeError("expected TruncSeries")
        a, b = self, other
        if a.exact != b.exact:
            a, b = a.to_numeric(), b.to_numeric()
        if not a._same_center(b):
            raise CenterMismatch(f"centers differ: {a.center} vs {b.center}")
        return a, b

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.center, [-c for c in self.coeffs],
                           low=self.low, order=self.order, exact=self.exact)

    def __add__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self + TruncSeries.const(other, self.center, self.order, self.exact)
        a, b = self._pair(other)
        low = min(a.low, b.low)
        order = min(a.order, b.order)
        coeffs = [a.coefficient(k) + b.coefficient(k) for k in range(low, order)]
        return TruncSeries(a.center, coeffs, low=low, order=order, exact=a.exact)

    __radd__ = __add__

    def __sub__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(other, self.center, self.order, self.exact)
        return self + (-other)

    def __rsub__(self, other) -> "TruncSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            if self.exact and _is_exact_scalar(other):
                c = ExactScalar.coerce(other)
                return TruncSeries(self.center, [k * c for k in self.coeffs],
                                   low=self.low, order=self.order, exact=True)
            z = complex(other)
            s = self.to_numeric()
            return TruncSeries(s.center, [k * z for k in s.coeffs],
                               low=s.low, order=s.order, exact=False)
        a, b = self._pair(other)
        va = a.valuation()
        vb = b.valuation()
        if va is None or vb is None:
            low = a.low + b.low
            order = min(a.order + b.low, b.order + a.low)
            return TruncSeries.zeros(a.center, order, a.exact, low=low)
        order = min(a.order + vb, b.order + va)
        low = va + vb
        n = order - low
        out = [a._zero_coeff() for _ in range(n)]
        for i in range(va, a.order):
            ci = a.coefficient(i)
            if (a.exact and ci.is_zero()) or (not a.exact and ci == 0):
                continue
            for j in range(vb, min(b.order, order - i)):
                out[i + j - low] = out[i + j - low] + ci * b.coefficient(j)
        return TruncSeries(a.center, out, low=low, order=order, exact=a.exact)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        v = self.valuation()
        if v is None:
            raise DivisionByZeroSeries("divisor is zero to the available order")
        s = self.normalized_low()
        b0 = s.coeffs[0]
        # shift to valuation zero, invert the unit part, shift back
        n = s.order - s.low
        inv0 = (ExactScalar.one() / b0) if s.exact else (1.0 / b0)
        out = [s._zero_coeff() for _ in range(n)]
        out[0] = inv0
        for k in range(1, n):
            acc = s._zero_coeff()
            for j in range(1, k + 1):
                acc = acc + s.coeffs[j] * out[k - j]
            out[k] = -inv0 * acc
        # result exponents: -v .. (order - 2v)
        low = -v
        order = s.order - 2 * v
        return TruncSeries(s.center, out[: order - low], low=low,
                           order=order, exact=s.exact)

    def __truediv__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            if self.exact and _is_exact_scalar(other):
                return self * (ExactScalar.one() / ExactScalar.coerce(other))
            return self * (1.0 / complex(other))
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> "TruncSeries":
        return self.inverse() * other

    def __pow__(self, n: int) -> "TruncSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.const(1, self.center, self.order, self.exact)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "TruncSeries":
        if self.low == 0:
            coeffs = [self.coefficient(k) * k for k in range(1, self.order)]
            return TruncSeries(self.center, coeffs, low=0, order=self.order - 1,
                               exact=self.exact)
        # exponent k maps to k-1; the k = 0 slot differentiates to zero
        coeffs = [self.coefficient(k) * k for k in range(self.low, self.order)]
        return TruncSeries(self.center, coeffs, low=self.low - 1,
                           order=self.order - 1, exact=self.exact)

    def eval(self, z: complex) -> complex:
        """Numeric evaluation of the truncated element at a point."""
        w = complex(z) - complex(self.center)
        acc = 0j
        for k in range(self.order - 1, self.low - 1, -1):
            acc = acc * w + complex(self.coefficient(k))
        if self.low:
            acc *= w ** self.low
        return acc

    def __repr__(self) -> str:
        tag = "exact" if self.exact else "numeric"
        return (f"TruncSeries(center={self.center}, low={self.low}, "
                f"order={self.order}, {tag}, coeffs={self.coeffs!r})")

    # -- JSON -----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        c = complex(self.center)
        if self.exact:
            coeffs = [[[str(k.re.numerator), str(k.re.denominator)],
                       [str(k.im.numerator), str(k.im.denominator)]]
                      for k in self.coeffs]
        else:
            coeffs = [[k.real, k.imag] for k in self.coeffs]
        return {"center": [c.real, c.imag], "low": self.low,
                "order": self.order, "exact": self.exact, "coeffs": coeffs}

    @staticmethod
    def from_json_dict(data: dict) -> "TruncSeries":
        exact = bool(data["exact"])
        cre, cim = data["center"]
        if exact:
            center = ExactScalar(Fraction(cre), Fraction(cim))
            coeffs = [ExactScalar(Fraction(int(k[0][0]), int(k[0][1])),
                                  Fraction(int(k[1][0]), int(k[1][1])))
                      for k in data["coeffs"]]
        else:
            center = complex(cre, cim)
            coeffs = [complex(k[0], k[1]) for k in data["coeffs"]]
        return TruncSeries(center, coeffs, low=int(data["low"]),
                           order=int(data["order"]), exact=exact)


# -- spec operation surface ------------------------------------------------

def series_arith(a: TruncSeries, b: TruncSeries, op: str) -> TruncSeries:
    """add | mul | div on two elements sharing a center."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def radius_estimate(s: TruncSeries) -> float:
    """Cauchy-Hadamard radius estimate from the top half of the coefficients.

    Returns math.inf when the coefficients decay super-geometrically (entire
    behavior); raises TooFewCoefficients below 8 nonzero coefficients.
    """
    items = [(k, abs(complex(s.coefficient(k))))
             for k in range(max(s.low, 1), s.order)]
    nonzero = [(k, a) for k, a in items if a > 0]
    if sum(1 for k in range(s.low, s.order)
           if not s._coeff_is_zero(s.coefficient(k), s._scale_hint())) < 8:
        raise TooFewCoefficients("radius estimate needs >= 8 nonzero coefficients")
    if not nonzero:
        raise TooFewCoefficients("no usable coefficients")
    half = [it for it in nonzero if it[0] >= nonzero[-1][0] // 2]
    if len(half) < 2:
        half = nonzero
    roots = [a ** (1.0 / k) for k, a in half]
    if roots[-1] < 0.75 * roots[0] and roots[-1] < 0.75 * max(roots):
        return math.inf
    top = max(roots)
    if top == 0.0:
        return math.inf
    return 1.0 / top


def _tail_radius(s: TruncSeries) -> float:
    """Local decay rate of the last few coefficients (for tail bounds)."""
    ks = [k for k in range(max(s.low, 1), s.order)
          if abs(complex(s.coefficient(k))) > 0]
    if len(ks) < 2:
        return math.inf
    k1 = ks[-1]
    k0 = ks[max(0, len(ks) - 6)]
    if k1 == k0:
        return math.inf
    a1 = abs(complex(s.coefficient(k1)))
    a0 = abs(complex(s.coefficient(k0)))
    if a1 == 0 or a0 == 0:
        return math.inf
    ratio = (a1 / a0) ** (1.0 / (k1 - k0))
    if ratio <= 0:
        return math.inf
    return 1.0 / ratio


def rearrange_at(s: TruncSeries, new_center, tol: float = 1e-9) -> TruncSeries:
    """Re-expand an element about a new center inside its disc.

    The result represents the same function near the new center; both series
    agree on the overlap of the two discs.  The output order N' is reduced so
    that the unknown-tail contribution to every reported coefficient is below
    `tol` relative to the local coefficient scale.
    """
    exact_target = s.exact and _is_exact_scalar(new_center)
    if exact_target:
        d_exact = ExactScalar.coerce(new_center) - s.center
        if d_exact.is_zero():
            return s
        d = abs(d_exact)
    else:
        d = abs(complex(new_center) - complex(s.center))
        if d == 0.0:
            return s
    r_tail = _tail_radius(s)
    r_run = radius_estimate(s)
    r = r_tail if math.isfinite(r_tail) else r_run
    if math.isfinite(r_run) and d >= r_run:
        raise OutsideDisc(f"|new - old| = {d:.3g} >= radius estimate {r_run:.3g}")
    q = 0.0 if math.isinf(r) else d / r
    if q >= 1.0:
        raise OutsideDisc(f"tail ratio {q:.3g} >= 1")
    n = s.order
    # keep coefficient k while C(n, k) q^(n-k) / (1-q) <= tol
    new_order = 0
    for k in range(0, n):
        bound = math.comb(n, k) * q ** (n - k) / (1.0 - q) if q > 0 else 0.0
        if bound <= tol:
            new_order = k + 1
        else:
            break
    if new_order <= 0:
        raise OutsideDisc("no coefficient satisfies the tail tolerance")
    if exact_target:
        dd = ExactScalar.coerce(new_center) - s.center
        out = [ExactScalar.zero() for _ in range(new_order)]
        for nn in range(s.low, s.order):
            a = s.coefficient(nn)
            if a.is_zero():
                continue
            # (z-c)^nn = (w + d)^nn with w = z - s; generalized binomial for nn < 0
            coef = ExactScalar.one()
            power = nn
            dpow = dd ** nn if nn >= 0 else (ExactScalar.one() / dd ** (-nn))
            binom = Fraction(1)
            for j in range(0, new_order):
                if j > 0:
                    binom = binom * Fraction(power - (j - 1), j)
                    dpow = dpow / dd
                if nn >= 0 and j > nn:
                    break
                out[j] = out[j] + a * ExactScalar(binom) * dpow
        return TruncSeries(ExactScalar.coerce(new_center), out, low=0,
                           order=new_order, exact=True)
    sn = s.to_numeric()
    dd = complex(new_center) - complex(sn.center)
    out_n = [0j] * new_order
    for nn in range(sn.low, sn.order):
        a = sn.coefficient(nn)
        if a == 0:
            continue
        binom = 1.0
        dpow = dd ** nn
        for j in range(0, new_order):
            if j > 0:
                binom = binom * (nn - (j - 1)) / j
                dpow = dpow / dd
            if nn >= 0 and j > nn:
                break
            out_n[j] += a * binom * dpow
    return TruncSeries(complex(new_center), out_n, low=0, order=new_order,
                       exact=False)


def compose_shift(f: TruncSeries) -> "BiSeries":
    """Expand f(center + (x+y)) as a bivariate series in (x, y).

    Coefficient of x^i y^j is binomial(i+j, i) * a_{i+j}.
    """
    if f.low < 0:
        v = f.valuation()
        if v is None or v < 0:
            raise SingularCenter("cannot shift-expand a polar element")
        f = f.normalized_low()
    out = BiSeries.zeros(f.order, f.exact, center=(f.center, f.center))
    for k in range(f.low, f.order):
        a = f.coefficient(k)
        if f._coeff_is_zero(a, f._scale_hint()):
            continue
        for i in range(0, k + 1):
            c = math.comb(k, i)
            term = a * ExactScalar(c) if f.exact else a * c
            out._add_term(i, k - i, term)
    out._clean()
    return out


class BiSeries:
    """Bivariate series: {(i, j): coeff} with i + j < order (total degree)."""

    __slots__ = ("coeffs", "order", "center", "exact")

    def __init__(self, coeffs: dict, order: int, exact: bool, center=(0, 0)):
        self.order = int(order)
        self.exact = bool(exact)
        self.center = center
        self.coeffs = {}
        for (i, j), c in coeffs.items():
            if i + j >= self.order:
                continue
            c = ExactScalar.coerce(c) if exact else _as_numeric(c)
            if (exact and c.is_zero()) or (not exact and c == 0):
                continue
            self.coeffs[(i, j)] = c

    @staticmethod
    def zeros(order: int, exact: bool, center=(0, 0)) -> "BiSeries":
        return BiSeries({}, order, exact, center)

    @staticmethod
    def const(value, order: int, exact: bool, center=(0, 0)) -> "BiSeries":
        v = ExactScalar.coerce(value) if exact else _as_numeric(value)
        return BiSeries({(0, 0): v}, order, exact, center)

    @staticmethod
    def from_univariate(s: TruncSeries, slot: int, order: int | None = None) -> "BiSeries":
        """Embed a power series as a series in x (slot=0) or y (slot=1)."""
        if s.low < 0 and (s.valuation() or -1) < 0:
            raise SingularCenter("cannot embed a polar element")
        order = order if order is not None else s.order
        out = BiSeries.zeros(min(order, s.order), s.exact)
        for k in range(max(s.low, 0), s.order):
            c = s.coefficient(k)
            key = (k, 0) if slot == 0 else (0, k)
            out._add_term(*key, c)
        out._clean()
        return out

    def _zero(self):
        return ExactScalar.zero() if self.exact else 0j

    def _add_term(self, i: int, j: int, c):
        if i + j >= self.order:
            return
        cur = self.coeffs.get((i, j))
        self.coeffs[(i, j)] = c if cur is None else cur + c

    def _clean(self):
        if self.exact:
            dead = [k for k, c in self.coeffs.items() if c.is_zero()]
        else:
            dead = [k for k, c in self.coeffs.items() if c == 0]
        for k in dead:
            del self.coeffs[k]

    def coefficient(self, i: int, j: int):
        return self.coeffs.get((i, j), self._zero())

    def max_abs(self) -> float:
        return max((float(abs(c)) if not self.exact else abs(complex(c))
                    for c in self.coeffs.values()), default=0.0)

    def valuation(self, tol: float = 0.0) -> int | None:
        """Minimal total degree with a (significant) nonzero coefficient."""
        scale = self.max_abs()
        best = None
        for (i, j), c in self.coeffs.items():
            if not self.exact and tol > 0 and abs(c) <= tol * max(scale, 1.0):
                continue
            d = i + j
            if best is None or d < best:
                best = d
        return best

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.valuation(tol) is None

    def truncate(self, order: int) -> "BiSeries":
        return BiSeries(self.coeffs, min(order, self.order), self.exact, self.center)

    def to_numeric(self) -> "BiSeries":
        if not self.exact:
            return self
        return BiSeries({k: complex(c) for k, c in self.coeffs.items()},
                        self.order, False, self.center)

    def _pair(self, other: "BiSeries"):
        a, b = self, other
        if a.exact != b.exact:
            a, b = a.to_numeric(), b.to_numeric()
        return a, b

    def __neg__(self) -> "BiSeries":
        return BiSeries({k: -c for k, c in self.coeffs.items()},
                        self.order, self.exact, self.center)

    def __add__(self, other) -> "BiSeries":
        if not isinstance(other, BiSeries):
            other = BiSeries.const(other, self.order, self.exact, self.center)
        a, b = self._pair(other)
        out = BiSeries(dict(a.coeffs), min(a.order, b.order), a.exact, a.center)
        for k, c in b.coeffs.items():
            out._add_term(*k, c)
        out._clean()
        return out

    __radd__ = __add__

    def __sub__(self, other) -> "BiSeries":
        if not isinstance(other, BiSeries):
            other = BiSeries.const(other, self.order, self.exact, self.center)
        return self + (-other)

    def __rsub__(self, other) -> "BiSeries":
        return (-self) + other

    def __mul__(self, other) -> "BiSeries":
        if not isinstance(other, BiSeries):
            if self.exact and _is_exact_scalar(other):
                c = ExactScalar.coerce(other)
                return BiSeries({k: v * c for k, v in self.coeffs.items()},
                                self.order, True, self.center)
            z = _as_numeric(other) if not _is_exact_scalar(other) else complex(
                ExactScalar.coerce(other))
            s = self.to_numeric()
            return BiSeries({k: v * z for k, v in s.coeffs.items()},
                            s.order, False, s.center)
        a, b = self._pair(other)
        va = a.valuation() or 0
        vb = b.valuation() or 0
        order = min(a.order + vb, b.order + va)
        out = BiSeries.zeros(order, a.exact, a.center)
        for (i1, j1), c1 in a.coeffs.items():
            for (i2, j2), c2 in b.coeffs.items():
                if i1 + j1 + i2 + j2 >= order:
                    continue
                out._add_term(i1 + i2, j1 + j2, c1 * c2)
        out._clean()
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = BiSeries.const(1, self.order, self.exact, self.center)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "BiSeries":
        """Inverse of a series with invertible constant term.

        Solved order by order (numerically stable; no large intermediate
        powers)."""
        c0 = self.coefficient(0, 0)
        bad = c0.is_zero() if self.exact else (c0 == 0)
        if bad:
            raise DivisionByZeroSeries("constant term is zero; cannot invert")
        inv0 = (ExactScalar.one() / c0) if self.exact else (1.0 / c0)
        out: dict[tuple[int, int], object] = {(0, 0): inv0}
        tail = [(k, c) for k, c in self.coeffs.items() if k != (0, 0)]
        for d in range(1, self.order):
            for i in range(d + 1):
                j = d - i
                acc = None
                for (p, q), b in tail:
                    if p <= i and q <= j:
                        c = out.get((i - p, j - q))
                        if c is None:
                            continue
                        term = b * c
                        acc = term if acc is None else acc + term
                if acc is not None:
                    out[(i, j)] = -inv0 * acc
        return BiSeries(out, self.order, self.exact, self.center)

    def __truediv__(self, other) -> "BiSeries":
        if not isinstance(other, BiSeries):
            if self.exact and _is_exact_scalar(other):
                return self * (ExactScalar.one() / ExactScalar.coerce(other))
            return self * (1.0 / complex(other))
        a, b = self._pair(other)
        return a * b.inverse()

    def derivative(self, slot: int) -> "BiSeries":
        out = BiSeries.zeros(self.order - 1, self.exact, self.center)
        for (i, j), c in self.coeffs.items():
            if slot == 0 and i > 0:
                out._add_term(i - 1, j, c * i)
            elif slot == 1 and j > 0:
                out._add_term(i, j - 1, c * j)
        out._clean()
        return out

    def restrict_y0(self) -> TruncSeries:
        """Set the second variable to zero, leaving a series in the first."""
        coeffs = [self._zero() for _ in range(self.order)]
        for (i, j), c in self.coeffs.items():
            if j == 0:
                coeffs[i] = c
        center = self.center[0] if isinstance(self.center, tuple) else self.center
        return TruncSeries(center, coeffs, low=0, order=self.order, exact=self.exact)

    def eval(self, x: complex, y: complex) -> complex:
        acc = 0j
        for (i, j), c in self.coeffs.items():
            acc += complex(c) * x ** i * y ** j
        return acc

    def __repr__(self) -> str:
        tag = "exact" if self.exact else "numeric"
        items = sorted(self.coeffs.items(), key=lambda t: (sum(t[0]), t[0]))
        return f"BiSeries(order={self.order}, {tag}, {items!r})"
