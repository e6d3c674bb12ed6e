"""Function specifications: the analytic functions under study.

A FunctionSpec describes phi in one of three ways:

* builtin: exp, sin, cos, tan, or a rational function P/Q with exact
  polynomial data;
* algebroid: a branch of an algebroid curve, selected by index at a base
  point (branches there sorted by the deterministic branch order);
* element: a raw truncated series carrying its own validity disc.

Every spec supports numeric evaluation, derivative evaluation, a regularity
test, and extraction of a Taylor element at a center (exact coefficients
whenever the function has rational Taylor data at a rational center).
``translate(a)`` gives the spec of x |-> phi(x + a), which is how an
addition theorem at an awkward base point is moved to the origin.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .algebroid import (
    AlgebroidCurve,
    _as_exact,
    _safe_stem,
    exact_branch_element,
    puiseux_expand,
    track_branch,
)
from .errors import SingularCenter
from .poly import MultiPoly
from .scalars import ExactScalar, rationalize
from .series import TruncSeries, radius_estimate

class FunctionSpec:
    """Tagged description of the function phi (possibly translated)."""

    def __init__(self, kind: str, *, name: str = "", numer: MultiPoly | None = None,
                 denom: MultiPoly | None = None, curve: AlgebroidCurve | None = None,
                 branch: int = 0, base: complex = 0j,
                 series: TruncSeries | None = None, shift=0):
        self.kind = kind
        self.name = name
        self.numer = numer
        self.denom = denom
        self.curve = curve
        self.branch = branch
        self.base = complex(base)
        self.series = series
        self.shift = shift  # int | Fraction | ExactScalar | complex
        self._branch_value: complex | None = None
        self._rat_arrays = None  # cached numpy coefficients for rational eval

    def _rat(self):
        if self._rat_arrays is None:
            var = _rational_var(self.numer, self.denom)
            def desc(p):
                cs = p.univariate_coeffs(var) if not p.is_zero() else [0]
                return tuple(complex(c) for c in reversed(cs))
            def deriv(cs):
                n = len(cs) - 1
                if n == 0:
                    return (0j,)
                return tuple(c * (n - i) for i, c in enumerate(cs[:-1]))
            pn, qn = desc(self.numer), desc(self.denom)
            self._rat_arrays = (pn, qn, deriv(pn), deriv(qn),
                                max(max(abs(c) for c in qn), 1.0))
        return self._rat_arrays

    # -- constructors ------------------------------------------------------

    @staticmethod
    def builtin(name: str) -> "FunctionSpec":
        if name not in ("exp", "sin", "cos", "tan"):
            raise ValueError(f"unknown builtin {name!r}")
        return FunctionSpec("builtin", name=name)

    @staticmethod
    def rational(numer: MultiPoly, denom: MultiPoly) -> "FunctionSpec":
        if denom.is_zero():
            raise ValueError("zero denominator")
        return FunctionSpec("builtin", name="rational", numer=numer, denom=denom)

    @staticmethod
    def algebroid(curve: AlgebroidCurve, branch: int = 0,
                  base: complex = 0j) -> "FunctionSpec":
        return FunctionSpec("algebroid", name=f"branch{branch}", curve=curve,
                            branch=branch, base=base)

    @staticmethod
    def element(series: TruncSeries, name: str = "element") -> "FunctionSpec":
        return FunctionSpec("element", name=name, series=series)

    def translate(self, offset) -> "FunctionSpec":
        """The spec of x |-> phi(x + offset)."""
        new_shift = _add_shift(self.shift, offset)
        out = FunctionSpec(self.kind, name=self.name, numer=self.numer,
                           denom=self.denom, curve=self.curve, branch=self.branch,
                           base=self.base, series=self.series, shift=new_shift)
        return out

    def label(self) -> str:
        tag = self.name or self.kind
        if complex(_to_complex(self.shift)) != 0:
            tag += f"(x{_fmt_shift(self.shift)})"
        return tag

    # -- evaluation ---------------------------------------------------------

    def eval(self, u: complex) -> complex:
        w = complex(u) + _to_complex(self.shift)
        if self.kind == "builtin":
            if self.name == "exp":
                return cmath.exp(w)
            if self.name == "sin":
                return cmath.sin(w)
            if self.name == "cos":
                return cmath.cos(w)
            if self.name == "tan":
                return cmath.tan(w)
            pn, qn, _dp, _dq, _s = self._rat()
            return _horner(pn, w) / _horner(qn, w)
        if self.kind == "element":
            return self.series.eval(w)
        return self._algebroid_value(w)

    def eval_deriv(self, u: complex) -> complex:
        w = complex(u) + _to_complex(self.shift)
        if self.kind == "builtin":
            if self.name == "exp":
                return cmath.exp(w)
            if self.name == "sin":
                return cmath.cos(w)
            if self.name == "cos":
                return -cmath.sin(w)
            if self.name == "tan":
                c = cmath.cos(w)
                return 1.0 / (c * c)
            pn, qn, dpn, dqn, _s = self._rat()
            p, q = _horner(pn, w), _horner(qn, w)
            dp, dq = _horner(dpn, w), _horner(dqn, w)
            return (dp * q - p * dq) / (q * q)
        if self.kind == "element":
            return self.series.derivative().eval(w)
        z = self._algebroid_value(w)
        c = self.curve
        return -c.eval_du(w, z) / c.eval_dz(w, z)

    def is_regular(self, u: complex) -> bool:
        w = complex(u) + _to_complex(self.shift)
        if self.kind == "builtin":
            if self.name in ("exp", "sin", "cos"):
                return True
            if self.name == "tan":
                return abs(cmath.cos(w)) > 1e-6
            _pn, qn, _dp, _dq, scale = self._rat()
            return abs(_horner(qn, w)) > 1e-9 * scale
        if self.kind == "element":
            try:
                r = radius_estimate(self.series)
            except Exception:
                r = math.inf
            return abs(w - complex(self.series.center)) < 0.8 * r
        sing = self.curve.singular_locations()
        return all(abs(w - s) > 1e-3 * max(1.0, abs(w)) for s in sing)

    def default_base(self) -> complex:
        """Base point policy: 0 unless singular there, then 1/2."""
        return 0j if self.is_regular(0j) else 0.5 + 0j

    def _algebroid_value(self, w: complex) -> complex:
        if self._branch_value is None:
            branches = puiseux_expand(self.curve, self.base, 8)
            if not (0 <= self.branch < len(branches)):
                raise ValueError(f"branch index {self.branch} out of range")
            b = branches[self.branch]
            if b.low_exp < 0 or b.e > 1:
                raise SingularCenter("selected branch is singular at the base")
            self._branch_value = b.coefficient(0)
        sing = self.curve.singular_locations()
        path = _safe_stem(self.base, w, sing, 0.02 * max(1.0, abs(w)))
        return track_branch(self.curve, self._branch_value, path, singular=sing)

    # -- elements -----------------------------------------------------------

    def element_at(self, center, order: int) -> TruncSeries:
        """Taylor element of this function at `center` (exact when possible).

        Coefficients are exact Gaussian rationals whenever the function has
        rational Taylor data at a rational effective center; numeric
        otherwise.  Raises SingularCenter at poles and branch points.
        """
        eff = _add_shift(self.shift, center)
        if self.kind == "builtin":
            s = _builtin_series(self, eff, order)
        elif self.kind == "element":
            s = _element_series(self.series, eff, order)
        else:
            s = _algebroid_series(self, eff, order)
        return _recenter_tag(s, center, order)

    def to_json_dict(self) -> dict:
        out: dict = {"type": self.kind}
        if self.kind == "builtin":
            out["name"] = self.name
            if self.name == "rational":
                out["numer"] = self.numer.to_json_dict()
                out["denom"] = self.denom.to_json_dict()
        elif self.kind == "algebroid":
            out["curve"] = self.curve.to_json_dict()
            out["branch"] = self.branch
            out["base"] = [self.base.real, self.base.imag]
        else:
            out["series"] = self.series.to_json_dict()
        sh = _to_complex(self.shift)
        if sh != 0:
            out["shift"] = [sh.real, sh.imag]
        return out

    @staticmethod
    def from_json_dict(data: dict) -> "FunctionSpec":
        kind = data["type"]
        if kind == "builtin":
            name = data["name"]
            if name == "rational":
                spec = FunctionSpec.rational(MultiPoly.from_json_dict(data["numer"]),
                                             MultiPoly.from_json_dict(data["denom"]))
            else:
                spec = FunctionSpec.builtin(name)
        elif kind == "algebroid":
            curve = AlgebroidCurve.from_json_dict(data["curve"])
            base = complex(*data.get("base", [0, 0]))
            spec = FunctionSpec.algebroid(curve, int(data.get("branch", 0)), base)
        elif kind == "element":
            spec = FunctionSpec.element(TruncSeries.from_json_dict(data["series"]))
        else:
            raise ValueError(f"unknown function kind {kind!r}")
        if "shift" in data:
            spec = spec.translate(complex(*data["shift"]))
        return spec


def _horner(desc_coeffs: tuple, w: complex) -> complex:
    acc = 0j
    for c in desc_coeffs:
        acc = acc * w + c
    return acc


def taylor_of_builtin(f: FunctionSpec, center, order: int) -> TruncSeries:
    """Taylor element of a function spec at a center (spec operation name)."""
    return f.element_at(center, order)


# -- shift bookkeeping --------------------------------------------------------

def _add_shift(a, b):
    ea, eb = _as_exactish(a), _as_exactish(b)
    if ea is not None and eb is not None:
        return ea + eb
    return _to_complex(a) + _to_complex(b)


def _as_exactish(v) -> ExactScalar | None:
    if isinstance(v, (int, Fraction, ExactScalar)):
        return ExactScalar.coerce(v)
    return _as_exact(v)


def _to_complex(v) -> complex:
    if isinstance(v, ExactScalar):
        return complex(v)
    if isinstance(v, (int, Fraction)):
        return complex(float(v), 0.0)
    return complex(v)


def _fmt_shift(v) -> str:
    z = _to_complex(v)
    return f"{z.real:+g}{z.imag:+g}i" if z.imag else f"{z.real:+g}"


# -- element construction -------------------------------------------------------

def _factorial_series(order: int, pattern) -> list[Fraction]:
    """Coefficients pattern(k)/k! as exact fractions."""
    out = []
    fact = 1
    for k in range(order):
        if k:
            fact *= k
        out.append(Fraction(pattern(k), fact))
    return out


def _exact_exp(order: int) -> TruncSeries:
    return TruncSeries(ExactScalar(0), [ExactScalar(c) for c in
                                        _factorial_series(order, lambda k: 1)],
                       exact=True)


def _exact_sin(order: int) -> TruncSeries:
    def pat(k):
        if k % 2 == 0:
            return 0
        return 1 if (k // 2) % 2 == 0 else -1
    return TruncSeries(ExactScalar(0), [ExactScalar(c) for c in
                                        _factorial_series(order, pat)], exact=True)


def _exact_cos(order: int) -> TruncSeries:
    def pat(k):
        if k % 2 == 1:
            return 0
        return 1 if (k // 2) % 2 == 0 else -1
    return TruncSeries(ExactScalar(0), [ExactScalar(c) for c in
                                        _factorial_series(order, pat)], exact=True)


def _numeric_cycle_series(center: complex, order: int, cycle) -> TruncSeries:
    coeffs = []
    fact = 1.0
    for k in range(order):
        if k:
            fact *= k
        coeffs.append(cycle[k % 4](center) / fact)
    return TruncSeries(center, coeffs, exact=False)


def _builtin_series(spec: FunctionSpec, eff, order: int) -> TruncSeries:
    name = spec.name
    eff_exact = _as_exactish(eff)
    exact_zero = eff_exact is not None and eff_exact.is_zero()
    c = _to_complex(eff)
    if name == "exp":
        if exact_zero:
            return _exact_exp(order)
        ew = cmath.exp(c)
        return TruncSeries(c, [ew * x for x in
                               _inverse_factorials(order)], exact=False)
    if name == "sin":
        if exact_zero:
            return _exact_sin(order)
        return _numeric_cycle_series(c, order,
                                     [cmath.sin, cmath.cos,
                                      lambda w: -cmath.sin(w),
                                      lambda w: -cmath.cos(w)])
    if name == "cos":
        if exact_zero:
            return _exact_cos(order)
        return _numeric_cycle_series(c, order,
                                     [cmath.cos, lambda w: -cmath.sin(w),
                                      lambda w: -cmath.cos(w), cmath.sin])
    if name == "tan":
        if exact_zero:
            # one extra guard term keeps the quotient order at `order`
            return (_exact_sin(order + 1) / _exact_cos(order + 1)).truncate(order)
        if abs(cmath.cos(c)) < 1e-9:
            raise SingularCenter(f"tan has a pole at {c}")
        s = _numeric_cycle_series(c, order + 1,
                                  [cmath.sin, cmath.cos,
                                   lambda w: -cmath.sin(w),
                                   lambda w: -cmath.cos(w)])
        co = _numeric_cycle_series(c, order + 1,
                                   [cmath.cos, lambda w: -cmath.sin(w),
                                    lambda w: -cmath.cos(w), cmath.sin])
        return (s / co).truncate(order)
    # rational P/Q
    var = _rational_var(spec.numer, spec.denom)
    if eff_exact is not None:
        p_sh = spec.numer.shift_var(var, eff_exact)
        q_sh = spec.denom.shift_var(var, eff_exact)
        q0 = q_sh.coefficient_wrt(var, 0)
        if q0.is_zero():
            raise SingularCenter(f"denominator vanishes at {eff_exact}")
        ps = _poly_to_series(p_sh, var, eff_exact, order, exact=True)
        qs = _poly_to_series(q_sh, var, eff_exact, order, exact=True)
        return (ps / qs).truncate(order)
    qv = spec.denom.eval({var: c})
    scale = max(abs(complex(x)) for x in spec.denom.terms.values())
    if abs(qv) < 1e-12 * max(scale, 1.0):
        raise SingularCenter(f"denominator vanishes at {c}")
    pa = _taylor_shift_list(spec.numer, var, c, order)
    qa = _taylor_shift_list(spec.denom, var, c, order)
    ps = TruncSeries(c, pa, exact=False)
    qs = TruncSeries(c, qa, exact=False)
    return (ps / qs).truncate(order)


def _inverse_factorials(order: int) -> list[float]:
    out, fact = [], 1.0
    for k in range(order):
        if k:
            fact *= k
        out.append(1.0 / fact)
    return out


def _poly_to_series(p: MultiPoly, var: str, center, order: int,
                    exact: bool) -> TruncSeries:
    cs = p.univariate_coeffs(var) if not p.is_zero() else [ExactScalar.zero()]
    cs = cs[:order] + [ExactScalar.zero()] * max(0, order - len(cs))
    if exact:
        return TruncSeries(ExactScalar.coerce(center) if not
                           isinstance(center, ExactScalar) else center,
                           cs, exact=True)
    return TruncSeries(complex(center), [complex(c) for c in cs], exact=False)


def _taylor_shift_list(p: MultiPoly, var: str, c: complex, order: int) -> list[complex]:
    import numpy as np
    arr = np.array([complex(x) for x in p.univariate_coeffs(var)], dtype=complex) \
        if not p.is_zero() else np.zeros(1, dtype=complex)
    n = len(arr)
    out = arr.copy()
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] += c * out[j + 1]
    full = list(out) + [0j] * max(0, order - n)
    return full[:order]


def _rational_var(numer: MultiPoly, denom: MultiPoly) -> str:
    for p in (numer, denom):
        for v in p.vars:
            if p.degree(v) > 0:
                return v
    return numer.vars[0] if numer.vars else "u"


def _element_series(series: TruncSeries, eff, order: int) -> TruncSeries:
    c = _to_complex(eff)
    same_exact = series.exact and isinstance(eff, ExactScalar) and \
        ExactScalar.coerce(series.center) == eff
    if same_exact or abs(c - complex(series.center)) == 0.0:
        return series.truncate(order)
    from .series import rearrange_at
    target = eff if isinstance(eff, ExactScalar) else c
    return rearrange_at(series, target).truncate(order)


def _algebroid_series(spec: FunctionSpec, eff, order: int) -> TruncSeries:
    curve = spec.curve
    base_branches = puiseux_expand(curve, spec.base, 6)
    if not (0 <= spec.branch < len(base_branches)):
        raise ValueError(f"branch index {spec.branch} out of range")
    sel = base_branches[spec.branch]
    if sel.low_exp < 0 or sel.e > 1:
        raise SingularCenter("selected branch is singular at its base point")
    c = _to_complex(eff)
    if abs(c - complex(spec.base)) == 0.0:
        z_at = sel.coefficient(0)
    else:
        sing = curve.singular_locations()
        path = _safe_stem(complex(spec.base), c, sing, 0.02 * max(1.0, abs(c)))
        z_at = track_branch(curve, sel.coefficient(0), path, singular=sing)
    # exact element when the center and branch value have rational data
    eff_exact = _as_exactish(eff)
    if eff_exact is not None:
        zre, zim = rationalize(z_at.real), rationalize(z_at.imag)
        if zre is not None and zim is not None:
            try:
                return exact_branch_element(curve, eff_exact,
                                            ExactScalar(zre, zim), order)
            except SingularCenter:
                pass
    branches = puiseux_expand(curve, c, order)
    best = min(branches, key=lambda b: abs(b.coefficient(0) - z_at)
               if (b.low_exp >= 0) else math.inf)
    if best.low_exp < 0 or best.e > 1 or \
            abs(best.coefficient(0) - z_at) > 1e-6 * max(1.0, abs(z_at)):
        raise SingularCenter(f"branch is not holomorphic at {c}")
    coeffs = [best.coefficient(k) for k in range(order)]
    return TruncSeries(c, coeffs, exact=False)


def _recenter_tag(s: TruncSeries, center, order: int) -> TruncSeries:
    """Relabel the element with the caller's center (shift bookkeeping)."""
    s = s.truncate(order)
    if s.low > 0:
        pad = [ExactScalar.zero() if s.exact else 0j] * s.low
        s = TruncSeries(s.center, pad + list(s.coeffs), low=0, order=s.order,
                        exact=s.exact)
    if s.exact and isinstance(center, (int, Fraction, ExactScalar)):
        return TruncSeries(ExactScalar.coerce(center), s.coeffs, low=s.low,
                           order=s.order, exact=True)
    if s.exact:
        ce = _as_exact(center)
        if ce is not None:
            return TruncSeries(ce, s.coeffs, low=s.low, order=s.order, exact=True)
        sn = s.to_numeric()
        return TruncSeries(complex(center), sn.coeffs, low=sn.low,
                           order=sn.order, exact=False)
    return TruncSeries(complex(center), s.coeffs, low=s.low, order=s.order,
                       exact=False)
