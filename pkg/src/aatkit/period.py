"""Period detection from an addition theorem, and lattice fitting of roots.

weierstrass_period turns the classical periodicity argument into an
algorithm: draw a target value C2 whose preimage has at least m+1 points
(m = W-degree of the addition polynomial), shift by a random regular point,
find two equal values among the shifted images, and emit the difference of
the two preimages as a period candidate.  Pointwise equality is upgraded to
an identity by verification at 100 random points; verified candidates are
reduced pairwise (nearest-integer complex quotients) and the smallest
survivor is reported as the fundamental period.

find_roots supplies the preimages by grid seeding plus Newton polishing,
doubling the search region (up to 6 times) when too few roots appear;
forsyth_fit covers a root set by arithmetic progressions with one common
difference, flagging data that refuses the lattice model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AllPointsSingular,
    DerivativeVanishes,
    InsufficientRoots,
    NoEqualPair,
    PreconditionFailed,
)
from .functions import FunctionSpec
from .poly import MultiPoly

_ROOT_RESIDUAL = 1e-10
_ROOT_SEPARATION = 1e-6
_PAIR_TOL = 1e-8
_VERIFY_TOL = 1e-9


@dataclass
class Region:
    """Axis-aligned rectangle in the complex plane."""

    x0: float
    x1: float
    y0: float
    y1: float

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (self.x0 - pad <= z.real <= self.x1 + pad and
                self.y0 - pad <= z.imag <= self.y1 + pad)

    def doubled(self) -> "Region":
        cx, cy = (self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2
        hx, hy = (self.x1 - self.x0), (self.y1 - self.y0)
        return Region(cx - hx, cx + hx, cy - hy, cy + hy)

    def to_json(self) -> list[float]:
        return [self.x0, self.x1, self.y0, self.y1]


@dataclass
class RootSet:
    target: complex
    region: Region
    roots: list[complex]
    residual_max: float

    def to_json_dict(self) -> dict:
        return {"target": [self.target.real, self.target.imag],
                "region": self.region.to_json(),
                "roots": [[r.real, r.imag] for r in self.roots],
                "residual_max": self.residual_max}


@dataclass
class PeriodReport:
    candidates: list[complex]
    fundamental: complex | None
    verification_residual: float | None
    classification: str  # periodic | rational | inconclusive
    seed: int = 0

    def to_json_dict(self) -> dict:
        return {
            "classification": self.classification,
            "fundamental": None if self.fundamental is None else
                           [self.fundamental.real, self.fundamental.imag],
            "candidates": [[c.real, c.imag] for c in self.candidates],
            "residual": self.verification_residual,
            "seed": self.seed,
        }


@dataclass
class ForsythFit:
    progressions: list[tuple[complex, complex]]  # (offset, common difference)
    omega: complex | None
    lambda_flag: bool

    def to_json_dict(self) -> dict:
        return {
            "progressions": [[[o.real, o.imag], [d.real, d.imag]]
                             for o, d in self.progressions],
            "omega": None if self.omega is None else
                     [self.omega.real, self.omega.imag],
            "lambda_flag": self.lambda_flag,
        }


# ---------------------------------------------------------------------------
# root finding

def find_roots(f: FunctionSpec, C: complex, region: Region,
               want: int, max_doublings: int = 6) -> RootSet:
    """Roots of phi(v) = C in a rectangle, grown until `want` are found.

    Grid seeds polished by Newton; results are deduplicated and must meet
    the residual bound.  Raises InsufficientRoots after the region has
    doubled `max_doublings` times without reaching `want` roots.
    """
    C = complex(C)
    reg = region
    for _ in range(max_doublings + 1):
        roots = _roots_in_region(f, C, reg)
        if len(roots) >= want:
            res = max((abs(f.eval(r) - C) for r in roots), default=0.0)
            return RootSet(C, reg, roots, res)
        reg = reg.doubled()
    raise InsufficientRoots(
        f"found {len(roots)} roots of phi = {C} after {max_doublings} "
        f"doublings; wanted {want}")


def _roots_in_region(f: FunctionSpec, C: complex, reg: Region) -> list[complex]:
    nx = max(18, min(42, int(1.2 * (reg.x1 - reg.x0))))
    ny = max(7, min(26, int(1.2 * (reg.y1 - reg.y0))))
    xs = np.linspace(reg.x0, reg.x1, nx)
    ys = np.linspace(reg.y0, reg.y1, ny)
    scale = max(1.0, abs(C))
    found: list[complex] = []
    live_seeds = 0
    for x in xs:
        for y in ys:
            z = complex(x, y)
            if not f.is_regular(z):
                continue
            live_seeds += 1
            r = _newton_root(f, C, z)
            if r is None:
                continue
            if not reg.contains(r, pad=1e-9):
                continue
            if abs(f.eval(r) - C) > _ROOT_RESIDUAL * scale:
                continue
            if all(abs(r - s) > _ROOT_SEPARATION for s in found):
                found.append(r)
    if live_seeds == 0:
        raise DerivativeVanishes("no usable Newton seeds in the region")
    found.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return found


def _newton_root(f: FunctionSpec, C: complex, z: complex,
                 iters: int = 40) -> complex | None:
    for _ in range(iters):
        if not f.is_regular(z):
            return None
        g = f.eval(z) - C
        if abs(g) < 1e-13 * max(1.0, abs(C)):
            return z
        d = f.eval_deriv(z)
        if d == 0 or not np.isfinite(abs(d)):
            return None
        step = g / d
        if abs(step) > 10.0:
            step = step / abs(step) * 10.0
        z = z - step
        if not np.isfinite(abs(z)):
            return None
    g = f.eval(z) - C
    return z if abs(g) < 1e-11 * max(1.0, abs(C)) else None


# ---------------------------------------------------------------------------
# period verification

def verify_period(f: FunctionSpec, omega: complex, samples: int = 100,
                  seed: int = 0, box: float = 2.0) -> float:
    """max |phi(u + omega) - phi(u)| over seeded random regular points."""
    omega = complex(omega)
    if omega == 0 or not np.isfinite(abs(omega)):
        raise ValueError("omega must be finite and nonzero")
    rng = np.random.default_rng(seed ^ 0x5EED)
    worst = 0.0
    got = 0
    for _ in range(samples * 20):
        if got >= samples:
            break
        u = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        if not (f.is_regular(u) and f.is_regular(u + omega)):
            continue
        a, b = f.eval(u), f.eval(u + omega)
        if max(abs(a), abs(b)) > 1e8:
            continue
        worst = max(worst, abs(b - a))
        got += 1
    if got == 0:
        raise AllPointsSingular("no regular sample points for verification")
    return worst


# ---------------------------------------------------------------------------
# the periodicity algorithm

DEFAULT_REGION = Region(-20.0, 20.0, -20.0, 20.0)


def weierstrass_period(f: FunctionSpec, G: MultiPoly, seed: int = 0,
                       region: Region = DEFAULT_REGION,
                       retries: int = 8) -> PeriodReport:
    """Detect a period of phi from its addition polynomial.

    Draws C2 with at least m+1 preimages (m = deg_W G), shifts by a random
    regular point, clusters equal values among the shifted images, verifies
    each emitted difference as an identity at 100 random points, and
    reduces the verified candidates to the smallest one.  InsufficientRoots
    classifies the function as `rational`; exhausted retries give
    `inconclusive`.  Deterministic for a fixed seed.
    """
    from .aat import verify_aat
    cert = verify_aat(G, f, order=12, seed=seed)
    if not cert.verified:
        raise PreconditionFailed("G is not a verified addition theorem for f")
    m = G.degree("W")
    rng = np.random.default_rng(seed)
    all_candidates: list[complex] = []
    for _attempt in range(retries):
        C2 = complex(rng.uniform(0.3, 1.7), rng.uniform(0.3, 1.7))
        try:
            rootset = find_roots(f, C2, region, m + 1)
        except InsufficientRoots:
            return PeriodReport([], None, None, "rational", seed)
        upsilon = _draw_regular_shift(f, rootset.roots, rng)
        if upsilon is None:
            continue
        values = [f.eval(upsilon + a) for a in rootset.roots]
        scale = max(1.0, max(abs(v) for v in values))
        candidates = []
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                if abs(values[i] - values[j]) < _PAIR_TOL * scale:
                    c = rootset.roots[i] - rootset.roots[j]
                    if abs(c) > _ROOT_SEPARATION and \
                            all(abs(c - d) > _PAIR_TOL for d in candidates):
                        candidates.append(c)
        all_candidates.extend(candidates)
        verified = []
        for c in candidates:
            try:
                res = verify_period(f, c, seed=seed)
            except AllPointsSingular:
                continue
            if res < _VERIFY_TOL:
                verified.append(c)
        if not verified:
            continue
        fundamental = _normalize_sign(_reduce_candidates(verified))
        res = verify_period(f, fundamental, seed=seed)
        if res < _VERIFY_TOL:
            return PeriodReport(all_candidates, fundamental, res,
                                "periodic", seed)
    if not all_candidates:
        raise NoEqualPair(f"no equal pair found in {retries} attempts")
    return PeriodReport(all_candidates, None, None, "inconclusive", seed)


def _draw_regular_shift(f: FunctionSpec, roots: list[complex], rng,
                        tries: int = 60) -> complex | None:
    for _ in range(tries):
        u = complex(rng.uniform(0.3, 1.7), rng.uniform(0.3, 1.7))
        pts = [u] + [u + a for a in roots]
        if all(f.is_regular(p) for p in pts):
            vals = [f.eval(p) for p in pts]
            if all(abs(v) < 1e8 for v in vals):
                return u
    return None


def _normalize_sign(c: complex) -> complex:
    """Canonical representative of {c, -c}: positive real part, or positive
    imaginary part on the imaginary axis."""
    if c.real < -1e-12 or (abs(c.real) <= 1e-12 and c.imag < 0):
        return -c
    return c


def _reduce_candidates(cands: list[complex], tol: float = 1e-9) -> complex:
    """Pairwise nearest-integer reduction to the smallest nonzero period."""
    vals = sorted(set(cands), key=abs)
    changed = True
    while changed:
        changed = False
        vals = sorted((v for v in vals if abs(v) > tol), key=abs)
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                q = vals[j] / vals[i]
                n = complex(round(q.real), round(q.imag))
                r = vals[j] - n * vals[i]
                if abs(r) < abs(vals[j]) - tol:
                    vals[j] = r
                    changed = True
        vals = sorted((v for v in vals if abs(v) > tol), key=abs)
    return vals[0]


# ---------------------------------------------------------------------------
# Forsyth lattice fit

def forsyth_fit(roots, tol: float = 1e-8) -> ForsythFit:
    """Cover a root set by arithmetic progressions with one common difference.

    Every root must land in a progression of length >= 2 under the
    candidate difference; candidates are pairwise root differences tried in
    increasing modulus.  When no candidate works the data refuses the
    lattice model and lambda_flag is set.
    """
    if isinstance(roots, RootSet):
        roots = roots.roots
    pts = sorted((complex(r) for r in roots),
                 key=lambda z: (z.real, z.imag))
    if len(pts) < 4:
        raise InsufficientRoots("lattice fit needs at least 4 roots")
    lo_re = min(p.real for p in pts)
    hi_re = max(p.real for p in pts)
    lo_im = min(p.imag for p in pts)
    hi_im = max(p.imag for p in pts)
    hull = Region(lo_re, hi_re, lo_im, hi_im)
    cands: list[complex] = []
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i == j:
                continue
            d = pts[j] - pts[i]
            if d.real < -tol or (abs(d.real) <= tol and d.imag <= 0):
                continue
            if abs(d) < 10 * tol:
                continue
            if all(abs(d - c) > tol for c in cands):
                cands.append(d)
    cands.sort(key=abs)
    for omega in cands:
        classes = _progressions(pts, omega, hull, tol)
        if classes is not None:
            return ForsythFit([(off, omega) for off in classes], omega, False)
    return ForsythFit([], None, True)


def _progressions(pts: list[complex], omega: complex, hull: Region,
                  tol: float) -> list[complex] | None:
    def member(z: complex) -> bool:
        return any(abs(z - p) < tol for p in pts)

    for p in pts:
        fwd = member(p + omega)
        back = member(p - omega)
        if not (fwd or back):
            return None  # isolated under omega: no progression of length 2
        if not fwd and hull.contains(p + omega, pad=tol):
            return None  # a hole inside the observed window
        if not back and hull.contains(p - omega, pad=tol):
            return None
    offsets: list[complex] = []
    for p in pts:
        q = p
        while member(q - omega):
            q = q - omega
            if abs(q) > 1e9:
                return None
        if all(abs(q - o) > tol for o in offsets):
            offsets.append(q)
    offsets.sort(key=lambda z: (z.real, z.imag))
    return offsets
