"""Branch expansion, singular classification, tracking, monodromy.

The reference curve is 8u z^3 + 3(1-u) z + (1-u).  Expected expansion
coefficients are generated by an exact recurrence oracle over Q(a) with
a^2 = -3/8 (the substitution residual is the ground truth; the recurrence
solves the residual equations coefficient by coefficient with Fractions).
"""

import cmath
import math
from fractions import Fraction

import pytest

from aatkit.algebroid import (
    AlgebroidCurve,
    branch_residual,
    compose_permutations,
    exact_branch_element,
    monodromy,
    puiseux_expand,
    puiseux_expand_at_infinity,
    singular_points,
    track_branch,
)
from aatkit.errors import (
    InvariantViolation,
    NearSingular,
    NotSquareFree,
    SingularCenter,
)
from aatkit.poly import MultiPoly


# -- exact oracle for the polar branches at u = 0 ----------------------------
# numbers r + s*a with a^2 = -3/8, represented as (r, s) Fraction pairs

A2 = Fraction(-3, 8)


def _qa_mul(x, y):
    return (x[0] * y[0] + x[1] * y[1] * A2, x[0] * y[1] + x[1] * y[0])


def _qa_add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def _qa_scale(x, c):
    return (x[0] * c, x[1] * c)


def polar_branch_oracle(n_coeffs: int):
    """Coefficients c_{-1}..c_{n-2} of the branch a/t + 1/6 + ... in Q(a).

    Solved from the residual of 8 t^2 phi^3 + 3(1 - t^2) phi + (1 - t^2):
    adding c t^m changes the residual at t^m by -6c, so c_m = R_m / 6.
    """
    zero, one = (Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))
    coeffs = [(Fraction(0), Fraction(1))]  # c_{-1} = a
    low = -1
    for m in range(0, n_coeffs - 1):
        coeffs.append(zero)
        hi = m + 1
        # phi, phi^2, phi^3 as Laurent lists starting at exponent `low`*k
        def mul_series(xs, xlow, ys, ylow):
            out_low = xlow + ylow
            out = [zero] * (hi - out_low + 1)
            for i, xv in enumerate(xs):
                for j, yv in enumerate(ys):
                    e = xlow + i + ylow + j
                    if e <= hi:
                        out[e - out_low] = _qa_add(out[e - out_low],
                                                   _qa_mul(xv, yv))
            return out, out_low
        phi = coeffs
        phi2, l2 = mul_series(phi, low, phi, low)
        phi3, l3 = mul_series(phi2, l2, phi, low)
        res = {}
        def add_at(e, v):
            if e <= hi:
                res[e] = _qa_add(res.get(e, zero), v)
        for i, v in enumerate(phi3):
            add_at(l3 + i + 2, _qa_scale(v, Fraction(8)))       # 8 t^2 phi^3
        for i, v in enumerate(phi):
            add_at(low + i, _qa_scale(v, Fraction(3)))          # 3 phi
            add_at(low + i + 2, _qa_scale(v, Fraction(-3)))     # -3 t^2 phi
        add_at(0, one)                                          # 1
        add_at(2, _qa_scale(one, Fraction(-1)))                 # -t^2
        r_m = res.get(m, zero)
        coeffs[-1] = _qa_scale(r_m, Fraction(1, 6))
    return coeffs  # entry k is c_{k-1} as (rational, coefficient of a)


SQ38 = math.sqrt(3.0 / 8.0)


class TestPuiseuxAtZero:
    def test_structure(self, golden_cubic):
        branches = puiseux_expand(golden_cubic, 0, 8)
        kinds = sorted((b.e, b.low_exp) for b in branches)
        assert kinds == [(1, 0), (2, -1), (2, -1)]

    def test_regular_branch_values(self, golden_cubic):
        b = [x for x in puiseux_expand(golden_cubic, 0, 8) if x.e == 1][0]
        expect = [Fraction(-1, 3), Fraction(8, 81), Fraction(8, 729)]
        for k, e in enumerate(expect):
            assert abs(b.coefficient(k) - float(e)) < 1e-12

    def test_polar_branches_match_exact_oracle(self, golden_cubic):
        oracle = polar_branch_oracle(8)
        a_val = complex(0, SQ38)
        branches = [b for b in puiseux_expand(golden_cubic, 0, 8) if b.e == 2]
        assert len(branches) == 2
        for sign, b in ((-1, branches[0]), (1, branches[1])):
            for k, (r, s) in enumerate(oracle):
                expect = complex(float(r), 0) + float(s) * (sign * a_val)
                assert abs(b.coefficient(k - 1) - expect) < 1e-10, (k, sign)

    def test_oracle_vs_printed_values(self):
        # the recurrence confirms 1/6, -4/81, 275/1944, -4/729 and
        # adjudicates the t^1 coefficient to (7/18) a, not (17/18) a
        oracle = polar_branch_oracle(7)
        assert oracle[0] == (0, 1)                       # a t^-1
        assert oracle[1] == (Fraction(1, 6), 0)
        assert oracle[2] == (0, Fraction(-7, 18))
        assert oracle[3] == (Fraction(-4, 81), 0)
        assert oracle[4] == (0, Fraction(-275, 1944))
        assert oracle[5] == (Fraction(-4, 729), 0)

    def test_substitution_residual_bound(self, golden_cubic):
        for b in puiseux_expand(golden_cubic, 0, 10):
            val, _rel = branch_residual(golden_cubic, b)
            bound = b.order - golden_cubic.F.degree("z") * abs(b.low_exp)
            assert val is None or val >= bound


class TestPuiseuxAtOne:
    def test_single_three_cycle(self, golden_cubic):
        branches = puiseux_expand(golden_cubic, 1, 6)
        assert all(b.e == 3 for b in branches)
        leads = sorted((b.coefficient(1) for b in branches),
                       key=cmath.phase)
        # leading term (1/2)(u-1)^(1/3): the conjugates are 0.5 * cube roots
        mags = [abs(l) for l in leads]
        assert all(abs(m - 0.5) < 1e-10 for m in mags)
        phases = sorted((cmath.phase(l) % (2 * math.pi)) for l in leads)
        expect = [0.0, 2 * math.pi / 3, 4 * math.pi / 3]
        assert all(abs(p - q) < 1e-9 for p, q in zip(phases, expect))

    def test_constant_terms_vanish(self, golden_cubic):
        for b in puiseux_expand(golden_cubic, 1, 6):
            assert abs(b.coefficient(0)) < 1e-12


class TestPuiseuxAtMinusOne:
    def test_fixed_branch(self, golden_cubic):
        branches = puiseux_expand(golden_cubic, -1, 6)
        regular = [b for b in branches if b.e == 1]
        assert len(regular) == 1
        b = regular[0]
        assert abs(b.coefficient(0) - 1.0) < 1e-12
        assert abs(b.coefficient(1) - 2.0 / 9.0) < 1e-12

    def test_two_cycle_pair(self, golden_cubic):
        branches = [b for b in puiseux_expand(golden_cubic, -1, 6) if b.e == 2]
        assert len(branches) == 2
        lead = 1.0 / (2.0 * math.sqrt(6.0))
        seen = sorted(b.coefficient(1).real for b in branches)
        assert abs(seen[0] + lead) < 1e-10
        assert abs(seen[1] - lead) < 1e-10
        for b in branches:
            assert abs(b.coefficient(0) + 0.5) < 1e-12


class TestSimpleCurves:
    def test_square_root_branches(self, sqrt_curve):
        branches = puiseux_expand(sqrt_curve, 0, 6)
        assert [b.e for b in branches] == [2, 2]
        vals = sorted(b.coefficient(1).real for b in branches)
        assert abs(vals[0] + 1) < 1e-12 and abs(vals[1] - 1) < 1e-12

    def test_square_root_infinity(self, sqrt_curve):
        branches = puiseux_expand_at_infinity(sqrt_curve, 6)
        assert sorted(b.e for b in branches) == [2, 2]
        assert all(b.low_exp < 0 for b in branches)

    def test_node_curve_regular(self):
        # z^2 - (1 - u^2): discriminant roots at u = +-1, node-free origin
        u, z = MultiPoly.variable("u"), MultiPoly.variable("z")
        curve = AlgebroidCurve(z * z - (1 - u * u))
        rep = singular_points(curve)
        finite = {round(p.location.real, 6): p for p in rep.points
                  if p.location is not None}
        assert set(finite) == {-1.0, 1.0}
        assert all(p.kind == "critical" and p.cycle_structure == [2]
                   for p in finite.values())
        branches = puiseux_expand(curve, 0, 6)
        assert all(b.e == 1 and b.low_exp >= 0 for b in branches)

    def test_constructor_rejects_zero_p0(self):
        z = MultiPoly.variable("z")
        u = MultiPoly.variable("u")
        with pytest.raises(InvariantViolation):
            AlgebroidCurve.from_p_list([MultiPoly.zero(("u",)),
                                        MultiPoly.constant(1, ("u",)), u])

    def test_constructor_rejects_repeated_factor(self):
        u, z = MultiPoly.variable("u"), MultiPoly.variable("z")
        with pytest.raises(NotSquareFree):
            AlgebroidCurve((z - u) ** 2)


class TestSingularReport:
    def test_reference_cubic_inventory(self, golden_cubic):
        rep = singular_points(golden_cubic)
        by_loc = {}
        inf = None
        for p in rep.points:
            if p.location is None:
                inf = p
            else:
                by_loc[round(p.location.real, 8)] = p
        assert set(by_loc) == {-1.0, 0.0, 1.0}
        assert by_loc[0.0].kind == "pole-and-branch"
        assert by_loc[0.0].cycle_structure == [2, 1]
        assert by_loc[0.0].source == "p0-zero"
        assert by_loc[1.0].kind == "critical"
        assert by_loc[1.0].cycle_structure == [3]
        assert by_loc[-1.0].kind == "critical"
        assert by_loc[-1.0].cycle_structure == [2, 1]
        assert inf is not None
        assert inf.cycle_structure == [1, 1, 1]

    def test_cycle_structure_sums_to_n(self, golden_cubic, sqrt_curve):
        for curve in (golden_cubic, sqrt_curve):
            for p in singular_points(curve).points:
                assert sum(p.cycle_structure) == curve.n

    def test_square_root_poles_at_infinity(self, sqrt_curve):
        rep = singular_points(sqrt_curve)
        inf = [p for p in rep.points if p.location is None][0]
        assert inf.kind == "pole-and-branch"
        assert inf.cycle_structure == [2]


class TestTracking:
    def test_square_root_monodromy_by_hand(self, sqrt_curve):
        circle = [cmath.exp(2j * math.pi * k / 64) for k in range(65)]
        z_end = track_branch(sqrt_curve, 1.0, circle)
        assert abs(z_end + 1.0) < 1e-8

    def test_track_then_reverse(self, golden_cubic):
        path = [3.0, 2.5 + 1.0j, 0.5 + 2.0j]
        start = complex(golden_cubic.roots_at(3.0)[0])
        fwd = track_branch(golden_cubic, start, path)
        back = track_branch(golden_cubic, fwd, path[::-1])
        assert abs(back - start) < 1e-8

    def test_segment_matches_newton_oracle(self, golden_cubic):
        # straight segment in a singularity-free region
        path = [3.0, 3.0 + 1.5j]
        start = complex(golden_cubic.roots_at(3.0)[1])
        got = track_branch(golden_cubic, start, path)
        roots = golden_cubic.roots_at(3.0 + 1.5j)
        best = min(roots, key=lambda r: abs(r - got))
        assert abs(got - best) < 1e-9

    def test_clearance_violation(self, golden_cubic):
        with pytest.raises(NearSingular):
            start = complex(golden_cubic.roots_at(3.0)[0])
            track_branch(golden_cubic, start, [3.0, 0.0])

    def test_isolated_branch_returns_to_itself(self, golden_cubic):
        # small loop around u = -1: the branch through z = 1 is fixed
        center = -1.0
        r = 0.25
        circle = [center + r * cmath.exp(2j * math.pi * k / 48)
                  for k in range(49)]
        roots = golden_cubic.roots_at(circle[0])
        fixed = min(roots, key=lambda z: abs(z - 1.1))  # near the z=1 branch
        out = track_branch(golden_cubic, complex(fixed), circle)
        assert abs(out - fixed) < 1e-8


class TestMonodromy:
    def test_reference_cycles(self, golden_cubic):
        assert monodromy(golden_cubic, 3.0, 1.0).cycle_type() == [3]
        assert monodromy(golden_cubic, 3.0, -1.0).cycle_type() == [2, 1]
        assert monodromy(golden_cubic, 3.0, 0.0).cycle_type() == [2, 1]

    def test_regular_loop_is_identity(self, golden_cubic):
        assert monodromy(golden_cubic, 3.0, 5.0).is_identity()

    def test_product_of_loops_matches_big_circle(self, golden_cubic):
        # loops sorted by argument from a common off-axis base compose to
        # the big-circle permutation = inverse of the loop at infinity
        base = 2.5j
        sing = golden_cubic.singular_locations()
        perms = [monodromy(golden_cubic, base, s).perm
                 for s in sorted(sing, key=lambda s: cmath.phase(s - base))]
        prod = perms[0]
        for q in perms[1:]:
            prod = compose_permutations(prod, q)
        big = _big_circle_perm(golden_cubic, base, 3.0)
        assert prod == big

    def test_product_invariant_square_root(self, sqrt_curve):
        base = 1.5j
        perms = [monodromy(sqrt_curve, base, s).perm
                 for s in sqrt_curve.singular_locations()]
        prod = perms[0]
        for q in perms[1:]:
            prod = compose_permutations(prod, q)
        big = _big_circle_perm(sqrt_curve, base, 2.0)
        assert prod == big
        assert prod == (1, 0)  # matches the 2-cycle at infinity, inverted


def _big_circle_perm(curve, base, radius):
    theta0 = cmath.phase(base)
    circle = [radius * cmath.exp(1j * (theta0 + 2 * math.pi * k / 96))
              for k in range(97)]
    path = [base] + circle + [base]
    starts = sorted((complex(r) for r in curve.roots_at(base)),
                    key=lambda w: (round(w.real, 10), round(w.imag, 10)))
    ends = [track_branch(curve, s, path) for s in starts]
    return tuple(next(i for i, s in enumerate(starts) if abs(e - s) < 1e-8)
                 for e in ends)


class TestExactElement:
    def test_coefficients(self, golden_cubic):
        el = exact_branch_element(golden_cubic, 0, Fraction(-1, 3), 6)
        assert [c.re for c in el.coeffs[:3]] == \
            [Fraction(-1, 3), Fraction(8, 81), Fraction(8, 729)]

    def test_rejects_non_root(self, golden_cubic):
        with pytest.raises(SingularCenter):
            exact_branch_element(golden_cubic, 0, Fraction(1, 2), 6)

    def test_rejects_ramified(self, golden_cubic):
        with pytest.raises(SingularCenter):
            exact_branch_element(golden_cubic, 1, 0, 6)
