from fractions import Fraction

import pytest

from bigiso.calculus import (
    BigSection,
    Chart,
    PolyBivector,
    PolyOneForm,
    PolyTwoForm,
    PolyVectorField,
    courant_bracket,
    lift_section,
)
from bigiso.linalg import Subspace
from bigiso.pointwise import orthogonal_g
from bigiso.reduction import (
    FoliationData,
    ReductionError,
    RestrictedData,
    SubmanifoldData,
    bivector_is_projectable,
    check_projectable,
    check_reducibility,
    dirac_along_foliation_P,
    dirac_along_foliation_omega,
    reduce_structure,
    restrict,
    twoform_is_foliated,
    verify_restricted_frame,
)
from bigiso.scalars import Polynomial
from bigiso.structures import (
    check_integrability,
    foliation_pair,
    graph_P,
    structure_from_components,
)
from bigiso.transport import pullback_subspace, pushforward_subspace


@pytest.fixture(scope="module")
def poisson_4d():
    chart = Chart(("x1", "x2", "x3", "x4"))
    P = PolyBivector(chart, {(0, 1): chart.one(), (2, 3): chart.one()})
    sstar = [PolyOneForm.coordinate(chart, i) for i in range(4)]
    return graph_P(sstar, P)


@pytest.fixture(scope="module")
def hyperplane(poisson_4d):
    chart = poisson_4d.chart
    return SubmanifoldData.from_equations(chart, [chart.coordinate("x4")])


class TestSubmanifold:
    def test_coordinate_aligned_names(self, hyperplane):
        assert hyperplane.sub.names == ("x1", "x2", "x3")
        assert hyperplane.embed_point((1, 2, 3)) == (1, 2, 3, 0)

    def test_general_affine(self):
        chart = Chart(("x", "y"))
        N = SubmanifoldData.from_equations(chart, [chart.coordinate("x") + chart.coordinate("y") - 1])
        assert N.sub.dim == 1
        pt = N.embed_point((2,))
        assert pt[0] + pt[1] == 1

    def test_inconsistent_rejected(self):
        chart = Chart(("x",))
        with pytest.raises(ReductionError):
            SubmanifoldData.from_equations(chart, [chart.one()])

    def test_nonaffine_rejected(self):
        chart = Chart(("x", "y"))
        with pytest.raises(ReductionError):
            SubmanifoldData.from_equations(chart, [chart.coordinate("x") ** 2])


class TestRestrict:
    def test_poisson_example_rank(self, poisson_4d, hyperplane):
        restricted = restrict(poisson_4d, hyperplane)
        assert restricted.rank == 3
        for u, pulled in zip(restricted.points, restricted.pulled_E):
            assert pulled == Subspace(
                6,
                [
                    (0, 1, 0, 1, 0, 0),
                    (-1, 0, 0, 0, 1, 0),
                    (0, 0, 1, 0, 0, 0),
                ],
            ) or pulled.dim == 3

    def test_identity_restriction(self, poisson_4d):
        N = SubmanifoldData.identity(poisson_4d.chart)
        restricted = restrict(poisson_4d, N)
        for u, pulled in zip(restricted.points, restricted.pulled_E):
            assert pulled == poisson_4d.evaluate_at(u).E

    def test_frame_verification(self, poisson_4d, hyperplane):
        restricted = restrict(poisson_4d, hyperplane)
        sub = hyperplane.sub
        frame = [
            BigSection(PolyVectorField.coordinate(sub, 1), PolyOneForm.coordinate(sub, 0)),
            BigSection(-PolyVectorField.coordinate(sub, 0), PolyOneForm.coordinate(sub, 1)),
            BigSection(-PolyVectorField.coordinate(sub, 2), PolyOneForm.zero(sub)),
        ]
        assert verify_restricted_frame(restricted, frame).ok
        bad = frame[:2] + [BigSection(PolyVectorField.coordinate(sub, 2), PolyOneForm.zero(sub))]
        # the sign flip on the last section does not change the span
        assert verify_restricted_frame(restricted, bad).ok


class TestReducibility:
    def test_poisson_example_true(self, poisson_4d, hyperplane):
        F = FoliationData(hyperplane.sub, fibre=(2,))
        assert check_reducibility(poisson_4d, hyperplane, F).ok

    def test_wrong_fibre_false(self, poisson_4d, hyperplane):
        F = FoliationData(hyperplane.sub, fibre=(0,))
        assert not check_reducibility(poisson_4d, hyperplane, F).ok

    def test_trivial_foliation(self, poisson_4d, hyperplane):
        F = FoliationData(hyperplane.sub, fibre=())
        assert check_reducibility(poisson_4d, hyperplane, F).ok


class TestProjectable:
    def test_projectable_example(self):
        chart = Chart(("x1", "x2", "x3"))
        s = structure_from_components(
            chart,
            [(0, 0, 1, 0, 0, 0), (1, 0, 0, 0, 1, 0)],
            [
                (0, 0, 1, 0, 0, 0),
                (1, 0, 0, 0, 1, 0),
                (0, -1, 0, 1, 0, 0),
                (0, 0, 0, 0, 1, 0),
            ],
        )
        F = FoliationData(chart, fibre=(2,))
        assert check_projectable(s, F).ok

    def test_fibre_dependent_not_projectable(self):
        chart = Chart(("x1", "x2", "x3"))
        x3 = chart.coordinate("x3")
        s = structure_from_components(
            chart,
            [(0, 0, 1, 0, 0, 0), (1, 0, 0, 0, x3, 0)],
            [
                (0, 0, 1, 0, 0, 0),
                (1, 0, 0, 0, x3, 0),
                (0, -1, 0, x3, 0, 0),
                (0, 0, 0, 0, 1, 0),
            ],
        )
        F = FoliationData(chart, fibre=(2,))
        verdict = check_projectable(s, F)
        assert not verdict.ok
        assert any("b'" in msg for msg, _ in verdict.failures)

    def test_missing_fibre_tangent(self):
        chart = Chart(("x1", "x2"))
        s = structure_from_components(
            chart,
            [(1, 0, 0, 0)],
            [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1)],
        )
        F = FoliationData(chart, fibre=(1,))
        verdict = check_projectable(s, F)
        assert not verdict.ok
        assert any("condition a" in msg for msg, _ in verdict.failures)

    def test_integrable_case_a_is_enough(self):
        # for integrable structures condition a alone decides projectability
        chart = Chart(("x1", "x2", "x3"))
        s = structure_from_components(
            chart,
            [(0, 0, 1, 0, 0, 0), (1, 0, 0, 0, 1, 0)],
            [
                (0, 0, 1, 0, 0, 0),
                (1, 0, 0, 0, 1, 0),
                (0, -1, 0, 1, 0, 0),
                (0, 0, 0, 0, 1, 0),
            ],
        )
        F = FoliationData(chart, fibre=(2,))
        assert check_integrability(s).ok
        zero_of = PolyOneForm.zero(chart)
        from bigiso.membership import in_span

        cond_a = all(
            in_span(s.frame_rows(), BigSection(Y, zero_of).as_poly_row())[0]
            for Y in F.fibre_fields()
        )
        assert cond_a == check_projectable(s, F).ok


class TestReduce:
    def test_poisson_pipeline(self, poisson_4d, hyperplane):
        F = FoliationData(hyperplane.sub, fibre=(2,))
        result = reduce_structure(poisson_4d, hyperplane, F)
        q = result.quotient
        assert q.chart.names == ("x1", "x2")
        assert q.k == 2
        # exactly the graph of the constant bivector d1^d2
        d = q.evaluate_at((0, 0))
        assert d.E == Subspace(4, [(0, 1, 1, 0), (-1, 0, 0, 1)])
        assert check_integrability(q).ok
        assert result.poisson_condition
        assert result.reducibility.ok and result.projectability.ok

    def test_trivial_reduction_returns_same(self, poisson_4d):
        N = SubmanifoldData.identity(poisson_4d.chart)
        F = FoliationData(poisson_4d.chart, fibre=())
        result = reduce_structure(poisson_4d, N, F)
        for pt in [(0, 0, 0, 0), (1, -1, 2, 0)]:
            assert result.quotient.evaluate_at(pt).E == poisson_4d.evaluate_at(pt).E

    def test_foliation_pair_reduction(self):
        chart = Chart(("x", "y", "z"))
        s = foliation_pair(
            [PolyVectorField.coordinate(chart, "x")],
            [PolyVectorField.coordinate(chart, "x"), PolyVectorField.coordinate(chart, "y")],
            chart,
        )
        N = SubmanifoldData.identity(chart)
        F = FoliationData(chart, fibre=(0,))
        result = reduce_structure(s, N, F)
        q = result.quotient
        assert q.chart.names == ("y", "z")
        # reduction of F (+) ann F' along F: only the conormal part survives
        d = q.evaluate_at((0, 0))
        assert d.E == Subspace(4, [(0, 0, 0, 1)])
        # pointwise pushforward oracle
        proj = F.projection()
        for pt in [(0, 0, 0), (1, 2, -1)]:
            assert pushforward_subspace(proj, s.evaluate_at(pt).E) == d.E

    def test_reducibility_failure_raises(self, poisson_4d, hyperplane):
        F = FoliationData(hyperplane.sub, fibre=(0,))
        with pytest.raises(ReductionError):
            reduce_structure(poisson_4d, hyperplane, F)

    def test_orthogonal_of_reduction_is_reduction_of_orthogonal(self, poisson_4d, hyperplane):
        F = FoliationData(hyperplane.sub, fibre=(2,))
        result = reduce_structure(poisson_4d, hyperplane, F)
        proj = F.projection()
        for u, pulled_prime in zip(result.restricted.points, result.restricted.pulled_E_prime):
            base_pt = tuple(u[i] for i in F.base)
            delta = result.quotient.evaluate_at(base_pt)
            assert pushforward_subspace(proj, pulled_prime) == delta.E_prime
            assert orthogonal_g(delta.E) == delta.E_prime


class TestBracketTransport:
    def test_pullback_sections_bracket(self):
        # brackets of lifted sections project onto the quotient bracket
        base = Chart(("v1", "v2"))
        total = Chart(("v1", "v2", "w"))
        F = FoliationData(total, fibre=(2,))

        def lift(sec: BigSection) -> BigSection:
            v = [None, None, total.zero()]
            w = [None, None, total.zero()]
            images = [Polynomial.variable(total.names, i) for i in range(2)]

            for i in range(2):
                v[i] = sec.vf.comps[i].substitute(images)
                w[i] = sec.of.comps[i].substitute(images)
            return BigSection(PolyVectorField(total, v), PolyOneForm(total, w))

        s1 = BigSection(
            PolyVectorField.coordinate(base, 0).scale(base.coordinate(1)),
            PolyOneForm.coordinate(base, 1),
        )
        s2 = BigSection(
            PolyVectorField.coordinate(base, 1),
            PolyOneForm.coordinate(base, 0).scale(base.coordinate(0)),
        )
        upstairs = courant_bracket(lift(s1), lift(s2))
        downstairs = lift(courant_bracket(s1, s2))
        assert (upstairs - downstairs).is_zero()


class TestFoliatedDirac:
    def test_projectable_bivector(self):
        chart = Chart(("y1", "y2", "z"))
        F = FoliationData(chart, fibre=(2,))
        P = PolyBivector(chart, {(0, 1): chart.one()})
        s = dirac_along_foliation_P(F, P)
        assert s.k == 3
        assert bivector_is_projectable(F, P)
        assert check_projectable(s, F).ok
        assert check_integrability(s).ok

    def test_fibre_dependent_bivector_not_projectable(self):
        chart = Chart(("y1", "y2", "z"))
        F = FoliationData(chart, fibre=(2,))
        P = PolyBivector(chart, {(0, 1): chart.coordinate("z")})
        s = dirac_along_foliation_P(F, P)
        assert not bivector_is_projectable(F, P)
        assert not check_projectable(s, F).ok

    def test_projectability_matches_bivector_property(self):
        chart = Chart(("y1", "y2", "z"))
        F = FoliationData(chart, fibre=(2,))
        for P in (
            PolyBivector(chart, {(0, 1): chart.one() + chart.coordinate("y1")}),
            PolyBivector(chart, {(0, 1): chart.coordinate("z") + chart.one()}),
            PolyBivector(chart, {(0, 1): chart.one(), (1, 2): chart.coordinate("y1")}),
        ):
            s = dirac_along_foliation_P(F, P)
            assert check_projectable(s, F).ok == bivector_is_projectable(F, P)

    def test_foliated_presymplectic(self):
        chart = Chart(("y1", "y2", "z"))
        F = FoliationData(chart, fibre=(2,))
        omega = PolyTwoForm(chart, {(0, 1): chart.one() + chart.coordinate("y1")})
        assert twoform_is_foliated(F, omega)
        s = dirac_along_foliation_omega(F, omega)
        assert s.k == 3
        assert check_projectable(s, F).ok
        # closed form: integrable
        assert check_integrability(s).ok

    def test_nonclosed_foliated_form(self):
        chart = Chart(("y1", "y2", "y3", "z"))
        F = FoliationData(chart, fibre=(3,))
        omega = PolyTwoForm(chart, {(0, 1): chart.coordinate("y3")})
        assert twoform_is_foliated(F, omega)
        s = dirac_along_foliation_omega(F, omega)
        assert not check_integrability(s).ok

    def test_normal_bundle_independence(self):
        chart = Chart(("y1", "y2", "z"))
        F = FoliationData(chart, fibre=(2,))
        omega = PolyTwoForm(chart, {(0, 1): chart.one() + chart.coordinate("y2")})
        s_plain = dirac_along_foliation_omega(F, omega)
        s_twist = dirac_along_foliation_omega(
            F, omega, normal_twist={(0, 2): chart.coordinate("y1"), (1, 2): chart.one()}
        )
        for pt in [(0, 0, 0), (1, -1, 2), (2, 1, -2)]:
            assert s_plain.evaluate_at(pt).E == s_twist.evaluate_at(pt).E

    def test_non_foliated_form_detected(self):
        chart = Chart(("y1", "y2", "z"))
        F = FoliationData(chart, fibre=(2,))
        omega = PolyTwoForm(chart, {(0, 2): chart.one()})
        assert not twoform_is_foliated(F, omega)
