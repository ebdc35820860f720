import pytest
from pydantic import ValidationError

from dqb_workbench.base import PreconditionError, ShapeError
from dqb_workbench.bosonization import (ProjectionData, bosonization_iso,
                                        bosonize, check_projection,
                                        check_splitting, omega_pulls_back,
                                        pi_is_algebra_map,
                                        projection_trimodule, split,
                                        split_tau, split_with_solver,
                                        unit_bialgebra)
from dqb_workbench.dqb import DQBMorphism, check_dqb
from dqb_workbench.exact import (columns_of, compose, identity,
                                 matrices_equal, zeros)
from dqb_workbench.hopfmod import check_trimodule, tau
from dqb_workbench.preantipode import solve_preantipode
from dqb_workbench.yd import check_braided_bialgebra


def test_bosonize_sweedler(fix3_bosonization, fix3):
    assert fix3.labels == ['1#1', '1#g', 'x#1', 'x#g']
    field = fix3.field
    g, x, xg = fix3.index('1#g'), fix3.index('x#1'), fix3.index('x#g')
    # (1#g)(x#1) = (g⊳x)#g
    assert fix3.mul_basis(g, x) == {xg: -field.one}
    assert fix3.mul_basis(x, g) == {xg: field.one}
    assert fix3_bosonization.B is fix3
    assert check_projection(fix3_bosonization.projection).passed


def test_bosonize_twisted(fix4_bosonization, fix4, klein):
    assert fix4.dim == 2 * klein.dim
    assert not fix4.has_trivial_omega
    assert omega_pulls_back(fix4_bosonization)
    assert pi_is_algebra_map(fix4_bosonization)
    assert check_projection(fix4_bosonization.projection).passed


def test_bosonize_unit(fix2):
    b = bosonize(fix2, unit_bialgebra(fix2))
    assert b.B.dim == fix2.dim
    assert b.B.labels == ['1#1', '1#g']
    assert check_dqb(b.B).passed
    assert matrices_equal(b.pi.matrix, identity(2, fix2.field))


def test_bosonize_rejects_other_base(fix2, r_sweedler):
    with pytest.raises((PreconditionError, ShapeError)):
        bosonize(fix2, r_sweedler)


def test_projection_validation(fix1, fix3_bosonization):
    p = fix3_bosonization.projection
    with pytest.raises(ValidationError):
        ProjectionData(A=p.A, H=fix1, sigma=p.pi, pi=p.sigma)

    trivial = ProjectionData.trivial(fix1)
    assert check_projection(trivial).passed

    broken = ProjectionData(
        A=p.A, H=fix1, sigma=p.sigma,
        pi=DQBMorphism(p.A, fix1, zeros(2, 4, fix1.field)))
    report = check_projection(broken)
    assert report['σ is a morphism'].status == 'pass'
    assert report['π∘σ = id'].status == 'fail'
    with pytest.raises(PreconditionError):
        split(broken, solve_preantipode(fix1).S)


@pytest.mark.parametrize('name', ['fix3_bosonization', 'fix4_bosonization'])
def test_split_tau(name, request):
    b = request.getfixturevalue(name)
    p = b.projection
    S = solve_preantipode(p.H).S
    t = split_tau(p, S)
    assert matrices_equal(compose(t, t), t)

    M = projection_trimodule(p)
    assert check_trimodule(M).passed
    assert matrices_equal(t, tau(M, S))


def test_split_tau_sweedler(fix3_bosonization, fix3):
    p = fix3_bosonization.projection
    t = columns_of(split_tau(p, solve_preantipode(p.H).S))
    one = fix3.field.one
    assert t[fix3.index('x#1')] == {fix3.index('x#1'): one}
    assert t[fix3.index('1#g')] == {fix3.index('1#1'): one}


def test_split_tau_invalid_preantipode(fix2):
    p = ProjectionData.trivial(fix2)
    with pytest.raises(PreconditionError):
        split_tau(p, identity(2, fix2.field))


def test_split_round_trip(fix1, r_sweedler, fix3_bosonization):
    p = fix3_bosonization.projection
    s = split(p, solve_preantipode(fix1).S)
    assert s.R.labels == ['1#1', 'x#1']
    assert check_braided_bialgebra(s.R).passed
    report = check_splitting(p, s)
    assert report.passed, report.failed

    # the recovered basis is identified with 1, x
    iso = bosonization_iso(fix1, r_sweedler, s.R, identity(2, fix1.field))
    assert iso.passed, iso.failed

    with pytest.raises(ShapeError):
        bosonization_iso(fix1, r_sweedler, s.R, identity(3, fix1.field))


def test_split_twisted(fix4_bosonization):
    s = split_with_solver(fix4_bosonization.projection)
    assert s.R.dim == 2
    assert check_braided_bialgebra(s.R).passed
    assert check_splitting(fix4_bosonization.projection, s).passed


def test_split_trivial(fix2):
    s = split_with_solver(ProjectionData.trivial(fix2))
    assert s.R.dim == 1
    assert check_splitting(ProjectionData.trivial(fix2), s).passed


def test_split_without_preantipode(fix5):
    with pytest.raises(PreconditionError):
        split_with_solver(ProjectionData.trivial(fix5))
