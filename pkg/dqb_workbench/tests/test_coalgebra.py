import pytest

from dqb_workbench.base import PreconditionError, ShapeError
from dqb_workbench.coalgebra import (Coalgebra, Functional, certify_coradical,
                                     check_coalgebra, convolution_inverse,
                                     convolve, counit_power,
                                     find_basis_grouplikes, graded_coalgebra,
                                     is_subcoalgebra, verify_grouplike,
                                     wedge_filtration)


@pytest.fixture()
def divided_powers(Q):
    # Δc1 = c0⊗c1 + c1⊗c0
    return Coalgebra(Q, ['c0', 'c1'],
                     {(0, 0, 0): 1, (1, 0, 1): 1, (1, 1, 0): 1},
                     [1, 0])


def test_check_coalgebra(fix1, divided_powers):
    assert check_coalgebra(fix1).passed
    report = check_coalgebra(divided_powers, 'divided powers')
    assert report.passed
    assert report.subject == 'divided powers'
    assert report.names == ['coassociativity', 'left counit', 'right counit']


def test_check_coalgebra_failures(Q):
    bad = Coalgebra(Q, ['a', 'b'], {(0, 0, 0): 1, (1, 0, 1): 1}, [1, 1])
    report = check_coalgebra(bad)
    assert not report.passed
    assert report['left counit'].status == 'pass'
    assert report['right counit'].status == 'fail'
    assert report['right counit'].witness.at == ['b']

    skew = Coalgebra(Q, ['a', 'b'],
                     {(0, 0, 0): 1, (0, 0, 1): 1, (1, 1, 1): 1}, [1, 1])
    assert check_coalgebra(skew)['coassociativity'].status == 'fail'


def test_coalgebra_shapes(Q):
    with pytest.raises(ShapeError):
        Coalgebra(Q, ['a', 'a'], {}, [1, 1])
    with pytest.raises(ShapeError):
        Coalgebra(Q, ['a'], {(0, 0, 1): 1}, [1])


def test_delta_n(divided_powers, Q):
    terms = dict(divided_powers.delta_n(1, 3))
    assert terms == {(0, 0, 1): Q.one, (0, 1, 0): Q.one, (1, 0, 0): Q.one}


def test_convolution(fix2, Q):
    unit = counit_power(fix2, 3)
    assert convolve(fix2.omega, fix2.omega_inv) == unit
    assert convolve(fix2.omega_inv, fix2.omega) == unit
    # ω(g, g, g) = -1 is its own inverse
    g = fix2.index('g')
    assert fix2.w_inv(g, g, g) == -Q.one

    zero = Functional(fix2, {}, arity=1)
    assert convolution_inverse(zero) is None

    with pytest.raises(ShapeError):
        Functional(fix2, {})
    with pytest.raises(ShapeError):
        convolve(fix2.omega, counit_power(fix2, 2))


def test_convolution_inverse_not_grouplike(fix3, Q):
    f = Functional(fix3, {(i,): fix3.eps(i) for i in range(fix3.dim)},
                   arity=1)
    inverse = convolution_inverse(f)
    assert inverse == counit_power(fix3, 1)

    x = fix3.index('x#1')
    g = Functional(fix3, {(i,): fix3.eps(i) for i in range(fix3.dim)}
                   | {(x,): 2}, arity=1)
    g_inv = convolution_inverse(g)
    assert g_inv is not None
    assert convolve(g, g_inv) == counit_power(fix3, 1)


def test_grouplikes(fix3, Q):
    grouplikes = find_basis_grouplikes(fix3)
    assert [fix3.format(g) for g in grouplikes] == ['1#1', '1#g']
    assert not verify_grouplike(fix3, {fix3.index('x#1'): Q.one})
    assert is_subcoalgebra(fix3, grouplikes)
    assert not is_subcoalgebra(fix3, [{fix3.index('x#1'): Q.one}])


def test_wedge_filtration(fix3, divided_powers, Q):
    F = wedge_filtration(divided_powers, [{0: Q.one}])
    assert F.dims == (1, 2)
    assert F.check(divided_powers) is None

    F = wedge_filtration(fix3, find_basis_grouplikes(fix3))
    assert F.dims == (2, 4)
    assert F.exhausts

    with pytest.raises(PreconditionError):
        wedge_filtration(divided_powers, [{1: Q.one}])


def test_certify_coradical(fix3, Q):
    certificate = certify_coradical(fix3)
    assert certificate.certified
    assert certificate.dims == (2, 4)

    # one grouplike alone does not generate the wedge filtration
    partial = certify_coradical(fix3, [{fix3.index('1#1'): Q.one}])
    assert not partial.certified
    assert partial.filtration is None

    with pytest.raises(PreconditionError):
        certify_coradical(fix3, [{fix3.index('x#1'): Q.one}])


def test_graded_coalgebra(fix3):
    F = certify_coradical(fix3).filtration
    G = graded_coalgebra(fix3, F)
    assert G.degrees == [0, 0, 1, 1]
    assert G.homogeneous(1) == [2, 3]
    assert check_coalgebra(G).passed
    assert G.counit == {0: fix3.field.one, 1: fix3.field.one}
