import pytest
from pydantic import ValidationError

from dqb_workbench.base import FieldError, NotInvertible, PreconditionError
from dqb_workbench.dqb import (DQBMorphism, DualQuasiBialgebra,
                               GroupCocycleData, check_associative, check_dqb,
                               check_dqb_morphism, check_group_cocycle,
                               coboundary, from_group_cocycle,
                               grouplikes_form_group, is_cocommutative,
                               standard_cyclic, subbialgebra)
from dqb_workbench.exact import identity

GROUP_DELTA = {(0, 0, 0): 1, (1, 1, 1): 1}
Z2_MULT = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1}


def test_fixtures_pass(fix1, fix2, fix3, fix4, fix5, klein):
    for H in (fix1, fix2, fix3, fix4, fix5, klein):
        report = check_dqb(H)
        assert report.passed, report.failed
    assert check_dqb(fix2).names[-4:] == ['3-cocycle', 'reassociator unital',
                                          'quasi-associativity',
                                          'reassociator inverse']


def test_fixture_shapes(fix2, fix3, fix4):
    g = fix2.index('g')
    assert fix2.w(g, g, g) == -fix2.field.one
    assert not fix2.has_trivial_omega
    assert fix3.has_trivial_omega
    assert fix3.dim == 4
    assert fix4.dim == 8
    assert is_cocommutative(fix2)
    assert not is_cocommutative(fix3)


def test_sweedler_relations(fix3, Q):
    g, x = fix3.index('1#g'), fix3.index('x#1')
    gx = fix3.mul_basis(g, x)
    xg = fix3.mul_basis(x, g)
    assert gx == {k: -c for k, c in xg.items()}
    assert fix3.mul_basis(g, g) == fix3.one
    assert fix3.mul_basis(x, x) == {}


def test_noninvertible_omega(Q):
    omega = {(a, b, c): 1 for a in range(2) for b in range(2)
             for c in range(2)}
    omega[(1, 1, 1)] = 0
    with pytest.raises(NotInvertible):
        DualQuasiBialgebra(Q, ['1', 'g'], GROUP_DELTA, [1, 1], Z2_MULT,
                           {0: 1}, omega)


def test_broken_axioms(Q):
    omega = {(a, b, c): 1 for a in range(2) for b in range(2)
             for c in range(2)}
    omega[(1, 0, 1)] = 2
    H = DualQuasiBialgebra(Q, ['1', 'g'], GROUP_DELTA, [1, 1], Z2_MULT,
                           {0: 1}, omega)
    report = check_dqb(H)
    assert not report.passed
    assert report['reassociator unital'].status == 'fail'
    assert report['reassociator unital'].witness.at == ['g', '1', 'g']

    non_unital = DualQuasiBialgebra(Q, ['1', 'g'], GROUP_DELTA, [1, 1],
                                    Z2_MULT, {1: 1})
    report = check_dqb(non_unital)
    assert report['left unit'].status == 'fail'


def test_group_cocycles(Q, F5, F7):
    with pytest.raises(FieldError):
        standard_cyclic(3, Q)

    z3 = standard_cyclic(3, F7)
    assert check_group_cocycle(z3).passed
    assert check_dqb(from_group_cocycle(z3)).passed

    for field, zeta in ((Q, -1), (F5, 2)):
        z4 = standard_cyclic(4, field, zeta)
        assert z4.labels == ['1', 'a', 'a^2', 'a^3']
        assert check_dqb(from_group_cocycle(z4)).passed

    with pytest.raises(FieldError):
        standard_cyclic(4, Q, 2)


def test_cocycle_rejected(Q):
    bad = GroupCocycleData.cyclic(2, lambda a, b, c: 2 if a == b == c == 1
                                  else 1, Q)
    assert check_group_cocycle(bad).passed is False
    with pytest.raises(PreconditionError):
        from_group_cocycle(bad)


def test_coboundary(Q):
    z2 = GroupCocycleData.cyclic(2, lambda a, b, c: -1 if a == b == c == 1
                                 else 1, Q)
    twisted = coboundary(z2, {(1, 1): 3})
    assert check_group_cocycle(twisted).passed
    assert twisted.theta_of(1, 1, 1) == -Q.one

    with pytest.raises(PreconditionError):
        coboundary(z2, {(0, 1): 2})


def test_group_data_validation(Q):
    with pytest.raises(ValidationError):
        GroupCocycleData(labels=['1', 'g'], mul_table=[[0, 0], [0, 0]],
                         field=Q)
    with pytest.raises(ValidationError):
        GroupCocycleData(labels=['1'], mul_table=[[0, 1], [1, 0]])
    with pytest.raises(ValidationError):
        GroupCocycleData(labels=['1', 'g'], mul_table=[[0, 1], [1, 0]],
                         theta={(1, 1, 1): 0})

    klein = GroupCocycleData.product([2, 2])
    assert klein.labels == ['1', 'a', 'b', 'ab']
    assert klein.is_group
    assert klein.inv_table == [0, 1, 2, 3]


def test_grouplikes_form_group(fix1, fix5):
    units = [{i: fix1.field.one} for i in range(2)]
    assert grouplikes_form_group(fix1, units)
    assert not grouplikes_form_group(fix5, units)
    assert not grouplikes_form_group(fix1, units[1:])


def test_associativity(fix2, fix3):
    # the reassociator of k^θZ2 is central, products stay associative
    assert check_associative(fix2).passed
    assert check_associative(fix3).passed


def test_morphisms(fix1, fix2, fix3_bosonization):
    assert check_dqb_morphism(DQBMorphism.identity(fix2)).passed
    assert check_dqb_morphism(fix3_bosonization.pi).passed
    assert check_dqb_morphism(fix3_bosonization.sigma).passed

    report = check_dqb_morphism(DQBMorphism(fix1, fix2,
                                            identity(2, fix1.field)))
    assert report['multiplicative'].status == 'pass'
    assert report['reassociator'].status == 'fail'


def test_subbialgebra(fix3):
    field = fix3.field
    vectors = [{fix3.index('1#1'): field.one}, {fix3.index('1#g'): field.one}]
    sub, inclusion = subbialgebra(fix3, vectors)
    assert sub.dim == 2
    assert sub.labels == ['1#1', '1#g']
    assert check_dqb(sub).passed
    assert check_dqb_morphism(inclusion).passed

    with pytest.raises(PreconditionError):
        subbialgebra(fix3, [{fix3.index('x#1'): field.one}])
