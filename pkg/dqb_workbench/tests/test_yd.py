import pytest

from dqb_workbench.base import PreconditionError, ShapeError
from dqb_workbench.exact import (columns_of, from_columns, identity,
                                 matrices_equal, permutation_matrix)
from dqb_workbench.yd import (YDModule, check_braided_bialgebra,
                              check_comodule, check_pentagon, check_triangle,
                              check_yd, check_yd_morphism, comodule_tensor,
                              delta_agreement, is_yd_morphism, unit_module,
                              yd_associator, yd_braiding, yd_tensor)


def test_check_yd(j_module, r_sweedler, r_klein):
    report = check_yd(j_module)
    assert report.passed, report.failed
    assert report.names == ['coassociativity', 'counit', 'unit action',
                            'quasi-associativity', 'compatibility',
                            'left-handed quasi-associativity']
    assert check_yd(r_sweedler.carrier).passed
    assert check_yd(r_klein.carrier).passed


def test_unit_module(fix2):
    k = unit_module(fix2)
    assert k.dim == 1
    assert check_yd(k).passed


def test_broken_action(fix2, j_module):
    # g⊳(g⊳v) = v is the untwisted relation, J needs the sign
    untwisted = YDModule(fix2, ['v', 'w'], j_module.coaction,
                         {(0, 0, 0): 1, (0, 1, 1): 1,
                          (1, 0, 1): 1, (1, 1, 0): 1})
    report = check_yd(untwisted)
    assert report['quasi-associativity'].status == 'fail'
    assert report['coassociativity'].status == 'pass'


def test_comodule_only(fix2, j_module):
    plain = YDModule(fix2, ['v', 'w'], j_module.coaction)
    assert not plain.has_action
    assert check_comodule(plain).passed
    with pytest.raises(PreconditionError):
        check_yd(plain)
    with pytest.raises(PreconditionError):
        yd_tensor(plain, j_module)


def test_shapes(fix1, fix2, j_module):
    with pytest.raises(ShapeError):
        YDModule(fix2, ['v'], {(0, 0, 1): 1})
    other = YDModule(fix1, ['v'], {(0, 0, 0): 1}, {(0, 0, 0): 1,
                                                   (1, 0, 0): 1})
    with pytest.raises(ShapeError):
        comodule_tensor(other, j_module)


def test_associator(fix1, fix2, j_module, r_sweedler):
    # trivial reassociator
    R = r_sweedler.carrier
    assert matrices_equal(yd_associator(R, R, R), identity(8, fix1.field))

    # every basis vector of J has grade g, ω⁻¹(g, g, g) = -1
    a = yd_associator(j_module, j_module, j_module)
    minus = from_columns([{i: -fix2.field.one} for i in range(8)], 8,
                         fix2.field)
    assert matrices_equal(a, minus)
    back = yd_associator(j_module, j_module, j_module, inverse=True)
    assert matrices_equal(back, a)


def test_pentagon_and_triangle(fix2, j_module):
    k = unit_module(fix2)
    assert check_pentagon(j_module, j_module, j_module, j_module).passed
    assert check_pentagon(j_module, k, j_module, j_module).passed
    assert check_triangle(j_module, j_module).passed


def test_braiding(fix2, j_module):
    c = yd_braiding(j_module, j_module)
    columns = columns_of(c)
    one = fix2.field.one
    # c(v⊗v) = (g⊳v)⊗v = w⊗v
    assert columns[0] == {2: one}
    # c(w⊗w) = (g⊳w)⊗w = -v⊗w
    assert columns[3] == {1: -one}


def test_tensor_is_yd(j_module):
    JJ = yd_tensor(j_module, j_module)
    assert JJ.labels == ['v⊗v', 'v⊗w', 'w⊗v', 'w⊗w']
    assert check_yd(JJ).passed
    report = check_yd_morphism(yd_braiding(j_module, j_module), JJ, JJ)
    assert report.names == ['colinear', 'linear']
    assert report.passed


def test_yd_morphism_failure(fix2, j_module):
    f = permutation_matrix([1, 0], fix2.field)
    report = check_yd_morphism(f, j_module, j_module)
    assert report['colinear'].status == 'pass'
    assert report['linear'].status == 'fail'
    assert not is_yd_morphism(f, j_module, j_module)
    assert is_yd_morphism(identity(2, fix2.field), j_module, j_module)
    with pytest.raises(ShapeError):
        check_yd_morphism(identity(3, fix2.field), j_module, j_module)


def test_braided_bialgebra(r_sweedler, r_klein):
    for R in (r_sweedler, r_klein):
        report = check_braided_bialgebra(R)
        assert report.passed, report.failed
        assert delta_agreement(R)
    assert check_braided_bialgebra(r_sweedler).names[-1] == 'compatibility'
