import random

import pytest
from pydantic import ValidationError

from dqb_workbench.base import NonHomogeneous, PreconditionError
from dqb_workbench.crossed import (CrossedGModule, crossed_braiding,
                                   crossed_check, crossed_tensor,
                                   crossed_to_yd, random_crossed_module,
                                   yd_to_crossed)
from dqb_workbench.dqb import (GroupCocycleData, from_group_cocycle,
                               standard_cyclic)
from dqb_workbench.exact import columns_of, matrices_equal
from dqb_workbench.yd import YDModule, check_yd, yd_braiding, yd_tensor


@pytest.fixture(scope='module')
def z2(z2_ws):
    return z2_ws.get('Z2')


@pytest.fixture(scope='module')
def crossed_j(z2_ws):
    return z2_ws.get('J')


@pytest.fixture(scope='module')
def z4(F5):
    return standard_cyclic(4, F5, 2)


def test_crossed_check(crossed_j):
    report = crossed_check(crossed_j)
    assert report.passed, report.failed
    assert report.names == ['group', 'grading compatible', 'unit action',
                            'twisted associativity']
    assert crossed_j.component(1) == [0, 1]


def test_one_dimensional(z2):
    # (g▸)² = 1 contradicts the twist θ(g, g, g) = -1 in grade g
    odd = CrossedGModule(group=z2, labels=['x'], grading=[1],
                         action={(0, 0): {0: 1}, (1, 0): {0: -1}})
    report = crossed_check(odd)
    assert report['twisted associativity'].status == 'fail'
    assert report['twisted associativity'].witness.at == ['g', 'g', 'x']

    even = CrossedGModule(group=z2, labels=['x'], grading=[0],
                          action={(0, 0): {0: 1}, (1, 0): {0: -1}})
    assert crossed_check(even).passed


def test_validation(z2):
    with pytest.raises(ValidationError):
        CrossedGModule(group=z2, labels=['x'], grading=[2])
    with pytest.raises(ValidationError):
        CrossedGModule(group=z2, labels=['x'], grading=[0, 1])
    with pytest.raises(ValidationError):
        CrossedGModule(group=z2, labels=['x'], grading=[0],
                       action={(0, 0): {3: 1}})

    V = CrossedGModule(group=z2, labels=['x'], grading=[0],
                       action={(0, 0): {0: 1}, (1, 0): {0: 0}})
    assert V.act(1, 0) == {}


def test_round_trip(crossed_j):
    W = crossed_to_yd(crossed_j)
    assert check_yd(W).passed
    assert yd_to_crossed(W, crossed_j.group) == crossed_j


@pytest.mark.parametrize('group_name', ['z2', 'z4'])
def test_random_round_trips(group_name, request):
    group = request.getfixturevalue(group_name)
    H = from_group_cocycle(group)
    rng = random.Random(7)
    for _ in range(20):
        V = random_crossed_module(group, rng=rng)
        assert crossed_check(V).passed
        if not V.dim:
            continue
        W = crossed_to_yd(V, H)
        assert check_yd(W).passed
        assert yd_to_crossed(W, group) == V


def test_random_needs_cyclic():
    klein = GroupCocycleData.product([2, 2])
    with pytest.raises(PreconditionError):
        random_crossed_module(klein)


def test_tensor_matches_yd(z2, crossed_j):
    H = from_group_cocycle(z2)
    W = crossed_to_yd(crossed_j, H)
    tensor = crossed_tensor(crossed_j, crossed_j)
    assert tensor.grading == [0, 0, 0, 0]
    assert crossed_check(tensor).passed
    assert yd_to_crossed(yd_tensor(W, W), z2) == tensor

    rng = random.Random(11)
    for _ in range(3):
        U = random_crossed_module(z2, rng=rng, max_blocks=1)
        V = random_crossed_module(z2, rng=rng, max_blocks=1)
        if not (U.dim and V.dim):
            continue
        transported = yd_tensor(crossed_to_yd(U, H), crossed_to_yd(V, H))
        assert yd_to_crossed(transported, z2) == crossed_tensor(U, V)


def test_tensor_grading(z2):
    x = CrossedGModule(group=z2, labels=['x'], grading=[1],
                       action={(0, 0): {0: 1}})
    y = CrossedGModule(group=z2, labels=['y'], grading=[1],
                       action={(0, 0): {0: 1}})
    assert crossed_tensor(x, y).grading == [0]


def test_braiding_matches_yd(z2, crossed_j):
    H = from_group_cocycle(z2)
    W = crossed_to_yd(crossed_j, H)
    c = crossed_braiding(crossed_j, crossed_j)
    assert matrices_equal(c, yd_braiding(W, W))
    one = z2.field.one
    # c(v⊗v) = (g▸v)⊗v = w⊗v
    assert columns_of(c)[0] == {2: one}


def test_non_homogeneous(z2):
    H = from_group_cocycle(z2)
    mixed = YDModule(H, ['v'], {(0, 0, 0): 1, (0, 1, 0): 1})
    with pytest.raises(NonHomogeneous) as info:
        yd_to_crossed(mixed, z2)
    assert info.value.label == 'v'

    with pytest.raises(PreconditionError):
        yd_to_crossed(crossed_to_yd(
            CrossedGModule(group=z2, labels=['x'], grading=[0],
                           action={(0, 0): {0: 1}, (1, 0): {0: 1}})),
            standard_cyclic(4, z2.field, -1))
