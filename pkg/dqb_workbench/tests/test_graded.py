from itertools import product

import pytest

from dqb_workbench.base import PreconditionError
from dqb_workbench.bosonization import (check_projection, check_splitting,
                                        split_with_solver)
from dqb_workbench.coalgebra import Filtration
from dqb_workbench.dqb import check_dqb, check_dqb_morphism
from dqb_workbench.exact import Subspace
from dqb_workbench.graded import (check_algebra_filtration,
                                  check_dual_chevalley, coradical_filtration,
                                  gr_dqb, gr_projection, representative_map)
from dqb_workbench.yd import check_braided_bialgebra


def test_gr_sweedler(fix3):
    F = coradical_filtration(fix3)
    assert check_dual_chevalley(fix3, F).passed
    assert check_algebra_filtration(fix3, F).passed

    G = gr_dqb(fix3, F)
    assert G.degrees == [0, 0, 1, 1]
    assert G.homogeneous(0) == [0, 1]
    assert not G.declared
    assert check_dqb(G).passed
    # coradically graded already
    assert check_dqb_morphism(representative_map(G)).passed


def test_gr_twisted(fix4):
    G = gr_dqb(fix4, coradical_filtration(fix4))
    report = check_dqb(G)
    assert report.passed, report.failed
    assert G.degrees.count(0) == 4

    # ω_gr lives in degree (0, 0, 0) and agrees with ω there
    for index, value in G.omega.items():
        assert all(G.degrees[i] == 0 for i in index)
    base = G.homogeneous(0)
    for i, j, k in product(base, repeat=3):
        reps = [G.representatives[x] for x in (i, j, k)]
        assert G.w(i, j, k) == fix4.w_vec(*reps)


def test_gr_cosemisimple(fix1):
    F = coradical_filtration(fix1)
    G = gr_dqb(fix1, F, declared=True)
    assert G.dim == fix1.dim
    assert G.degrees == [0, 0]
    assert G.declared
    p = gr_projection(fix1, F)
    assert split_with_solver(p).R.dim == 1


@pytest.mark.parametrize('name', ['fix3', 'fix4'])
def test_gr_projection_splits(name, request):
    A = request.getfixturevalue(name)
    p = gr_projection(A, coradical_filtration(A))
    assert p.H.dim == A.dim // 2
    assert check_projection(p).passed

    s = split_with_solver(p)
    assert s.R.dim == 2
    assert check_braided_bialgebra(s.R).passed
    report = check_splitting(p, s)
    assert report.passed, report.failed


def test_not_a_coalgebra_filtration(fix3):
    Q = fix3.field
    layers = [Subspace([{0: Q.one}], 4, Q),
              Subspace([{i: Q.one} for i in range(4)], 4, Q)]
    F = Filtration(layers)
    report = check_dual_chevalley(fix3, F)
    assert report['coalgebra filtration'].status == 'fail'
    assert report['unit in degree 0'].status == 'pass'
    with pytest.raises(PreconditionError):
        gr_dqb(fix3, F)


def test_uncertified_coradical(fix3):
    with pytest.raises(PreconditionError):
        coradical_filtration(fix3, [{0: fix3.field.one}])
