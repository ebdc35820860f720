import logging

import pytest

from dqb_workbench.base import PreconditionError, ShapeError
from dqb_workbench.exact import from_columns, identity, matrices_equal
from dqb_workbench.preantipode import (QuasiHopfData, check_antipode,
                                       check_derived_identities,
                                       check_preantipode, check_quasi_hopf,
                                       cocommutative_to_hopf,
                                       convolve_functional,
                                       counit_functional,
                                       group_preantipode, preantipode_system,
                                       solve_preantipode)


def test_solve_fixtures(fix1, fix2, fix3, fix4):
    for H in (fix1, fix2, fix3, fix4):
        solution = solve_preantipode(H)
        assert solution is not None
        assert check_preantipode(H, solution.S).passed
        report = check_derived_identities(H, solution.S)
        assert report.passed, report.failed
        assert report.names == ['left product identity',
                                'right product identity',
                                'inverse reassociator identity']


def test_solver_logs_quietly(fix1, fix3, fix4, fix5, caplog):
    with caplog.at_level(logging.DEBUG):
        for H in (fix1, fix3, fix4, fix5):
            solve_preantipode(H)
    assert caplog.records
    assert all(record.levelno != logging.INFO for record in caplog.records
               if record.name.startswith('dqb_workbench'))


def test_solution_unique_on_groups(fix1, fix2, Q):
    solution = solve_preantipode(fix1)
    assert solution.unique
    assert matrices_equal(solution.S, identity(2, Q))

    # S(g) = ω(g, g, g)⁻¹ g = -g
    solution = solve_preantipode(fix2)
    assert solution.unique
    g = fix2.index('g')
    expected = from_columns([{0: Q.one}, {g: -Q.one}], 2, Q)
    assert matrices_equal(solution.S, expected)
    assert matrices_equal(group_preantipode(fix2), expected)


def test_no_preantipode(fix5):
    assert solve_preantipode(fix5) is None


def test_system_size(fix2):
    rows, rhs = preantipode_system(fix2)
    assert max(rows) < 2 * 2 ** 3 + 2
    assert set(rhs) == {2 * 2 ** 3, 2 * 2 ** 3 + 1}


def test_group_preantipode(fix1, fix2, fix3, fix5):
    for H in (fix1, fix2):
        assert check_preantipode(H, group_preantipode(H)).passed
    # trivial reassociator, the preantipode is the antipode
    assert check_antipode(fix1, group_preantipode(fix1)).passed

    with pytest.raises(PreconditionError):
        group_preantipode(fix3)
    with pytest.raises(PreconditionError):
        group_preantipode(fix5)


def test_wrong_preantipode(fix2, Q):
    S = identity(2, Q)
    report = check_preantipode(fix2, S)
    assert report['left coaction identity'].status == 'pass'
    assert report['reassociator identity'].status == 'fail'
    assert report['reassociator identity'].witness.at == ['g']

    derived = check_derived_identities(fix2, S)
    assert {r.status for r in derived.records} == {'precondition'}

    with pytest.raises(ShapeError):
        check_preantipode(fix2, identity(3, Q))


def test_cocommutative_to_hopf(fix2, fix3, Q):
    S = group_preantipode(fix2)
    data = cocommutative_to_hopf(fix2, S)
    report = check_quasi_hopf(fix2, data)
    assert report.passed, report.failed

    g = fix2.index('g')
    # s(g) = -g ω(g, g, g) = g
    assert matrices_equal(data.s, identity(2, Q))
    assert data.alpha(g) == Q.one
    assert data.beta(g) == -Q.one
    # S = β∗s
    assert matrices_equal(convolve_functional(fix2, data.beta, data.s), S)

    with pytest.raises(PreconditionError):
        cocommutative_to_hopf(fix2, identity(2, Q))
    with pytest.raises(PreconditionError):
        cocommutative_to_hopf(fix3, solve_preantipode(fix3).S)


def test_cocommutative_to_hopf_trivial_reassociator(fix1, Q):
    S = group_preantipode(fix1)
    data = cocommutative_to_hopf(fix1, S)
    assert check_quasi_hopf(fix1, data).passed
    assert matrices_equal(data.s, identity(2, Q))
    assert data.beta(fix1.index('g')) == Q.one
    assert matrices_equal(convolve_functional(fix1, data.beta, data.s), S)


def test_quasi_hopf_wrong_beta(fix2):
    data = cocommutative_to_hopf(fix2, group_preantipode(fix2))
    wrong = QuasiHopfData(s=data.s, alpha=data.alpha,
                          beta=counit_functional(fix2))
    report = check_quasi_hopf(fix2, wrong)
    assert not report.passed
    assert report['beta identity'].status == 'pass'
    # ω(g, s(g), g) = -1
    failure = report.first_failure
    assert failure.name == 'reassociator identity'
    assert failure.witness.at == ['g']
