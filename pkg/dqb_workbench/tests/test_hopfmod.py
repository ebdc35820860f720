import pytest

from dqb_workbench.base import PreconditionError, ShapeError
from dqb_workbench.exact import (columns_of, compose, from_columns, identity,
                                 inverse, is_identity, kron, matrices_equal,
                                 permutation_matrix)
from dqb_workbench.hopfmod import (F_build, Trimodule, adjunction_suite,
                                   check_monoidal_functor,
                                   check_tau_laws, check_tensor_coherence,
                                   check_trimodule, coinvariants, cotensor,
                                   is_trimodule_morphism, lambda_map,
                                   left_unitor, regular_trimodule,
                                   right_unitor, structure_map, tau,
                                   tensor_maps, tensor_over_H,
                                   tensor_over_H_associator,
                                   trimodule_braiding, yd_on_coinvariants)
from dqb_workbench.preantipode import solve_preantipode
from dqb_workbench.yd import YDModule, check_yd, is_yd_morphism, unit_module


@pytest.fixture(scope='module')
def S2(fix2):
    return solve_preantipode(fix2).S


@pytest.fixture(scope='module')
def FJ(j_module):
    return F_build(j_module)


def test_regular_trimodule(fix1, fix2, fix3):
    for H in (fix1, fix2, fix3):
        report = check_trimodule(regular_trimodule(H))
        assert report.passed, report.failed
    assert coinvariants(regular_trimodule(fix2)).dim == 1


def test_F_build(fix2, j_module, r_sweedler, FJ):
    assert FJ.dim == 4
    assert FJ.labels == ['v⊗1', 'v⊗g', 'w⊗1', 'w⊗g']
    assert FJ.has_left_action
    report = check_trimodule(FJ)
    assert report.passed, report.failed
    assert 'actions compatible' in report.names

    FR = F_build(r_sweedler.carrier)
    assert check_trimodule(FR).passed

    # F(k) is H with its regular structures
    Fk = F_build(unit_module(fix2))
    assert Fk.dim == 2
    regular = regular_trimodule(fix2)
    for m in range(2):
        for h in range(2):
            assert Fk.ract(m, h) == regular.ract(m, h)
            assert Fk.lact(h, m) == regular.lact(h, m)


def test_missing_reassociator_factor(fix2, FJ):
    plain = {}
    for i in range(FJ.dim):
        v, h = divmod(i, 2)
        for l in range(2):
            for p, z in fix2.mul_basis(h, l).items():
                plain[(i, l, v * 2 + p)] = z
    M = Trimodule(fix2, FJ.labels, FJ.lco_tensor, FJ.rco_tensor, plain)
    report = check_trimodule(M)
    assert report['coactions commute'].status == 'pass'
    assert report['right action quasi-associative'].status == 'fail'


def test_coinvariants(FJ, j_module):
    K = coinvariants(FJ)
    assert K.dim == j_module.dim
    one = FJ.field.one
    assert K.contains({0: one})
    assert not K.contains({1: one})


def test_tau(fix1, fix2, FJ, S2):
    t = tau(FJ, S2)
    one = fix2.field.one
    # τ(v⊗h) = (v⊗1)ε(h)
    assert columns_of(t) == [{0: one}, {0: one}, {2: one}, {2: one}]
    assert matrices_equal(compose(t, t), t)
    report = check_tau_laws(FJ, t)
    assert report.passed, report.failed

    S1 = solve_preantipode(fix1).S
    regular = regular_trimodule(fix1)
    assert columns_of(tau(regular, S1)) == [{0: one}, {0: one}]

    with pytest.raises(ShapeError):
        tau(FJ, identity(3, fix2.field))


def test_tau_laws_perturbed(fix2):
    regular = regular_trimodule(fix2)
    report = check_tau_laws(regular, identity(2, fix2.field))
    assert report['reconstruction'].status == 'fail'
    assert report['coinvariant image'].status == 'fail'


def test_tensor_over_H(fix2, FJ):
    T = tensor_over_H(FJ, FJ)
    assert T.dim == 8
    assert is_identity(compose(T.chi, T.section))
    assert check_trimodule(T.module).passed

    regular = regular_trimodule(fix2)
    assert tensor_over_H(regular, FJ).dim == FJ.dim
    l = left_unitor(FJ)
    assert l.shape == (4, 4)
    assert inverse(l, fix2.field) is not None

    C = cotensor(regular, FJ)
    assert C.dim == FJ.dim
    assert check_trimodule(C.module).passed


def test_tensor_needs_left_action(fix2, j_module, FJ):
    plain = F_build(YDModule(fix2, ['v', 'w'], j_module.coaction))
    assert not plain.has_left_action
    with pytest.raises(PreconditionError):
        tensor_over_H(FJ, plain)
    assert check_trimodule(plain).passed


def test_tensor_coherence(FJ, fix2):
    regular = regular_trimodule(fix2)
    a = tensor_over_H_associator(FJ, regular, FJ)
    assert a.shape == (8, 8)
    assert inverse(a, fix2.field) is not None
    report = check_tensor_coherence(FJ, regular, FJ, FJ)
    assert report.passed, report.failed
    assert report.names == ['pentagon', 'triangle']


STRUCTURE_PAIRS = [
    ('xi', 'xi_inverse', 'JM'),
    ('alpha', 'alpha_inverse', 'JJ'),
    ('beta', 'beta_inverse', 'JM'),
    ('phi2', 'phi2_inverse', 'JJ'),
    ('psi2', 'psi2_inverse', 'JJ'),
    ('kappa', 'kappa_inverse', 'JJ'),
    ('theta2', 'theta2_inverse', 'MM'),
    ('psi2_G_inverse', 'psi2_G', 'MM'),
]


@pytest.mark.parametrize('kind,inverse_kind,shape', STRUCTURE_PAIRS)
def test_structure_maps_invertible(kind, inverse_kind, shape, j_module, FJ,
                                   S2):
    args = {'JM': (j_module, FJ), 'JJ': (j_module, j_module),
            'MM': (FJ, FJ)}[shape]
    forward = structure_map(kind, *args, S=S2)
    backward = structure_map(inverse_kind, *args, S=S2)
    assert is_identity(compose(forward, backward))
    assert is_identity(compose(backward, forward))


def test_structure_map_relations(j_module, FJ, S2):
    J = j_module
    kappa = structure_map('kappa', J, J)
    assert matrices_equal(kappa, compose(structure_map('psi2_inverse', J, J),
                                         structure_map('phi2', J, J)))
    theta = structure_map('theta2', FJ, FJ, S=S2)
    assert matrices_equal(theta, compose(structure_map('phi2_inverse', J, J),
                                         structure_map('psi2', J, J)))


def test_structure_map_errors(fix2, FJ):
    assert is_identity(structure_map('phi0', fix2))
    with pytest.raises(ShapeError):
        structure_map('upsilon', fix2)
    with pytest.raises(PreconditionError):
        structure_map('theta2', FJ, FJ)


@pytest.mark.parametrize('kind', ['tensor', 'cotensor'])
def test_monoidal_functor(kind, j_module):
    report = check_monoidal_functor(j_module, j_module, j_module, kind)
    assert report.passed, report.failed
    assert report.names == ['associativity diagram', 'left unit diagram',
                            'right unit diagram']


def test_monoidal_functor_unknown(j_module):
    with pytest.raises(ShapeError):
        check_monoidal_functor(j_module, j_module, j_module, 'direct sum')


def test_adjunction(fix1, fix2, j_module, FJ, S2):
    report = adjunction_suite(fix2, j_module, FJ, S2)
    assert report.passed, report.failed

    report = adjunction_suite(fix2, j_module, FJ)
    assert report['unit is an isomorphism'].status == 'pass'
    assert report['counit is an isomorphism'].status == 'precondition'
    assert 'no preantipode' in report['counit is an isomorphism'] \
        .witness.message

    with pytest.raises(ShapeError):
        adjunction_suite(fix2, j_module, regular_trimodule(fix1), S2)


def test_adjunction_without_preantipode(fix5):
    assert solve_preantipode(fix5) is None
    report = adjunction_suite(fix5, unit_module(fix5),
                              regular_trimodule(fix5))
    assert not report.passed
    record = report['counit is a morphism']
    assert record.status == 'precondition'
    assert record.witness.message == \
        'no preantipode; equivalence not certified'


def test_yd_on_coinvariants(fix1, FJ, S2, j_module):
    G = yd_on_coinvariants(FJ, S2)
    assert G.dim == j_module.dim
    assert check_yd(G).passed

    trivial = yd_on_coinvariants(regular_trimodule(fix1),
                                 solve_preantipode(fix1).S)
    assert trivial.dim == 1
    assert check_yd(trivial).passed


def test_braiding_transported(j_module, FJ, S2):
    c = trimodule_braiding(FJ, FJ, S2)
    assert matrices_equal(c, lambda_map(j_module, j_module))


def test_braiding_transported_sweedler(fix1, r_sweedler):
    R = r_sweedler.carrier
    FR = F_build(R)
    c = trimodule_braiding(FR, FR, solve_preantipode(fix1).S)
    assert c.shape == (8, 8)
    assert matrices_equal(c, lambda_map(R, R))


def test_braiding_with_unit(fix1, j_module, r_sweedler, S2):
    cases = [(F_build(j_module), S2),
             (F_build(r_sweedler.carrier), solve_preantipode(fix1).S)]
    for M, S in cases:
        regular = regular_trimodule(M.H)
        # M⊗_H H → H⊗_H M is l⁻¹r
        c = trimodule_braiding(M, regular, S)
        assert matrices_equal(compose(left_unitor(M), c), right_unitor(M))


def test_braiding_natural(fix2, j_module, FJ, S2):
    Q = fix2.field
    # v ↦ w, w ↦ -v commutes with the action of g
    rotation = from_columns([{1: Q.one}, {0: -Q.one}], 2, Q)
    assert is_yd_morphism(rotation, j_module, j_module)
    f = kron(rotation, identity(fix2.dim, Q), Q)
    assert is_trimodule_morphism(f, FJ, FJ)

    T = tensor_over_H(FJ, FJ)
    c = trimodule_braiding(FJ, FJ, S2)
    one = identity(FJ.dim, Q)
    f_left = tensor_maps(f, one, T, T)
    f_right = tensor_maps(one, f, T, T)
    assert matrices_equal(compose(c, f_left), compose(f_right, c))
    assert matrices_equal(compose(c, f_right), compose(f_left, c))


def test_trimodule_morphism(fix2, FJ):
    assert is_trimodule_morphism(identity(FJ.dim, fix2.field), FJ, FJ)
    regular = regular_trimodule(fix2)
    f = permutation_matrix([1, 0], fix2.field)
    assert not is_trimodule_morphism(f, regular, regular)
