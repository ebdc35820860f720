"""
Bosonization of a braided bialgebra R in the Yetter-Drinfeld category of
H and the converse splitting of a dual quasi-bialgebra with a projection
onto H.

The carrier of ``R#H`` is ``R⊗H`` indexed ``r * dim(H) + h``.
"""
import logging
from itertools import product

from pydantic import model_validator
from sympy.polys.matrices import DomainMatrix

from dqb_workbench.base import CheckSuite, PreconditionError, ShapeError
from dqb_workbench.dqb import (DQBMorphism, DualQuasiBialgebra,
                               check_dqb_morphism)
from dqb_workbench.exact import (Subspace, Vec, accumulate, columns_of,
                                 compose, from_columns, inverse, is_identity)
from dqb_workbench.hopfmod import Trimodule
from dqb_workbench.preantipode import check_preantipode, solve_preantipode
from dqb_workbench.schemas import Model, Report, Witness
from dqb_workbench.utils import dedupe_labels, format_vector
from dqb_workbench.yd import (BraidedBialgebra, YDModule,
                              check_braided_bialgebra, check_yd_morphism,
                              omega, unit_module)

logger = logging.getLogger(__name__)


class ProjectionData(Model):
    """
    A dual quasi-bialgebra A with maps ``σ: H → A`` and ``π: A → H``
    such that ``π∘σ = id``.
    """
    A: DualQuasiBialgebra
    H: DualQuasiBialgebra
    sigma: DQBMorphism
    pi: DQBMorphism

    @model_validator(mode='after')
    def validate_maps(self):
        if self.sigma.source is not self.H or self.sigma.target is not self.A:
            raise ValueError('σ must map H to A.')
        if self.pi.source is not self.A or self.pi.target is not self.H:
            raise ValueError('π must map A to H.')
        return self

    @classmethod
    def trivial(cls, H: DualQuasiBialgebra) -> 'ProjectionData':
        """H projecting onto itself."""
        return cls(A=H, H=H, sigma=DQBMorphism.identity(H),
                   pi=DQBMorphism.identity(H))


class Bosonization(Model):
    """
    ``R#H`` with its canonical maps ``σ(h) = 1#h`` and
    ``π(r#h) = ε(r)h``.
    """
    B: DualQuasiBialgebra
    H: DualQuasiBialgebra
    R: BraidedBialgebra
    sigma: DQBMorphism
    pi: DQBMorphism

    @property
    def projection(self) -> ProjectionData:
        return ProjectionData(A=self.B, H=self.H, sigma=self.sigma,
                              pi=self.pi)


class Splitting(Model):
    """
    The braided bialgebra of coinvariants of a projection and the
    isomorphism ``R⊗H → A``, ``r⊗h ↦ rσ(h)``.

    ``basis`` holds the elements of A spanning R, in echelon form.
    """
    R: BraidedBialgebra
    basis: list[dict]
    iso: DomainMatrix
    iso_inverse: DomainMatrix


def unit_bialgebra(H: DualQuasiBialgebra) -> BraidedBialgebra:
    """The ground field as a braided bialgebra over H."""
    one = H.field.one
    return BraidedBialgebra(unit_module(H), {(0, 0, 0): one}, {0: one},
                            {(0, 0, 0): one}, [one], name='k')


def bosonize(H: DualQuasiBialgebra, R: BraidedBialgebra) -> Bosonization:
    """
    Build ``R#H``.

    The multiplication is

        (r#h)(s#k) = ω⁻¹(r₋₂,h₁,s₋₂k₁) ω(h₂,s₋₁,k₂)
                     ω⁻¹((h₃⊳s₀)₋₂,h₄,k₃) ω(r₋₁,(h₃⊳s₀)₋₁,h₅k₄)
                     r₀(h₃⊳s₀)₀ # h₆k₅

    the comultiplication
    ``Δ(r#h) = ω⁻¹(r¹₋₁,r²₋₂,h₁) r¹₀#r²₋₁h₂ ⊗ r²₀#h₃``, the counit
    ``ε_R⊗ε_H`` and the reassociator ``ε_R(r)ε_R(s)ε_R(t)ω(h,k,l)``.

    Raises:
        PreconditionError: R is not a braided bialgebra over H.
    """
    if R.H is not H:
        raise ShapeError('The braided bialgebra lives over another base.')
    report = check_braided_bialgebra(R)
    if not report.passed:
        logger.error(f'{R!r} is not a braided bialgebra: '
                     f'{report.first_failure.name} fails.')
        raise PreconditionError(f'{R!r} is not a braided bialgebra over H',
                                report)
    V = R.carrier
    n, d = H.dim, R.dim
    one = H.field.one

    mult: dict = {}
    for r, h, s, k in product(range(d), range(n), range(d), range(n)):
        image: Vec = {}
        for (r2, r1, r0), a in V.co_n(r, 2):
            for hs, b in H.delta_n(h, 6):
                h1, h2, h3, h4, h5, h6 = hs
                for (s2, s1, s0), c in V.co_n(s, 2):
                    for (k1, k2, k3, k4, k5), e in H.delta_n(k, 5):
                        first = omega(H, r2, h1, H.mul_basis(s2, k1),
                                      inverse=True)
                        if not first:
                            continue
                        second = H.w(h2, s1, k2)
                        if not second:
                            continue
                        scale = a * b * c * e * first * second
                        for t, z in V.act(h3, s0).items():
                            for (t2, t1, t0), u in V.co_n(t, 2):
                                third = H.w_inv(t2, h4, k3)
                                if not third:
                                    continue
                                fourth = omega(H, r1, t1,
                                               H.mul_basis(h5, k4))
                                if not fourth:
                                    continue
                                left = R.mul({r0: one}, {t0: one})
                                right = H.mul_basis(h6, k5)
                                for p, x in left.items():
                                    for q, y in right.items():
                                        accumulate(image, p * n + q,
                                                   scale * z * u * third
                                                   * fourth * x * y)
        for target, value in image.items():
            mult[(r * n + h, s * n + k, target)] = value

    delta: dict = {}
    for r, h in product(range(d), range(n)):
        image: dict = {}
        for (ra, rb), a in R.comult(r):
            for (g, a0), b in V.co(ra):
                for (f2, f1, b0), c in V.co_n(rb, 2):
                    for (h1, h2, h3), e in H.delta_n(h, 3):
                        factor = H.w_inv(g, f2, h1)
                        if not factor:
                            continue
                        for p, x in H.mul_basis(f1, h2).items():
                            accumulate(image, (a0 * n + p, b0 * n + h3),
                                       a * b * c * e * factor * x)
        for (left, right), value in image.items():
            delta[(r * n + h, left, right)] = value

    counit = {r * n + h: R.eps(r) * H.eps(h)
              for r, h in product(range(d), range(n))
              if R.eps(r) and H.eps(h)}
    unit = {}
    for r, x in R.unit.items():
        for h, y in H.one.items():
            unit[r * n + h] = x * y
    reassociator = {}
    for (h, k, l), w in H.omega.items():
        for r, s, t in product(R.counit, repeat=3):
            value = R.eps(r) * R.eps(s) * R.eps(t) * w
            if value:
                reassociator[(r * n + h, s * n + k, t * n + l)] = value

    labels = [f'{a}#{b}' for a, b in product(R.labels, H.labels)]
    B = DualQuasiBialgebra(H.field, labels, delta, counit, mult, unit,
                           reassociator)
    logger.debug(f'Bosonization of {R!r} by {H!r}: dimension {B.dim}, '
                 f'{len(mult)} product entries.')

    sigma_columns = []
    for h in range(n):
        sigma_columns.append({r * n + h: x for r, x in R.unit.items()})
    pi_columns = []
    for r, h in product(range(d), range(n)):
        pi_columns.append({h: R.eps(r)} if R.eps(r) else {})
    sigma = DQBMorphism(H, B, from_columns(sigma_columns, B.dim, H.field),
                        name='σ')
    pi = DQBMorphism(B, H, from_columns(pi_columns, n, H.field), name='π')
    return Bosonization(B=B, H=H, R=R, sigma=sigma, pi=pi)


def check_projection(p: ProjectionData) -> Report:
    """σ and π are morphisms and ``π∘σ = id``."""

    def morphism(f: DQBMorphism):
        def check():
            report = check_dqb_morphism(f)
            failure = report.first_failure
            return None if failure is None else failure.witness
        return check

    def retraction():
        composite = compose(p.pi.matrix, p.sigma.matrix)
        if is_identity(composite):
            return None
        for h, column in enumerate(columns_of(composite)):
            if column != {h: p.H.field.one}:
                return Witness(at=[p.H.labels[h]],
                               lhs=p.H.format(column),
                               rhs=p.H.labels[h], message='πσ(h) ≠ h')
        return None

    return CheckSuite(f'projection of {p.A!r} onto {p.H!r}', [
        ('σ is a morphism', morphism(p.sigma)),
        ('π is a morphism', morphism(p.pi)),
        ('π∘σ = id', retraction)]).run()


def _require_projection(p: ProjectionData, S: DomainMatrix | None = None):
    report = check_projection(p)
    if not report.passed:
        raise PreconditionError('invalid projection data', report)
    if S is not None:
        report = check_preantipode(p.H, S)
        if not report.passed:
            raise PreconditionError('invalid preantipode', report)


def projection_trimodule(p: ProjectionData) -> Trimodule:
    """
    A with ``ρˡ(a) = π(a₁)⊗a₂``, ``ρʳ(a) = a₁⊗π(a₂)``, ``ah = aσ(h)``
    and ``ha = σ(h)a``.
    """
    A, H = p.A, p.H
    one = A.field.one

    def lco(a):
        out: dict = {}
        for (a1, a2), c in A.comult(a):
            for h, x in p.pi.image(a1).items():
                accumulate(out, (h, a2), c * x)
        return out

    def rco(a):
        out: dict = {}
        for (a1, a2), c in A.comult(a):
            for h, x in p.pi.image(a2).items():
                accumulate(out, (a1, h), c * x)
        return out

    return Trimodule.from_functions(
        H, A.labels, lco, rco,
        lambda a, h: A.mul({a: one}, p.sigma.image(h)),
        lambda h, a: A.mul(p.sigma.image(h), {a: one}), name='A')


def split_tau(p: ProjectionData, S: DomainMatrix) -> DomainMatrix:
    """
    ``τ(a) = ω_A(a₁, σSπ(a₃)₁, a₄) a₂σSπ(a₃)₂``, the projection of A onto
    its coinvariants.
    """
    _require_projection(p, S)
    A = p.A
    S_columns = columns_of(S)
    one = A.field.one
    twisted: dict[int, dict] = {}
    columns = []
    for a in range(A.dim):
        image: Vec = {}
        for (a1, a2, a3, a4), c in A.delta_n(a, 4):
            if a3 not in twisted:
                x: Vec = {}
                for h, y in p.pi.image(a3).items():
                    for g, z in S_columns[h].items():
                        for q, v in p.sigma.image(g).items():
                            accumulate(x, q, y * z * v)
                twisted[a3] = A.delta_vec(x)
            for (b1, b2), e in twisted[a3].items():
                factor = A.w(a1, b1, a4)
                if not factor:
                    continue
                for q, v in A.mul({a2: one}, {b2: one}).items():
                    accumulate(image, q, c * e * factor * v)
        columns.append(image)
    return from_columns(columns, A.dim, A.field)


def split(p: ProjectionData, S: DomainMatrix) -> Splitting:
    """
    The braided bialgebra ``R = τ(A)`` with

    * ``h⊳r = τ(σ(h)r)`` and ``ρ(r) = π(r₁)⊗r₂``,
    * the multiplication and unit of A,
    * ``Δ_R(r) = τ(r₁)⊗τ(r₂)`` and ``ε_R = ε_A``,

    together with ``r⊗h ↦ rσ(h)`` and its inverse ``a ↦ τ(a₁)⊗π(a₂)``.
    """
    A, H = p.A, p.H
    field = A.field
    n = H.dim
    t = columns_of(split_tau(p, S))
    K = Subspace(t, A.dim, field)
    d = K.dim
    logger.debug(f'Coinvariants of {A!r}: dimension {d}.')

    def apply_tau(vec: Vec) -> Vec:
        out: Vec = {}
        for i, x in vec.items():
            for j, y in t[i].items():
                accumulate(out, j, x * y)
        return out

    coaction: dict = {}
    action: dict = {}
    mult: dict = {}
    delta: dict = {}
    for i, b in enumerate(K.basis):
        by_h: dict[int, Vec] = {}
        tensor: dict = {}
        for (a1, a2), c in A.delta_vec(b).items():
            for h, x in p.pi.image(a1).items():
                accumulate(by_h.setdefault(h, {}), a2, c * x)
            for (u, x), (v, y) in product(t[a1].items(), t[a2].items()):
                accumulate(tensor, (u, v), c * x * y)
        for h, vec in by_h.items():
            for q, y in K.coordinates(vec).items():
                coaction[(i, h, q)] = y
        for (u, v), c in tensor.items():
            if u in K.pivots and v in K.pivots:
                delta[(i, K.pivots.index(u), K.pivots.index(v))] = c
        for h in range(n):
            moved = apply_tau(A.mul(p.sigma.image(h), b))
            for q, y in K.coordinates(moved).items():
                action[(h, i, q)] = y
        for j, b2 in enumerate(K.basis):
            for q, y in K.coordinates(A.mul(b, b2)).items():
                mult[(i, j, q)] = y

    labels = dedupe_labels([format_vector(b, A.labels, field).replace(' ', '')
                            for b in K.basis])
    carrier = YDModule(H, labels, coaction, action, name='R')
    counit = {i: A.counit_of(b) for i, b in enumerate(K.basis)}
    R = BraidedBialgebra(carrier, mult, K.coordinates(A.one), delta, counit,
                         name='R')

    iso_columns = []
    for b, h in product(K.basis, range(n)):
        iso_columns.append(A.mul(b, p.sigma.image(h)))
    inverse_columns = []
    for a in range(A.dim):
        image: Vec = {}
        for (a1, a2), c in A.comult(a):
            coords = K.coordinates(t[a1])
            for h, x in p.pi.image(a2).items():
                for i, y in coords.items():
                    accumulate(image, i * n + h, c * x * y)
        inverse_columns.append(image)
    return Splitting(R=R, basis=list(K.basis),
                     iso=from_columns(iso_columns, A.dim, field),
                     iso_inverse=from_columns(inverse_columns, d * n, field))


def split_with_solver(p: ProjectionData) -> Splitting:
    """Split with the preantipode found by the solver."""
    solution = solve_preantipode(p.H)
    if solution is None:
        raise PreconditionError(f'{p.H!r} has no preantipode')
    return split(p, solution.S)


def bosonization_iso(H: DualQuasiBialgebra, R: BraidedBialgebra,
                     R2: BraidedBialgebra, f: DomainMatrix) -> Report:
    """
    ``f: R → R2`` is an isomorphism of braided bialgebras over H.
    """
    if R.H is not H or R2.H is not H:
        raise ShapeError('Braided bialgebras over different bases.')
    if f.shape != (R2.dim, R.dim):
        raise ShapeError(f'Map of shape {f.shape} from dimension {R.dim} to '
                         f'{R2.dim}.')
    images = columns_of(f)
    field = H.field

    def apply(vec: Vec) -> Vec:
        out: Vec = {}
        for i, x in vec.items():
            for j, y in images[i].items():
                accumulate(out, j, x * y)
        return out

    def yd_morphism():
        report = check_yd_morphism(f, R.carrier, R2.carrier)
        failure = report.first_failure
        return None if failure is None else failure.witness

    def invertible():
        if f.shape[0] != f.shape[1] or inverse(f, field) is None:
            return Witness(message='f is not invertible')
        return None

    def multiplicative():
        for i, j in product(range(R.dim), repeat=2):
            lhs = apply(R.mul({i: field.one}, {j: field.one}))
            rhs = R2.mul(images[i], images[j])
            if lhs != rhs:
                return Witness(at=[R.labels[i], R.labels[j]],
                               lhs=format_vector(lhs, R2.labels, field),
                               rhs=format_vector(rhs, R2.labels, field))
        if apply(R.unit) != R2.unit:
            return Witness(message='f(1) ≠ 1')
        return None

    def comultiplicative():
        for i in range(R.dim):
            lhs: dict = {}
            for (a, b), c in R.comult(i):
                for p, x in images[a].items():
                    for q, y in images[b].items():
                        accumulate(lhs, (p, q), c * x * y)
            rhs: dict = {}
            for r, x in images[i].items():
                for key, c in R2.comult(r):
                    accumulate(rhs, key, x * c)
            if lhs != rhs:
                labels = [R2.labels, R2.labels]
                return Witness(at=[R.labels[i]],
                               lhs=format_vector(lhs, labels, field),
                               rhs=format_vector(rhs, labels, field))
            counit = sum((R2.eps(r) * x for r, x in images[i].items()),
                         field.zero)
            if counit != R.eps(i):
                return Witness(at=[R.labels[i]], message='ε(f(r)) ≠ ε(r)')
        return None

    return CheckSuite(f'{R!r} ≅ {R2!r}', [
        ('Yetter-Drinfeld morphism', yd_morphism),
        ('invertible', invertible),
        ('algebra map', multiplicative),
        ('coalgebra map', comultiplicative)]).run()


def check_splitting(p: ProjectionData, s: Splitting) -> Report:
    """
    ``r⊗h ↦ rσ(h)`` is an isomorphism of dual quasi-bialgebras
    ``R#H → A`` with the stated inverse.
    """
    B = bosonize(p.H, s.R).B

    def morphism(f: DQBMorphism):
        def check():
            failure = check_dqb_morphism(f).first_failure
            return None if failure is None else failure.witness
        return check

    def inverse_pair():
        forward = compose(s.iso, s.iso_inverse)
        backward = compose(s.iso_inverse, s.iso)
        if is_identity(forward) and is_identity(backward):
            return None
        return Witness(message='the splitting maps are not mutually '
                               'inverse')

    return CheckSuite(f'splitting of {p.A!r}', [
        ('inverse pair', inverse_pair),
        ('R#H → A is a morphism',
         morphism(DQBMorphism(B, p.A, s.iso, name='ε_A'))),
        ('A → R#H is a morphism',
         morphism(DQBMorphism(p.A, B, s.iso_inverse, name='ε_A⁻¹')))]).run()


def omega_pulls_back(b: Bosonization) -> bool:
    """``ω_H∘(π⊗π⊗π) = ω_B``."""
    B, H = b.B, b.H
    for index in product(range(B.dim), repeat=3):
        value = H.w_vec(*(b.pi.image(i) for i in index))
        if value != B.w(*index):
            return False
    return True


def pi_is_algebra_map(b: Bosonization) -> bool:
    """``π m_B = m_H(π⊗π)`` and ``π(1) = 1``."""
    B, H = b.B, b.H
    for i, j in product(range(B.dim), repeat=2):
        if b.pi(B.mul_basis(i, j)) != H.mul(b.pi.image(i), b.pi.image(j)):
            return False
    return b.pi(B.one) == H.one
