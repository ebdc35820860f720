import logging
from itertools import product
from typing import Any, Callable, Sequence

from pydantic import field_validator, model_validator
from sympy.polys.matrices import DomainMatrix

from dqb_workbench.base import (BaseChecker, CheckSuite, FieldError,
                                NotInvertible, PreconditionError,
                                ShapeError)
from dqb_workbench.coalgebra import (Coalgebra, CoalgebraChecker, Functional,
                                     convolution_inverse, convolve,
                                     counit_power, is_subcoalgebra,
                                     representative_label, verify_grouplike)
from dqb_workbench.exact import (Field, Scalar, SparseTensor, Subspace, Vec,
                                 accumulate, columns_of, from_columns,
                                 identity)
from dqb_workbench.schemas import Model, Report, Witness
from dqb_workbench.utils import dedupe_labels

logger = logging.getLogger(__name__)


class DualQuasiBialgebra(Coalgebra):
    """
    A coalgebra with a multiplication, a unit and a reassociator ω.

    ``mult[i, j, k]`` is the coefficient of ``e_k`` in ``e_i·e_j``. The
    convolution inverse of ω is computed on construction.
    """

    def __init__(self,
                 field: Field,
                 labels: Sequence[str],
                 delta: SparseTensor | dict,
                 counit: Vec | Sequence[Scalar],
                 mult: SparseTensor | dict,
                 unit: Vec,
                 omega: SparseTensor | dict | None = None):
        super().__init__(field, labels, delta, counit)
        n = self.dim
        if not isinstance(mult, SparseTensor):
            mult = SparseTensor((n, n, n), mult, field)
        if mult.shape != (n, n, n):
            raise ShapeError(
                f'Multiplication of shape {mult.shape} for dimension {n}.')
        self.mult = mult
        self.unit = {i: field(v) for i, v in unit.items() if v}

        self._mul: dict[tuple[int, int], Vec] = {}
        for (i, j, k), value in mult.items():
            self._mul.setdefault((i, j), {})[k] = value

        if omega is None:
            self.omega = counit_power(self, 3)
        elif isinstance(omega, Functional):
            self.omega = omega
        else:
            self.omega = Functional(self, omega, arity=3)
        if self.omega.arity != 3:
            raise ShapeError(f'Reassociator of arity {self.omega.arity}.')

        self.omega_inv = convolution_inverse(self.omega)
        if self.omega_inv is None:
            self.logger.error(f'Reassociator of {self!r} is not '
                              f'convolution invertible.')
            raise NotInvertible('the reassociator has no convolution '
                                'inverse')
        self._trivial = None

    @property
    def one(self) -> Vec:
        return dict(self.unit)

    @property
    def has_trivial_omega(self) -> bool:
        if self._trivial is None:
            self._trivial = self.omega == counit_power(self, 3)
        return self._trivial

    def mul_basis(self, i: int, j: int) -> Vec:
        return self._mul.get((i, j), {})

    def mul(self, a: Vec, b: Vec) -> Vec:
        out: Vec = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, z in self._mul.get((i, j), {}).items():
                    accumulate(out, k, x * y * z)
        return out

    def w(self, i: int, j: int, k: int) -> Scalar:
        return self.omega.values[(i, j, k)]

    def w_inv(self, i: int, j: int, k: int) -> Scalar:
        return self.omega_inv.values[(i, j, k)]

    def w_vec(self, a: Vec, b: Vec, c: Vec, inverse: bool = False) -> Scalar:
        f = self.omega_inv if inverse else self.omega
        return f.evaluate(a, b, c)


def _scalar_witness(H: Coalgebra, index: Sequence[int], lhs: Scalar,
                    rhs: Scalar, message: str | None = None) -> Witness:
    return Witness(at=[H.labels[i] for i in index],
                   lhs=H.field.format(lhs), rhs=H.field.format(rhs),
                   message=message)


def _vector_witness(H: Coalgebra, index: Sequence[int], lhs: dict,
                    rhs: dict, message: str | None = None) -> Witness:
    return Witness(at=[H.labels[i] for i in index],
                   lhs=H.format(lhs), rhs=H.format(rhs), message=message)


class DQBChecker(CoalgebraChecker):
    """
    The full axiom suite of a dual quasi-bialgebra.

    Every axiom is evaluated on all basis tuples.
    """

    def __init__(self, H: DualQuasiBialgebra, name: str | None = None):
        super().__init__(H, name)
        self.H = H

    def checks(self):
        yield from super().checks()
        yield 'multiplication comultiplicative', self._mult_comultiplicative
        yield 'multiplication counital', self._mult_counital
        yield 'unit grouplike', self._unit_grouplike
        yield 'left unit', lambda: self._unitality(left=True)
        yield 'right unit', lambda: self._unitality(left=False)
        yield '3-cocycle', self._cocycle
        yield 'reassociator unital', self._omega_unital
        yield 'quasi-associativity', self._quasi_associativity
        yield 'reassociator inverse', self._omega_inverse

    def _mult_comultiplicative(self) -> Witness | None:
        H = self.H
        for i, j in product(range(H.dim), repeat=2):
            lhs = H.delta_vec(H.mul_basis(i, j))
            rhs: dict = {}
            for (a, b), c in H.comult(i):
                for (x, y), d in H.comult(j):
                    for p, e in H.mul_basis(a, x).items():
                        for q, f in H.mul_basis(b, y).items():
                            accumulate(rhs, (p, q), c * d * e * f)
            if lhs != rhs:
                return _vector_witness(H, (i, j), lhs, rhs,
                                       'Δ(hl) ≠ h₁l₁⊗h₂l₂')
        return None

    def _mult_counital(self) -> Witness | None:
        H = self.H
        for i, j in product(range(H.dim), repeat=2):
            lhs = H.counit_of(H.mul_basis(i, j))
            rhs = H.eps(i) * H.eps(j)
            if lhs != rhs:
                return _scalar_witness(H, (i, j), lhs, rhs)
        return None

    def _unit_grouplike(self) -> Witness | None:
        H = self.H
        if verify_grouplike(H, H.one):
            return None
        return Witness(at=[H.format(H.one)], lhs=H.format(H.delta_vec(H.one)),
                       message='1_H is not grouplike')

    def _unitality(self, left: bool) -> Witness | None:
        H = self.H
        for i in range(H.dim):
            e = {i: H.field.one}
            image = H.mul(H.one, e) if left else H.mul(e, H.one)
            if image != e:
                return _vector_witness(H, (i,), image, e)
        return None

    def _cocycle(self) -> Witness | None:
        H = self.H
        n = H.dim
        for h, k, l, m in product(range(n), repeat=4):
            lhs = H.field.zero
            for (h1, h2), a in H.comult(h):
                for (k1, k2), b in H.comult(k):
                    hk = H.mul_basis(h2, k2)
                    for (l1, l2), c in H.comult(l):
                        for (m1, m2), d in H.comult(m):
                            lm = H.mul_basis(l1, m1)
                            first = sum((v * H.w(h1, k1, p)
                                         for p, v in lm.items()),
                                        H.field.zero)
                            if not first:
                                continue
                            second = sum((v * H.w(p, l2, m2)
                                          for p, v in hk.items()),
                                         H.field.zero)
                            lhs += a * b * c * d * first * second
            rhs = H.field.zero
            for (h1, h2), a in H.comult(h):
                for (k1, k2, k3), b in H.delta_n(k, 3):
                    third_k = H.field.zero
                    for (l1, l2, l3), c in H.delta_n(l, 3):
                        kl = H.mul_basis(k2, l2)
                        for (m1, m2), d in H.comult(m):
                            first = H.w(k1, l1, m1)
                            if not first:
                                continue
                            second = sum((v * H.w(h1, p, m2)
                                          for p, v in kl.items()),
                                         H.field.zero)
                            third = H.w(h2, k3, l3)
                            third_k += c * d * first * second * third
                    rhs += a * b * third_k
            if lhs != rhs:
                return _scalar_witness(
                    H, (h, k, l, m), lhs, rhs,
                    'ω(h₁,k₁,l₁m₁)ω(h₂k₂,l₂,m₂) ≠ '
                    'ω(k₁,l₁,m₁)ω(h₁,k₂l₂,m₂)ω(h₂,k₃,l₃)')
        return None

    def _omega_unital(self) -> Witness | None:
        H = self.H
        n = H.dim
        one = H.one
        for a, b in product(range(n), repeat=2):
            ea, eb = {a: H.field.one}, {b: H.field.one}
            expected = H.eps(a) * H.eps(b)
            for slots in ((one, ea, eb), (ea, one, eb), (ea, eb, one)):
                value = H.w_vec(*slots)
                if value != expected:
                    return Witness(
                        at=[H.format(s) for s in slots],
                        lhs=H.field.format(value),
                        rhs=H.field.format(expected),
                        message='ω is not unital')
        return None

    def _quasi_associativity(self) -> Witness | None:
        H = self.H
        n = H.dim
        for h, k, l in product(range(n), repeat=3):
            lhs: Vec = {}
            rhs: Vec = {}
            for (h1, h2), a in H.comult(h):
                for (k1, k2), b in H.comult(k):
                    for (l1, l2), c in H.comult(l):
                        coefficient = a * b * c
                        w = H.w(h2, k2, l2)
                        if w:
                            inner = H.mul({h1: H.field.one},
                                          H.mul_basis(k1, l1))
                            for p, v in inner.items():
                                accumulate(lhs, p, coefficient * w * v)
                        w = H.w(h1, k1, l1)
                        if w:
                            outer = H.mul(H.mul_basis(h2, k2),
                                          {l2: H.field.one})
                            for p, v in outer.items():
                                accumulate(rhs, p, coefficient * w * v)
            if lhs != rhs:
                return _vector_witness(H, (h, k, l), lhs, rhs,
                                       'h₁(k₁l₁)ω(h₂,k₂,l₂) ≠ '
                                       'ω(h₁,k₁,l₁)(h₂k₂)l₂')
        return None

    def _omega_inverse(self) -> Witness | None:
        H = self.H
        unit = counit_power(H, 3)
        for f in (convolve(H.omega, H.omega_inv),
                  convolve(H.omega_inv, H.omega)):
            if f != unit:
                for index in product(range(H.dim), repeat=3):
                    if f.values[index] != unit.values[index]:
                        return _scalar_witness(H, index, f.values[index],
                                               unit.values[index])
        return None


def check_dqb(H: DualQuasiBialgebra, name: str | None = None) -> Report:
    return DQBChecker(H, name).run()


def _associativity(H: DualQuasiBialgebra) -> Witness | None:
    for i, j, k in product(range(H.dim), repeat=3):
        lhs = H.mul(H.mul_basis(i, j), {k: H.field.one})
        rhs = H.mul({i: H.field.one}, H.mul_basis(j, k))
        if lhs != rhs:
            return _vector_witness(H, (i, j, k), lhs, rhs, '(hk)l ≠ h(kl)')
    return None


def check_associative(H: DualQuasiBialgebra,
                      name: str | None = None) -> Report:
    """
    Plain associativity of the multiplication on basis triples.
    """
    return CheckSuite(name or repr(H),
                      [('associativity', lambda: _associativity(H))]).run()


def is_cocommutative(H: Coalgebra) -> bool:
    swapped = {(i, k, j): v for (i, j, k), v in H.delta.items()}
    return H.delta.to_dict() == swapped


class DQBMorphism:
    """
    A linear map between dual quasi-bialgebras, column j the image of e_j.
    """

    def __init__(self, source: DualQuasiBialgebra,
                 target: DualQuasiBialgebra, matrix: DomainMatrix,
                 name: str | None = None):
        if matrix.shape != (target.dim, source.dim):
            raise ShapeError(f'Map of shape {matrix.shape} from dimension '
                             f'{source.dim} to {target.dim}.')
        self.source = source
        self.target = target
        self.matrix = matrix
        self.name = name
        self._columns = columns_of(matrix)

    def __repr__(self):
        return (f'DQBMorphism({self.name or "f"}: {self.source.dim} → '
                f'{self.target.dim})')

    def __call__(self, vec: Vec) -> Vec:
        out: Vec = {}
        for i, c in vec.items():
            for j, v in self._columns[i].items():
                accumulate(out, j, c * v)
        return out

    def image(self, i: int) -> Vec:
        return self._columns[i]

    @classmethod
    def identity(cls, H: DualQuasiBialgebra) -> 'DQBMorphism':
        return cls(H, H, identity(H.dim, H.field), name='id')


class DQBMorphismChecker(BaseChecker):

    def __init__(self, f: DQBMorphism):
        self.logger = logging.getLogger(__name__)
        self.f = f

    @property
    def subject(self) -> str:
        return repr(self.f)

    def checks(self):
        yield 'comultiplicative', self._comultiplicative
        yield 'counital', self._counital
        yield 'multiplicative', self._multiplicative
        yield 'unital', self._unital
        yield 'reassociator', self._reassociator

    def _comultiplicative(self) -> Witness | None:
        f, A, B = self.f, self.f.source, self.f.target
        for i in range(A.dim):
            lhs = B.delta_vec(f.image(i))
            rhs: dict = {}
            for (a, b), c in A.comult(i):
                for p, x in f.image(a).items():
                    for q, y in f.image(b).items():
                        accumulate(rhs, (p, q), c * x * y)
            if lhs != rhs:
                return Witness(at=[A.labels[i]], lhs=B.format(lhs),
                               rhs=B.format(rhs), message="Δ'f ≠ (f⊗f)Δ")
        return None

    def _counital(self) -> Witness | None:
        f, A, B = self.f, self.f.source, self.f.target
        for i in range(A.dim):
            lhs = B.counit_of(f.image(i))
            if lhs != A.eps(i):
                return Witness(at=[A.labels[i]], lhs=B.field.format(lhs),
                               rhs=A.field.format(A.eps(i)))
        return None

    def _multiplicative(self) -> Witness | None:
        f, A, B = self.f, self.f.source, self.f.target
        for i, j in product(range(A.dim), repeat=2):
            lhs = f(A.mul_basis(i, j))
            rhs = B.mul(f.image(i), f.image(j))
            if lhs != rhs:
                return Witness(at=[A.labels[i], A.labels[j]],
                               lhs=B.format(lhs), rhs=B.format(rhs),
                               message="f(hl) ≠ f(h)f(l)")
        return None

    def _unital(self) -> Witness | None:
        f, A, B = self.f, self.f.source, self.f.target
        lhs = f(A.one)
        if lhs != B.one:
            return Witness(at=['1'], lhs=B.format(lhs), rhs=B.format(B.one))
        return None

    def _reassociator(self) -> Witness | None:
        f, A, B = self.f, self.f.source, self.f.target
        for index in product(range(A.dim), repeat=3):
            lhs = B.w_vec(*(f.image(i) for i in index))
            rhs = A.w(*index)
            if lhs != rhs:
                return _scalar_witness(A, index, lhs, rhs,
                                       "ω'(f⊗f⊗f) ≠ ω")
        return None


def check_dqb_morphism(f: DQBMorphism) -> Report:
    return DQBMorphismChecker(f).run()


# -- group cocycles -----------------------------------------------------------

class GroupCocycleData(Model):
    """
    A finite monoid by its multiplication table and a 3-cochain θ.

    Entries of θ that are not listed are 1.
    """
    labels: list[str]
    mul_table: list[list[int]]
    theta: dict[tuple[int, int, int], Any] = {}
    field: Field = Field()

    @field_validator('mul_table', mode='after')
    @classmethod
    def validate_table(cls, value: list[list[int]]):
        n = len(value)
        for row in value:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise ValueError('Multiplication table must be a square '
                                 'table of element indices.')
        for a, b, c in product(range(n), repeat=3):
            if value[value[a][b]][c] != value[a][value[b][c]]:
                raise ValueError(f'Multiplication table is not associative '
                                 f'at {(a, b, c)}.')
        if not any(all(value[e][x] == x == value[x][e] for x in range(n))
                   for e in range(n)):
            raise ValueError('Multiplication table has no unit.')
        return value

    @model_validator(mode='after')
    def validate_theta(self):
        n = len(self.mul_table)
        if len(self.labels) != n:
            raise ValueError(f'{len(self.labels)} labels for a table of '
                             f'order {n}.')
        clean = {}
        for key, value in self.theta.items():
            if any(not 0 <= i < n for i in key):
                raise ValueError(f'θ index {key} outside the table.')
            value = self.field(value)
            if not value:
                raise ValueError(f'θ{key} must be nonzero.')
            if value != self.field.one:
                clean[tuple(key)] = value
        self.theta = clean
        return self

    @property
    def order(self) -> int:
        return len(self.mul_table)

    @property
    def unit(self) -> int:
        return next(e for e in range(self.order)
                    if all(self.mul_table[e][x] == x == self.mul_table[x][e]
                           for x in range(self.order)))

    @property
    def inv_table(self) -> list[int | None]:
        e = self.unit
        result = []
        for g in range(self.order):
            result.append(next(
                (h for h in range(self.order)
                 if self.mul_table[g][h] == e == self.mul_table[h][g]),
                None))
        return result

    @property
    def is_group(self) -> bool:
        return None not in self.inv_table

    def theta_of(self, a: int, b: int, c: int) -> Scalar:
        return self.theta.get((a, b, c), self.field.one)

    @classmethod
    def product(cls, orders: Sequence[int],
                theta_fn: Callable[..., Any] | None = None,
                field: Field | None = None,
                letters: str = 'abcdefgh') -> 'GroupCocycleData':
        """
        A product of cyclic groups with θ given on exponent vectors.

        Args:
            orders:   Orders of the cyclic factors.
            theta_fn: ``theta_fn(u, v, w)`` on exponent tuples, 1 if None.
            field:    Ground field, the rationals by default.
            letters:  Generator names, one per factor.

        Returns:
            The group with labels such as ``1, a, b, ab``.
        """
        field = field or Field()
        elements = [tuple(reversed(e)) for e in
                    product(*(range(m) for m in reversed(orders)))]
        position = {e: i for i, e in enumerate(elements)}

        def label(e):
            parts = []
            for letter, k in zip(letters, e):
                if k == 1:
                    parts.append(letter)
                elif k > 1:
                    parts.append(f'{letter}^{k}')
            return ''.join(parts) or '1'

        table = [[position[tuple((x + y) % m for x, y, m in
                                 zip(u, v, orders))]
                  for v in elements] for u in elements]
        theta = {}
        if theta_fn is not None:
            for (i, u), (j, v), (k, w) in product(enumerate(elements),
                                                  repeat=3):
                theta[(i, j, k)] = field(theta_fn(u, v, w))
        return cls(labels=[label(e) for e in elements], mul_table=table,
                   theta=theta, field=field)

    @classmethod
    def cyclic(cls, n: int, theta_fn: Callable[[int, int, int], Any] = None,
               field: Field | None = None,
               letter: str = 'a') -> 'GroupCocycleData':
        wrapped = None
        if theta_fn is not None:
            def wrapped(u, v, w):
                return theta_fn(u[0], v[0], w[0])
        return cls.product([n], wrapped, field, letter)


def standard_cyclic(n: int, field: Field, zeta: Scalar | None = None,
                    letter: str = 'a') -> GroupCocycleData:
    """
    Z_n with ``θ(a,b,c) = ζ^{a·⌊(b+c)/n⌋}`` for an n-th root of unity ζ.

    Without an explicit ζ a primitive n-th root of unity of the field is
    used; fields without one are rejected.
    """
    if zeta is None:
        zeta = field.root_of_unity(n)
        if zeta is None:
            raise FieldError(f'{field.name} has no primitive {n}-th root '
                             f'of unity.')
    else:
        zeta = field(zeta)
        if zeta ** n != field.one:
            raise FieldError(f'{field.format(zeta)} is not an {n}-th root '
                             f'of unity in {field.name}.')
    return GroupCocycleData.cyclic(
        n, lambda a, b, c: zeta ** (a * ((b + c) // n)), field, letter)


class GroupCocycleChecker(BaseChecker):

    def __init__(self, d: GroupCocycleData):
        self.logger = logging.getLogger(__name__)
        self.d = d

    @property
    def subject(self) -> str:
        return f'GroupCocycleData(order={self.d.order})'

    def checks(self):
        yield 'normalized', self._normalized
        yield 'cocycle identity', self._cocycle

    def _normalized(self) -> Witness | None:
        d = self.d
        e = d.unit
        for a, b in product(range(d.order), repeat=2):
            for index in ((e, a, b), (a, e, b), (a, b, e)):
                value = d.theta_of(*index)
                if value != d.field.one:
                    return Witness(at=[d.labels[i] for i in index],
                                   lhs=d.field.format(value), rhs='1')
        return None

    def _cocycle(self) -> Witness | None:
        d = self.d
        m, t = d.mul_table, d.theta_of
        for g, h, k, l in product(range(d.order), repeat=4):
            lhs = t(h, k, l) * t(g, m[h][k], l) * t(g, h, k)
            rhs = t(g, h, m[k][l]) * t(m[g][h], k, l)
            if lhs != rhs:
                return Witness(at=[d.labels[i] for i in (g, h, k, l)],
                               lhs=d.field.format(lhs),
                               rhs=d.field.format(rhs),
                               message='θ(h,k,l)θ(g,hk,l)θ(g,h,k) ≠ '
                                       'θ(g,h,kl)θ(gh,k,l)')
        return None


def check_group_cocycle(d: GroupCocycleData) -> Report:
    return GroupCocycleChecker(d).run()


def coboundary(d: GroupCocycleData,
               f: dict[tuple[int, int], Any]) -> GroupCocycleData:
    """
    Multiply θ by the coboundary of a normalized 2-cochain f.

    ``δf(g,h,k) = f(h,k)f(gh,k)⁻¹f(g,hk)f(g,h)⁻¹``; unlisted values of f
    are 1.
    """
    field = d.field
    e = d.unit
    values = {key: field(v) for key, v in f.items()}
    for (a, b), v in values.items():
        if not v:
            raise FieldError(f'Cochain value at {(a, b)} is zero.')
        if e in (a, b) and v != field.one:
            raise PreconditionError(f'Cochain is not normalized at '
                                    f'{(d.labels[a], d.labels[b])}.')

    def F(a, b):
        return values.get((a, b), field.one)

    m = d.mul_table
    theta = {}
    for g, h, k in product(range(d.order), repeat=3):
        delta = F(h, k) * F(g, m[h][k]) / (F(m[g][h], k) * F(g, h))
        theta[(g, h, k)] = d.theta_of(g, h, k) * delta
    return GroupCocycleData(labels=d.labels, mul_table=d.mul_table,
                            theta=theta, field=field)


def from_group_cocycle(d: GroupCocycleData) -> DualQuasiBialgebra:
    """
    The dual quasi-bialgebra k^θG of a monoid with a 3-cocycle.

    Raises:
        PreconditionError: θ is not a normalized 3-cocycle.
    """
    report = check_group_cocycle(d)
    if not report.passed:
        logger.error(f'Rejected cocycle data: '
                     f'{[r.name for r in report.failed]}')
        raise PreconditionError('θ is not a normalized 3-cocycle', report)
    n = d.order
    delta = {(g, g, g): 1 for g in range(n)}
    mult = {(g, h, d.mul_table[g][h]): 1 for g, h in product(range(n),
                                                             repeat=2)}
    omega = {(a, b, c): d.theta_of(a, b, c)
             for a, b, c in product(range(n), repeat=3)}
    return DualQuasiBialgebra(d.field, d.labels, delta, [1] * n, mult,
                              {d.unit: 1}, omega)


def grouplikes_form_group(H: DualQuasiBialgebra,
                          grouplikes: Sequence[Vec]) -> bool:
    """
    Whether a set of grouplikes is closed under products and inverses.
    """
    keys = [tuple(sorted(g.items())) for g in grouplikes]
    members = set(keys)
    if tuple(sorted(H.one.items())) not in members:
        logger.debug('The unit is not among the grouplikes.')
        return False
    for a in grouplikes:
        for b in grouplikes:
            if tuple(sorted(H.mul(a, b).items())) not in members:
                logger.debug(f'{H.format(a)}·{H.format(b)} leaves the set.')
                return False
    for a in grouplikes:
        if not any(H.mul(a, b) == H.one == H.mul(b, a) for b in grouplikes):
            logger.debug(f'{H.format(a)} has no inverse in the set.')
            return False
    return True


def subbialgebra(A: DualQuasiBialgebra, vectors: Sequence[Vec]
                 ) -> tuple[DualQuasiBialgebra, DQBMorphism]:
    """
    The dual quasi-subbialgebra spanned by some vectors.

    The basis is the echelon basis of the span. Raises PreconditionError
    if the span is not closed under Δ, the multiplication or the unit.

    Returns:
        The subalgebra and its inclusion into A.
    """
    D = Subspace(vectors, A.dim, A.field)
    if not is_subcoalgebra(A, D):
        raise PreconditionError('The span is not a subcoalgebra.')
    if not D.contains(A.one):
        raise PreconditionError('The span does not contain 1.')
    n = D.dim
    delta, mult = {}, {}
    for p, b in enumerate(D.basis):
        # coordinates of Δ(b) in D⊗D sit at pairs of pivots
        for (x, y), c in A.delta_vec(b).items():
            if x in D.pivots and y in D.pivots:
                delta[(p, D.pivots.index(x), D.pivots.index(y))] = c
        for q, b2 in enumerate(D.basis):
            product_ = A.mul(b, b2)
            if not D.contains(product_):
                raise PreconditionError(
                    f'The span is not closed under multiplication: '
                    f'{A.format(b)}·{A.format(b2)} = {A.format(product_)}.')
            for r, c in D.coordinates(product_).items():
                mult[(p, q, r)] = c
    counit = {p: A.counit_of(b) for p, b in enumerate(D.basis)}
    omega = {}
    for index in product(range(n), repeat=3):
        value = A.w_vec(*(D.basis[i] for i in index))
        if value:
            omega[index] = value
    labels = dedupe_labels([representative_label(A, b) for b in D.basis])
    sub = DualQuasiBialgebra(A.field, labels, delta, counit, mult,
                             D.coordinates(A.one), omega)
    inclusion = DQBMorphism(sub, A, from_columns(D.basis, A.dim, A.field),
                            name='inclusion')
    return sub, inclusion
