"""
Preantipodes: verification, the linear solver and the passage to
(quasi-)Hopf data in the cocommutative case.

A preantipode is an endomorphism ``S`` of a dual quasi-bialgebra with

* ``S(h₁)₁h₂ ⊗ S(h₁)₂ = 1 ⊗ S(h)``
* ``S(h₂)₁ ⊗ h₁S(h₂)₂ = S(h) ⊗ 1``
* ``ω(h₁, S(h₂), h₃) = ε(h)``

All three conditions are linear in ``S``, so existence is decided by a
single exact solve.
"""
import logging

from sympy.polys.matrices import DomainMatrix

from dqb_workbench.base import (BaseChecker, PreconditionError, ShapeError,
                                WorkbenchError)
from dqb_workbench.coalgebra import Functional
from dqb_workbench.dqb import DualQuasiBialgebra, is_cocommutative
from dqb_workbench.exact import (Scalar, Vec, accumulate, columns_of,
                                 from_columns, solve_sparse)
from dqb_workbench.schemas import Model, Report, Witness

logger = logging.getLogger(__name__)


def _check_shape(H: DualQuasiBialgebra, M: DomainMatrix, name: str):
    if M.shape != (H.dim, H.dim):
        raise ShapeError(f'{name} of shape {M.shape} on a dual '
                         f'quasi-bialgebra of dimension {H.dim}.')


class PreantipodeChecker(BaseChecker):

    def __init__(self, H: DualQuasiBialgebra, S: DomainMatrix):
        self.logger = logging.getLogger(__name__)
        _check_shape(H, S, 'Preantipode')
        self.H = H
        self.S = S
        self.columns = columns_of(S)

    @property
    def subject(self) -> str:
        return f'preantipode of {self.H!r}'

    def checks(self):
        yield 'left coaction identity', self._left
        yield 'right coaction identity', self._right
        yield 'reassociator identity', self._fundamental

    def _left(self) -> Witness | None:
        H, S = self.H, self.columns
        for h in range(H.dim):
            lhs: dict = {}
            for (h1, h2), c in H.comult(h):
                for a, s in S[h1].items():
                    for (a1, a2), d in H.comult(a):
                        for p, z in H.mul_basis(a1, h2).items():
                            accumulate(lhs, (p, a2), c * s * d * z)
            rhs = {(p, a): z * s for p, z in H.one.items()
                   for a, s in S[h].items()}
            if lhs != rhs:
                return Witness(at=[H.labels[h]], lhs=H.format(lhs),
                               rhs=H.format(rhs),
                               message='S(h₁)₁h₂ ⊗ S(h₁)₂ ≠ 1 ⊗ S(h)')
        return None

    def _right(self) -> Witness | None:
        H, S = self.H, self.columns
        for h in range(H.dim):
            lhs: dict = {}
            for (h1, h2), c in H.comult(h):
                for a, s in S[h2].items():
                    for (a1, a2), d in H.comult(a):
                        for q, z in H.mul_basis(h1, a2).items():
                            accumulate(lhs, (a1, q), c * s * d * z)
            rhs = {(a, q): s * z for a, s in S[h].items()
                   for q, z in H.one.items()}
            if lhs != rhs:
                return Witness(at=[H.labels[h]], lhs=H.format(lhs),
                               rhs=H.format(rhs),
                               message='S(h₂)₁ ⊗ h₁S(h₂)₂ ≠ S(h) ⊗ 1')
        return None

    def _fundamental(self) -> Witness | None:
        H, S = self.H, self.columns
        for h in range(H.dim):
            value = H.field.zero
            for (h1, h2, h3), c in H.delta_n(h, 3):
                for a, s in S[h2].items():
                    value += c * s * H.w(h1, a, h3)
            if value != H.eps(h):
                return Witness(at=[H.labels[h]],
                               lhs=H.field.format(value),
                               rhs=H.field.format(H.eps(h)),
                               message='ω(h₁,S(h₂),h₃) ≠ ε(h)')
        return None


def check_preantipode(H: DualQuasiBialgebra, S: DomainMatrix) -> Report:
    return PreantipodeChecker(H, S).run()


class PreantipodeSolution(Model):
    """
    A preantipode found by the solver.

    ``freedom`` is the dimension of the solution space of the homogeneous
    system; the representative has all free unknowns set to zero.
    """
    S: DomainMatrix
    freedom: int = 0

    @property
    def unique(self) -> bool:
        return self.freedom == 0


def preantipode_system(H: DualQuasiBialgebra
                       ) -> tuple[dict[int, dict[int, Scalar]], Vec]:
    """
    The three defining conditions as one sparse linear system.

    Unknown ``a*n + b`` is the coefficient of ``e_a`` in ``S(e_b)``. The
    rows are ``n³`` equations for each coaction identity followed by
    ``n`` equations for the reassociator identity.
    """
    n = H.dim
    rows: dict[int, dict[int, Scalar]] = {}

    def unknown(a, b):
        return a * n + b

    def row(r):
        return rows.setdefault(r, {})

    right_offset, scalar_offset = n ** 3, 2 * n ** 3
    for h in range(n):
        base = h * n * n
        for (h1, h2), c in H.comult(h):
            for a in range(n):
                for (a1, a2), d in H.comult(a):
                    for p, z in H.mul_basis(a1, h2).items():
                        accumulate(row(base + p * n + a2), unknown(a, h1),
                                   c * d * z)
                    for q, z in H.mul_basis(h1, a2).items():
                        accumulate(row(right_offset + base + a1 * n + q),
                                   unknown(a, h2), c * d * z)
        for a in range(n):
            for p, z in H.one.items():
                accumulate(row(base + p * n + a), unknown(a, h), -z)
                accumulate(row(right_offset + base + a * n + p),
                           unknown(a, h), -z)
        for (h1, h2, h3), c in H.delta_n(h, 3):
            for a in range(n):
                accumulate(row(scalar_offset + h), unknown(a, h2),
                           c * H.w(h1, a, h3))
    rhs = {scalar_offset + h: H.eps(h) for h in range(n) if H.eps(h)}
    return {r: v for r, v in rows.items() if v}, rhs


def solve_preantipode(H: DualQuasiBialgebra) -> PreantipodeSolution | None:
    """
    Find a preantipode by exact elimination.

    Returns:
        The solution with the dimension of the solution space, or None
        when the system is inconsistent.
    """
    n = H.dim
    rows, rhs = preantipode_system(H)
    logger.debug(f'Preantipode system: {2 * n ** 3 + n} equations, '
                 f'{n * n} unknowns, {sum(map(len, rows.values()))} '
                 f'nonzero coefficients.')
    solution, freedom = solve_sparse(rows, rhs, n * n, H.field)
    if solution is None:
        logger.debug(f'{H!r} has no preantipode.')
        return None
    columns = [{} for _ in range(n)]
    for index, value in solution.items():
        a, b = divmod(index, n)
        columns[b][a] = value
    S = from_columns(columns, n, H.field)
    report = check_preantipode(H, S)
    if not report.passed:
        logger.error(f'Solver output fails {report.first_failure.name}.')
        raise WorkbenchError('the preantipode solver returned a '
                             'non-solution')
    if freedom:
        logger.debug(f'Preantipode of {H!r} is not unique, the solution '
                    f'space has dimension {freedom}.')
    return PreantipodeSolution(S=S, freedom=freedom)


def group_preantipode(H: DualQuasiBialgebra) -> DomainMatrix:
    """
    ``S(g) = ω(g, g⁻¹, g)⁻¹ g⁻¹`` on a basis of grouplikes.

    Raises:
        PreconditionError: the basis is not a group of grouplikes.
    """
    if not H.is_grouplike_basis():
        raise PreconditionError('The basis does not consist of grouplikes.')
    columns = []
    for g in range(H.dim):
        inverse = None
        for h in range(H.dim):
            if H.mul_basis(g, h) == H.one == H.mul_basis(h, g):
                inverse = h
                break
        if inverse is None:
            raise PreconditionError(f'{H.labels[g]} has no inverse, the '
                                    f'grouplikes do not form a group.')
        columns.append({inverse: H.field.one / H.w(g, inverse, g)})
    return from_columns(columns, H.dim, H.field)


class DerivedIdentityChecker(BaseChecker):
    """
    Identities every preantipode satisfies.

    A failure here is a defect of the workbench, not of the input.
    """
    severity = 'internal'

    def __init__(self, H: DualQuasiBialgebra, S: DomainMatrix):
        self.logger = logging.getLogger(__name__)
        _check_shape(H, S, 'Preantipode')
        self.H = H
        self.S = S
        self.columns = columns_of(S)
        self._precondition: Report | None = None

    @property
    def subject(self) -> str:
        return f'preantipode identities of {self.H!r}'

    def checks(self):
        yield 'left product identity', lambda: self._product(left=True)
        yield 'right product identity', lambda: self._product(left=False)
        yield 'inverse reassociator identity', self._inverse_reassociator

    def _require(self):
        if self._precondition is None:
            self._precondition = check_preantipode(self.H, self.S)
        if not self._precondition.passed:
            raise PreconditionError(
                f'S is not a preantipode: '
                f'{self._precondition.first_failure.name} fails',
                self._precondition)

    def _eps_S(self, h: int) -> Scalar:
        return self.H.counit_of(self.columns[h])

    def _product(self, left: bool) -> Witness | None:
        self._require()
        H = self.H
        for h in range(H.dim):
            lhs: Vec = {}
            for (h1, h2), c in H.comult(h):
                if left:
                    term = H.mul({h1: H.field.one}, self.columns[h2])
                else:
                    term = H.mul(self.columns[h1], {h2: H.field.one})
                for p, v in term.items():
                    accumulate(lhs, p, c * v)
            rhs = {p: self._eps_S(h) * z for p, z in H.one.items()
                   if self._eps_S(h)}
            if lhs != rhs:
                return Witness(at=[H.labels[h]], lhs=H.format(lhs),
                               rhs=H.format(rhs))
        return None

    def _inverse_reassociator(self) -> Witness | None:
        self._require()
        H = self.H
        for h in range(H.dim):
            value = H.field.zero
            for (h1, h2, h3), c in H.delta_n(h, 3):
                value += c * H.w_vec(self.columns[h1], {h2: H.field.one},
                                     self.columns[h3], inverse=True)
            if value != self._eps_S(h):
                return Witness(at=[H.labels[h]],
                               lhs=H.field.format(value),
                               rhs=H.field.format(self._eps_S(h)),
                               message='ω⁻¹(S(h₁),h₂,S(h₃)) ≠ εS(h)')
        return None


def check_derived_identities(H: DualQuasiBialgebra,
                             S: DomainMatrix) -> Report:
    return DerivedIdentityChecker(H, S).run()


# -- quasi-Hopf data ----------------------------------------------------------

class QuasiHopfData(Model):
    """
    An antipode ``s`` with the two functionals α and β.
    """
    s: DomainMatrix
    alpha: Functional
    beta: Functional


def _functional(H: DualQuasiBialgebra, values: Vec) -> Functional:
    return Functional(H, {(i,): v for i, v in values.items()}, arity=1)


def counit_functional(H: DualQuasiBialgebra) -> Functional:
    return _functional(H, H.counit)


class QuasiHopfChecker(BaseChecker):

    def __init__(self, H: DualQuasiBialgebra, q: QuasiHopfData):
        self.logger = logging.getLogger(__name__)
        _check_shape(H, q.s, 'Antipode')
        if q.alpha.arity != 1 or q.beta.arity != 1:
            raise ShapeError('α and β must be linear functionals.')
        self.H = H
        self.q = q
        self.s = columns_of(q.s)

    @property
    def subject(self) -> str:
        return f'quasi-Hopf data on {self.H!r}'

    def checks(self):
        yield 'antipode anti-coalgebra map', self._anti_coalgebra
        yield 'beta identity', self._beta
        yield 'alpha identity', self._alpha
        yield 'reassociator identity', self._reassociator
        yield 'inverse reassociator identity', self._inverse_reassociator

    def _anti_coalgebra(self) -> Witness | None:
        H = self.H
        for h in range(H.dim):
            lhs = H.delta_vec(self.s[h])
            rhs: dict = {}
            for (h1, h2), c in H.comult(h):
                for p, x in self.s[h2].items():
                    for q, y in self.s[h1].items():
                        accumulate(rhs, (p, q), c * x * y)
            if lhs != rhs or H.counit_of(self.s[h]) != H.eps(h):
                return Witness(at=[H.labels[h]], lhs=H.format(lhs),
                               rhs=H.format(rhs),
                               message='Δs(h) ≠ s(h₂)⊗s(h₁) or εs ≠ ε')
        return None

    def _beta(self) -> Witness | None:
        H, beta = self.H, self.q.beta
        for h in range(H.dim):
            lhs: Vec = {}
            for (h1, h2, h3), c in H.delta_n(h, 3):
                b = beta(h2)
                if b:
                    for p, v in H.mul({h1: H.field.one},
                                      self.s[h3]).items():
                        accumulate(lhs, p, c * b * v)
            rhs = {p: beta(h) * z for p, z in H.one.items() if beta(h)}
            if lhs != rhs:
                return Witness(at=[H.labels[h]], lhs=H.format(lhs),
                               rhs=H.format(rhs),
                               message='h₁β(h₂)s(h₃) ≠ β(h)1')
        return None

    def _alpha(self) -> Witness | None:
        H, alpha = self.H, self.q.alpha
        for h in range(H.dim):
            lhs: Vec = {}
            for (h1, h2, h3), c in H.delta_n(h, 3):
                a = alpha(h2)
                if a:
                    for p, v in H.mul(self.s[h1],
                                      {h3: H.field.one}).items():
                        accumulate(lhs, p, c * a * v)
            rhs = {p: alpha(h) * z for p, z in H.one.items() if alpha(h)}
            if lhs != rhs:
                return Witness(at=[H.labels[h]], lhs=H.format(lhs),
                               rhs=H.format(rhs),
                               message='s(h₁)α(h₂)h₃ ≠ α(h)1')
        return None

    def _reassociator(self) -> Witness | None:
        H, alpha, beta = self.H, self.q.alpha, self.q.beta
        for h in range(H.dim):
            value = H.field.zero
            for (h1, h2, h3, h4, h5), c in H.delta_n(h, 5):
                scale = c * beta(h2) * alpha(h4)
                if scale:
                    value += scale * H.w_vec({h1: H.field.one}, self.s[h3],
                                             {h5: H.field.one})
            if value != H.eps(h):
                return Witness(at=[H.labels[h]],
                               lhs=H.field.format(value),
                               rhs=H.field.format(H.eps(h)),
                               message='ω(h₁,β(h₂)s(h₃)α(h₄),h₅) ≠ ε(h)')
        return None

    def _inverse_reassociator(self) -> Witness | None:
        H, alpha, beta = self.H, self.q.alpha, self.q.beta
        for h in range(H.dim):
            value = H.field.zero
            for (h1, h2, h3, h4, h5), c in H.delta_n(h, 5):
                scale = c * alpha(h2) * beta(h4)
                if scale:
                    value += scale * H.w_vec(self.s[h1], {h3: H.field.one},
                                             self.s[h5], inverse=True)
            if value != H.eps(h):
                return Witness(at=[H.labels[h]],
                               lhs=H.field.format(value),
                               rhs=H.field.format(H.eps(h)),
                               message='ω⁻¹(s(h₁),α(h₂)h₃β(h₄),s(h₅)) '
                                       '≠ ε(h)')
        return None


def check_quasi_hopf(H: DualQuasiBialgebra, q: QuasiHopfData) -> Report:
    return QuasiHopfChecker(H, q).run()


class AntipodeChecker(BaseChecker):

    def __init__(self, H: DualQuasiBialgebra, s: DomainMatrix):
        self.logger = logging.getLogger(__name__)
        _check_shape(H, s, 'Antipode')
        self.H = H
        self.s = columns_of(s)

    @property
    def subject(self) -> str:
        return f'antipode of {self.H!r}'

    def checks(self):
        yield 'left antipode', lambda: self._law(left=True)
        yield 'right antipode', lambda: self._law(left=False)

    def _law(self, left: bool) -> Witness | None:
        H = self.H
        for h in range(H.dim):
            lhs: Vec = {}
            for (h1, h2), c in H.comult(h):
                if left:
                    term = H.mul(self.s[h1], {h2: H.field.one})
                else:
                    term = H.mul({h1: H.field.one}, self.s[h2])
                for p, v in term.items():
                    accumulate(lhs, p, c * v)
            rhs = {p: H.eps(h) * z for p, z in H.one.items() if H.eps(h)}
            if lhs != rhs:
                return Witness(at=[H.labels[h]], lhs=H.format(lhs),
                               rhs=H.format(rhs))
        return None


def check_antipode(H: DualQuasiBialgebra, s: DomainMatrix) -> Report:
    """
    ``s(h₁)h₂ = ε(h)1 = h₁s(h₂)`` on every basis element.
    """
    return AntipodeChecker(H, s).run()


def cocommutative_to_hopf(H: DualQuasiBialgebra,
                          S: DomainMatrix) -> QuasiHopfData:
    """
    Quasi-Hopf data of a cocommutative dual quasi-bialgebra with a
    preantipode.

    ``s(h) = S(h₃)₁ ω(h₁, S(h₃)₂, h₂)``, ``α = ε`` and ``β = εS``.

    Raises:
        PreconditionError: H is not cocommutative or S is not a
            preantipode.
    """
    if not is_cocommutative(H):
        raise PreconditionError(f'{H!r} is not cocommutative.')
    report = check_preantipode(H, S)
    if not report.passed:
        raise PreconditionError('S is not a preantipode.', report)
    columns = columns_of(S)
    s_columns = []
    for h in range(H.dim):
        image: Vec = {}
        for (h1, h2, h3), c in H.delta_n(h, 3):
            for a, x in columns[h3].items():
                for (a1, a2), d in H.comult(a):
                    accumulate(image, a1, c * x * d * H.w(h1, a2, h2))
        s_columns.append(image)
    s = from_columns(s_columns, H.dim, H.field)
    beta = {h: H.counit_of(columns[h]) for h in range(H.dim)}
    logger.debug(f'Converted preantipode of {H!r} to quasi-Hopf data.')
    return QuasiHopfData(s=s, alpha=counit_functional(H),
                         beta=_functional(H, {h: v for h, v in beta.items()
                                              if v}))


def convolve_functional(H: DualQuasiBialgebra, f: Functional,
                        s: DomainMatrix) -> DomainMatrix:
    """
    The endomorphism ``h ↦ f(h₁)s(h₂)``.
    """
    columns = columns_of(s)
    result = []
    for h in range(H.dim):
        image: Vec = {}
        for (h1, h2), c in H.comult(h):
            x = f(h1)
            if x:
                for p, v in columns[h2].items():
                    accumulate(image, p, c * x * v)
        result.append(image)
    return from_columns(result, H.dim, H.field)

