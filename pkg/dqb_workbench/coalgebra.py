import logging
from itertools import product
from typing import Iterable, Literal, Sequence

from dqb_workbench.base import (BaseChecker, NotFound, PreconditionError,
                                ShapeError, WorkbenchError)
from dqb_workbench.exact import (Field, Quotient, Scalar, SparseTensor,
                                 Subspace, Vec, accumulate, from_columns,
                                 inverse, kernel_vectors, rows_of,
                                 solve_sparse)
from dqb_workbench.schemas import Model, Witness
from dqb_workbench.utils import dedupe_labels, format_vector

logger = logging.getLogger(__name__)

Terms = list[tuple[tuple[int, int], Scalar]]


class Coalgebra:
    """
    A finite dimensional coalgebra given by structure constants.

    ``delta[i, j, k]`` is the coefficient of ``e_j⊗e_k`` in ``Δ(e_i)``.
    """

    def __init__(self,
                 field: Field,
                 labels: Sequence[str],
                 delta: SparseTensor | dict,
                 counit: Vec | Sequence[Scalar]):
        self.logger = logging.getLogger(__name__)
        self.field = field
        self.labels = list(labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ShapeError(f'Duplicate basis labels in {self.labels}.')
        if not isinstance(delta, SparseTensor):
            delta = SparseTensor((n, n, n), delta, field)
        if delta.shape != (n, n, n):
            raise ShapeError(
                f'Comultiplication of shape {delta.shape} for dimension {n}.')
        if not isinstance(counit, dict):
            counit = {i: v for i, v in enumerate(counit)}
        if any(not 0 <= i < n for i in counit):
            raise ShapeError(f'Counit index outside dimension {n}.')
        self.delta = delta
        self.counit = {i: field(v) for i, v in counit.items() if v}

        self._comult: list[Terms] = [[] for _ in range(n)]
        for (i, j, k), value in delta.items():
            self._comult[i].append(((j, k), value))
        self._deltas: dict[tuple[int, int], list] = {}

    def __repr__(self):
        return (f'{type(self).__name__}(dim={self.dim}, '
                f'field={self.field.name})')

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise NotFound(f'No basis vector labelled "{label}".')

    def comult(self, i: int) -> Terms:
        return self._comult[i]

    def eps(self, i: int) -> Scalar:
        return self.counit.get(i, self.field.zero)

    def counit_of(self, vec: Vec) -> Scalar:
        total = self.field.zero
        for i, c in vec.items():
            total += c * self.eps(i)
        return total

    def delta_vec(self, vec: Vec) -> dict[tuple[int, int], Scalar]:
        out: dict[tuple[int, int], Scalar] = {}
        for i, c in vec.items():
            for key, value in self._comult[i]:
                accumulate(out, key, c * value)
        return out

    def delta_n(self, i: int, k: int) -> list[tuple[tuple[int, ...], Scalar]]:
        """
        Iterated comultiplication of ``e_i`` into ``k`` tensor factors.

        The result does not depend on the bracketing for a coassociative
        coalgebra; the last factor is split at every step.
        """
        key = (i, k)
        if key not in self._deltas:
            if k == 1:
                terms = [((i,), self.field.one)]
            else:
                expanded: dict[tuple[int, ...], Scalar] = {}
                for head, c in self.delta_n(i, k - 1):
                    for (a, b), d in self._comult[head[-1]]:
                        accumulate(expanded, head[:-1] + (a, b), c * d)
                terms = sorted(expanded.items())
            self._deltas[key] = terms
        return self._deltas[key]

    def delta_vec_n(self, vec: Vec, k: int) -> dict[tuple[int, ...], Scalar]:
        out: dict[tuple[int, ...], Scalar] = {}
        for i, c in vec.items():
            for key, value in self.delta_n(i, k):
                accumulate(out, key, c * value)
        return out

    def is_grouplike_basis(self) -> bool:
        return all(verify_grouplike(self, {i: self.field.one})
                   for i in range(self.dim))

    def format(self, vec: dict, labels: Sequence[Sequence[str]] | None = None
               ) -> str:
        return format_vector(vec, labels or self.labels, self.field)


class CoalgebraChecker(BaseChecker):
    """
    Coassociativity and the two counit laws on every basis vector.
    """

    def __init__(self, coalgebra: Coalgebra, name: str | None = None):
        self.logger = logging.getLogger(__name__)
        self.coalgebra = coalgebra
        self._name = name

    @property
    def subject(self) -> str:
        return self._name or repr(self.coalgebra)

    def checks(self):
        yield 'coassociativity', self._coassociativity
        yield 'left counit', lambda: self._counit(left=True)
        yield 'right counit', lambda: self._counit(left=False)

    def _coassociativity(self) -> Witness | None:
        C = self.coalgebra
        for i in range(C.dim):
            left: dict = {}
            right: dict = {}
            for (a, b), c in C.comult(i):
                for (x, y), d in C.comult(a):
                    accumulate(left, (x, y, b), c * d)
                for (x, y), d in C.comult(b):
                    accumulate(right, (a, x, y), c * d)
            if left != right:
                return Witness(at=[C.labels[i]],
                               lhs=C.format(left),
                               rhs=C.format(right),
                               message='(Δ⊗id)Δ ≠ (id⊗Δ)Δ')
        return None

    def _counit(self, left: bool) -> Witness | None:
        C = self.coalgebra
        for i in range(C.dim):
            image: Vec = {}
            for (a, b), c in C.comult(i):
                if left:
                    accumulate(image, b, c * C.eps(a))
                else:
                    accumulate(image, a, c * C.eps(b))
            if image != {i: C.field.one}:
                return Witness(at=[C.labels[i]],
                               lhs=C.format(image),
                               rhs=C.labels[i])
        return None


def check_coalgebra(C: Coalgebra, name: str | None = None):
    return CoalgebraChecker(C, name).run()


class Functional:
    """
    A multilinear functional ``C^{⊗r} → k`` stored on basis tuples.
    """

    def __init__(self, coalgebra: Coalgebra, values: SparseTensor | dict,
                 arity: int | None = None):
        if not isinstance(values, SparseTensor):
            if arity is None:
                raise ShapeError('The arity of a functional given as a '
                                 'dictionary must be stated.')
            values = SparseTensor((coalgebra.dim,) * arity, values,
                                  coalgebra.field)
        if values.ndim < 1 or set(values.shape) != {coalgebra.dim}:
            raise ShapeError(f'Functional of shape {values.shape} over a '
                             f'coalgebra of dimension {coalgebra.dim}.')
        self.coalgebra = coalgebra
        self.values = values

    def __repr__(self):
        return f'Functional(arity={self.arity}, nnz={self.values.nnz})'

    @property
    def arity(self) -> int:
        return self.values.ndim

    def __call__(self, *index: int) -> Scalar:
        return self.values[index]

    def evaluate(self, *vectors: Vec) -> Scalar:
        if len(vectors) != self.arity:
            raise ShapeError(f'{len(vectors)} arguments for a functional of '
                             f'arity {self.arity}.')
        total = self.coalgebra.field.zero
        for combination in product(*(v.items() for v in vectors)):
            coefficient = self.coalgebra.field.one
            for _, c in combination:
                coefficient *= c
            total += coefficient * self.values[
                tuple(i for i, _ in combination)]
        return total

    def __eq__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        return self.values == other.values

    def items(self):
        return self.values.items()


def counit_power(C: Coalgebra, r: int) -> Functional:
    """
    ``ε^{⊗r}``, the unit of the convolution algebra on ``C^{⊗r}``.
    """
    entries = {}
    for index in product(sorted(C.counit), repeat=r):
        value = C.field.one
        for i in index:
            value *= C.counit[i]
        entries[index] = value
    return Functional(C, SparseTensor((C.dim,) * r, entries, C.field))


def _split(C: Coalgebra, index: tuple[int, ...]):
    """
    Δ on ``C^{⊗r}``: pairs of basis tuples with their coefficient.
    """
    for combination in product(*(C.comult(i) for i in index)):
        coefficient = C.field.one
        for _, c in combination:
            coefficient *= c
        yield (tuple(a for (a, _), _ in combination),
               tuple(b for (_, b), _ in combination),
               coefficient)


def convolve(f: Functional, g: Functional) -> Functional:
    """
    Convolution product ``(f∗g)(x) = f(x₍₁₎)g(x₍₂₎)``.

    Args:
        f: Functional of arity r.
        g: Functional of arity r over the same coalgebra.

    Returns:
        The convolution product as a new Functional.
    """
    if f.arity != g.arity:
        raise ShapeError(f'Cannot convolve arities {f.arity} and {g.arity}.')
    if f.coalgebra is not g.coalgebra:
        raise ShapeError('Functionals live over different coalgebras.')
    C = f.coalgebra
    entries = {}
    for index in product(range(C.dim), repeat=f.arity):
        total = C.field.zero
        for left, right, c in _split(C, index):
            a = f.values[left]
            if a:
                b = g.values[right]
                if b:
                    total += c * a * b
        if total:
            entries[index] = total
    return Functional(C, SparseTensor(f.values.shape, entries, C.field))


def convolution_inverse(f: Functional) -> Functional | None:
    """
    Two-sided convolution inverse of f, or None if there is none.

    On a coalgebra whose basis consists of grouplikes convolution is
    pointwise; otherwise the inverse is found by one exact solve.
    """
    C = f.coalgebra
    unit = counit_power(C, f.arity)
    if C.is_grouplike_basis():
        entries = {}
        for index in product(range(C.dim), repeat=f.arity):
            value = f.values[index]
            if not value:
                logger.debug(f'Functional vanishes at {index}, no inverse.')
                return None
            entries[index] = C.field.one / value
        return Functional(C, SparseTensor(f.values.shape, entries, C.field))

    n, r = C.dim, f.arity

    def flat(index):
        out = 0
        for i in index:
            out = out * n + i
        return out

    rows: dict[int, dict[int, Scalar]] = {}
    for index in product(range(n), repeat=r):
        row: dict[int, Scalar] = {}
        for left, right, c in _split(C, index):
            a = f.values[left]
            if a:
                accumulate(row, flat(right), c * a)
        if row:
            rows[flat(index)] = row
    rhs = {flat(index): v for index, v in unit.items()}
    solution, freedom = solve_sparse(rows, rhs, n ** r, C.field)
    logger.debug(f'Convolution inverse system of size {n ** r}, '
                 f'freedom {freedom}.')
    if solution is None:
        return None

    entries = {}
    for index in product(range(n), repeat=r):
        value = solution.get(flat(index))
        if value:
            entries[index] = value
    g = Functional(C, SparseTensor(f.values.shape, entries, C.field))
    if convolve(g, f) != unit:
        return None
    return g


def verify_grouplike(C: Coalgebra, a: Vec) -> bool:
    if C.counit_of(a) != C.field.one:
        return False
    square = {(i, j): x * y for i, x in a.items() for j, y in a.items()}
    return C.delta_vec(a) == square


def find_basis_grouplikes(C: Coalgebra) -> list[Vec]:
    return [{i: C.field.one} for i in range(C.dim)
            if verify_grouplike(C, {i: C.field.one})]


def _tensor_span(left: Iterable[Vec], right: Iterable[Vec],
                 n: int) -> list[Vec]:
    right = list(right)
    vectors = []
    for u in left:
        for v in right:
            vectors.append({a * n + b: x * y
                            for a, x in u.items() for b, y in v.items()})
    return vectors


def _flat_delta(C: Coalgebra, vec: Vec) -> Vec:
    return {a * C.dim + b: c for (a, b), c in C.delta_vec(vec).items()}


def is_subcoalgebra(C: Coalgebra, D: Subspace | Iterable[Vec]) -> bool:
    """
    Whether Δ(D) ⊆ D⊗D.
    """
    if not isinstance(D, Subspace):
        D = Subspace(D, C.dim, C.field)
    square = Subspace(_tensor_span(D.basis, D.basis, C.dim),
                      C.dim ** 2, C.field)
    return all(square.contains(_flat_delta(C, b)) for b in D.basis)


class Filtration:
    """
    An ascending chain of subspaces ``A_0 ⊆ A_1 ⊆ ... ⊆ A_N``.
    """

    def __init__(self, layers: Sequence[Subspace]):
        if not layers:
            raise ShapeError('A filtration needs at least one layer.')
        self.layers = list(layers)
        self.ambient = self.layers[0].ambient
        self.field = self.layers[0].field
        self._degrees = None

    def __repr__(self):
        return f'Filtration(dims={self.dims})'

    def __len__(self):
        return len(self.layers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(layer.dim for layer in self.layers)

    @property
    def exhausts(self) -> bool:
        return self.layers[-1].dim == self.ambient

    def check(self, C: Coalgebra) -> Witness | None:
        """
        Nestedness and ``Δ(A_n) ⊆ Σ_{i+j=n} A_i⊗A_j`` on every layer.

        Returns:
            None when the filtration is a coalgebra filtration of C,
            otherwise a witness naming the layer and offending vector.
        """
        for n, (lower, upper) in enumerate(zip(self.layers,
                                               self.layers[1:])):
            for b in lower.basis:
                if not upper.contains(b):
                    return Witness(at=[f'A_{n}', C.format(b)],
                                   message=f'A_{n} is not inside A_{n + 1}')
        if not self.exhausts:
            return Witness(at=[f'A_{len(self) - 1}'],
                           message='the last layer is not the whole space')
        for n, layer in enumerate(self.layers):
            vectors = []
            for i in range(n + 1):
                vectors += _tensor_span(self.layers[i].basis,
                                        self.layers[n - i].basis, C.dim)
            target = Subspace(vectors, C.dim ** 2, C.field)
            for b in layer.basis:
                if not target.contains(_flat_delta(C, b)):
                    return Witness(
                        at=[f'A_{n}', C.format(b)],
                        lhs=C.format(C.delta_vec(b)),
                        message=f'Δ(A_{n}) ⊄ Σ A_i⊗A_j with i+j={n}')
        return None

    def degree_basis(self) -> list[tuple[int, Vec]]:
        """
        Echelon complement of ``A_{n-1}`` in ``A_n`` for every n.

        Returns:
            ``(degree, representative)`` pairs in degree order.
        """
        if self._degrees is None:
            result = [(0, b) for b in self.layers[0].basis]
            for n in range(1, len(self.layers)):
                lower = self.layers[n - 1]
                remainders = [lower.reduce(b) for b in self.layers[n].basis]
                complement = Subspace(remainders, self.ambient, self.field)
                result += [(n, b) for b in complement.basis]
            self._degrees = result
        return self._degrees

    def degree_of(self, vec: Vec) -> int:
        for n, layer in enumerate(self.layers):
            if layer.contains(vec):
                return n
        raise ShapeError('Vector outside the filtered space.')


def wedge_filtration(C: Coalgebra, D: Iterable[Vec] | Subspace,
                     max_steps: int | None = None) -> Filtration | None:
    """
    The wedge filtration ``A_0 = D``, ``A_{n+1} = Δ⁻¹(A⊗A_n + A_0⊗A)``.

    Args:
        C:         The coalgebra A.
        D:         Spanning vectors of a subcoalgebra.
        max_steps: Iteration cap, the dimension of A by default.

    Returns:
        The filtration if it exhausts A, None if the wedges stagnate.
    """
    if not isinstance(D, Subspace):
        D = Subspace(D, C.dim, C.field)
    if not is_subcoalgebra(C, D):
        raise PreconditionError('The starting subspace is not a '
                                'subcoalgebra.')
    n = C.dim
    units = [{i: C.field.one} for i in range(n)]
    layers = [D]
    cap = n if max_steps is None else max_steps
    for step in range(cap):
        if layers[-1].dim == n:
            break
        relations = _tensor_span(units, layers[-1].basis, n) + \
            _tensor_span(D.basis, units, n)
        quotient = Quotient(relations, n * n, C.field)
        columns = [quotient.project(_flat_delta(C, u)) for u in units]
        M = from_columns(columns, quotient.dim, C.field)
        kernel = kernel_vectors(rows_of(M), n, C.field)
        layer = Subspace(kernel, n, C.field)
        logger.debug(f'Wedge layer {step + 1} has dimension {layer.dim}.')
        if layer.dim == layers[-1].dim:
            logger.debug('Wedge filtration stagnates before exhausting.')
            return None
        layers.append(layer)
    if layers[-1].dim != n:
        return None
    return Filtration(layers)


class GradedCoalgebra(Coalgebra):
    """
    The associated graded coalgebra of a filtered coalgebra.

    ``representatives[i]`` is the element of the original coalgebra whose
    class is the i-th basis vector, of degree ``degrees[i]``.
    """

    def __init__(self, field, labels, delta, counit, degrees,
                 representatives, source: Coalgebra):
        super().__init__(field, labels, delta, counit)
        self.degrees = list(degrees)
        self.representatives = list(representatives)
        self.source = source

    @property
    def top_degree(self) -> int:
        return max(self.degrees, default=0)

    def homogeneous(self, degree: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == degree]


def representative_label(C: Coalgebra, vec: Vec) -> str:
    if len(vec) == 1:
        (i, c), = vec.items()
        if c == C.field.one:
            return C.labels[i]
    return C.format(vec).replace(' ', '')


def graded_coalgebra(C: Coalgebra, F: Filtration) -> GradedCoalgebra:
    """
    ``gr C`` on the echelon representatives of the filtration.

    The comultiplication keeps the components of Δ(x) of bidegree (a, b)
    with ``a + b = deg x``; the counit is supported in degree 0.
    """
    witness = F.check(C)
    if witness is not None:
        raise PreconditionError(f'Invalid filtration: {witness.message} at '
                                f'{witness.at}.')
    graded = F.degree_basis()
    degrees = [d for d, _ in graded]
    representatives = [v for _, v in graded]
    n = C.dim
    change = inverse(from_columns(representatives, n, C.field), C.field)
    if change is None:
        raise WorkbenchError('Filtration representatives are not a basis.')
    to_graded = rows_of(change)

    def coordinates(i: int) -> Vec:
        return {row: r[i] for row, r in to_graded.items() if r.get(i)}

    columns = [coordinates(i) for i in range(n)]
    delta = {}
    for p, (degree, rep) in enumerate(graded):
        for (a, b), c in C.delta_vec(rep).items():
            for x, cx in columns[a].items():
                for y, cy in columns[b].items():
                    if degrees[x] + degrees[y] == degree:
                        accumulate(delta, (p, x, y), c * cx * cy)
    counit = {p: C.counit_of(rep) for p, (degree, rep) in enumerate(graded)
              if degree == 0 and C.counit_of(rep)}
    labels = dedupe_labels([representative_label(C, v)
                            for v in representatives])
    logger.debug(f'Graded coalgebra with degree dims '
                 f'{[degrees.count(d) for d in range(len(F))]}.')
    return GradedCoalgebra(C.field, labels,
                           SparseTensor((n, n, n), delta, C.field),
                           counit, degrees, representatives, C)


class CoradicalCertificate(Model):
    status: Literal['certified', 'declared']
    grouplikes: list[str]
    dims: tuple[int, ...] = ()
    message: str | None = None
    filtration: Filtration | None = None

    @property
    def certified(self) -> bool:
        return self.status == 'certified'


def certify_coradical(C: Coalgebra,
                      grouplikes: Sequence[Vec] | None = None
                      ) -> CoradicalCertificate:
    """
    Certify that declared grouplikes span the coradical.

    The grouplikes are verified, their span must be a subcoalgebra and its
    wedge filtration must exhaust C. A failure of the last step leaves the
    coradical as declared, not certified.
    """
    if grouplikes is None:
        grouplikes = find_basis_grouplikes(C)
    names = [representative_label(C, g) for g in grouplikes]
    for name, g in zip(names, grouplikes):
        if not verify_grouplike(C, g):
            raise PreconditionError(f'Declared grouplike {name} is not '
                                    f'grouplike.')
    D = Subspace(grouplikes, C.dim, C.field)
    if D.dim != len(grouplikes):
        raise PreconditionError('Declared grouplikes are linearly '
                                'dependent.')
    filtration = wedge_filtration(C, D)
    if filtration is None:
        logger.debug(f'Coradical span{{{", ".join(names)}}} not certified.')
        return CoradicalCertificate(
            status='declared', grouplikes=names,
            message='wedge filtration does not exhaust the coalgebra')
    return CoradicalCertificate(status='certified', grouplikes=names,
                                dims=filtration.dims, filtration=filtration)
