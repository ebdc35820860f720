"""
Exact scalars and the linear-algebra kernel.

Scalars are elements of a sympy ground domain (``QQ`` or ``GF(p)``),
matrices are sparse sympy ``DomainMatrix`` objects whose column ``j`` is
the image of the ``j``-th basis vector, and sparse vectors are plain
dictionaries ``{index: scalar}`` that never store zeros.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import prod
from typing import Any, Iterable, Iterator, Literal, Sequence

from pydantic import ConfigDict, model_validator
from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from dqb_workbench.base import FieldError, ShapeError
from dqb_workbench.schemas import Model

logger = logging.getLogger(__name__)

Scalar = Any
Vec = dict[int, Scalar]


@lru_cache(maxsize=None)
def _domain(kind: str, p: int | None):
    if kind == 'Q':
        return QQ
    return GF(p, symmetric=False)


class Field(Model):
    """
    The ground field: the rationals or a prime field F_p.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal['Q', 'F'] = 'Q'
    p: int | None = None

    @model_validator(mode='after')
    def validate_characteristic(self):
        if self.kind == 'Q' and self.p is not None:
            raise ValueError('The rationals have no characteristic p.')
        if self.kind == 'F' and (self.p is None or not isprime(self.p)):
            raise ValueError(f'F_p needs a prime p, got {self.p}.')
        return self

    @classmethod
    def parse(cls, text: str) -> 'Field':
        """
        Read a field declaration, ``Q`` or ``F<p>``.
        """
        text = text.strip()
        try:
            if text == 'Q':
                return cls(kind='Q')
            if text.startswith('F'):
                return cls(kind='F', p=int(text[1:]))
        except ValueError as err:
            raise FieldError(f'Invalid field "{text}": {err}') from err
        raise FieldError(f'Invalid field "{text}", expected Q or F<p>.')

    @property
    def name(self) -> str:
        return 'Q' if self.kind == 'Q' else f'F{self.p}'

    @property
    def domain(self):
        return _domain(self.kind, self.p)

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    def __call__(self, value: Any) -> Scalar:
        """
        Convert an int, Fraction, "a/b" string or domain element.
        """
        if isinstance(value, str):
            return self.scalar(value)
        if isinstance(value, Fraction):
            return self._ratio(value.numerator, value.denominator)
        try:
            return self.domain.convert(value)
        except Exception as err:
            raise FieldError(
                f'{value!r} is not an element of {self.name}') from err

    def _ratio(self, numerator: int, denominator: int) -> Scalar:
        K = self.domain
        if self.kind == 'Q':
            if denominator == 0:
                raise FieldError('Zero denominator.')
            return K(numerator, denominator)
        if denominator % self.p == 0:
            raise FieldError(
                f'Denominator {denominator} vanishes in {self.name}.')
        return K(numerator) / K(denominator)

    def scalar(self, text: str) -> Scalar:
        """
        Parse an exact scalar written as an integer or ``a/b``.
        """
        text = text.strip()
        try:
            if '/' in text:
                numerator, denominator = text.split('/')
                return self._ratio(int(numerator), int(denominator))
            return self._ratio(int(text), 1)
        except ValueError as err:
            raise FieldError(f'Invalid scalar "{text}".') from err

    def format(self, value: Scalar) -> str:
        if self.kind == 'Q':
            if value.denominator == 1:
                return str(value.numerator)
            return f'{value.numerator}/{value.denominator}'
        return str(int(value) % self.p)

    def root_of_unity(self, n: int) -> Scalar | None:
        """
        A primitive n-th root of unity of the field, if there is one.
        """
        if n < 1:
            raise FieldError(f'No {n}-th roots of unity.')
        if self.kind == 'Q':
            return {1: self.one, 2: -self.one}.get(n)
        if (self.p - 1) % n:
            return None
        for candidate in range(1, self.p):
            zeta = self.domain(candidate)
            if zeta ** n == self.one and all(
                    zeta ** d != self.one for d in range(1, n)):
                return zeta
        return None


def accumulate(target: dict, key: Any, value: Scalar) -> None:
    """
    Add ``value`` to ``target[key]`` in place, dropping zeros.
    """
    if not value:
        return
    current = target.get(key)
    if current is None:
        target[key] = value
        return
    current = current + value
    if current:
        target[key] = current
    else:
        del target[key]


def add(a: dict, b: dict, scale: Scalar | None = None) -> dict:
    """
    Return ``a + scale*b`` for sparse vectors or sparse tensors.
    """
    out = dict(a)
    for key, value in b.items():
        accumulate(out, key, value if scale is None else scale * value)
    return out


def sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, value in b.items():
        accumulate(out, key, -value)
    return out


def scaled(vec: dict, c: Scalar) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in vec.items()}


def unit_vector(i: int, field: Field) -> Vec:
    return {i: field.one}


def dense(vec: Vec, n: int, field: Field) -> list[Scalar]:
    return [vec.get(i, field.zero) for i in range(n)]


def sparse(values: Sequence[Scalar]) -> Vec:
    return {i: v for i, v in enumerate(values) if v}


# -- matrices -----------------------------------------------------------------

def matrix(rows: dict[int, dict[int, Scalar]] | Sequence[Sequence[Any]],
           shape: tuple[int, int] | None,
           field: Field) -> DomainMatrix:
    """
    Build a sparse DomainMatrix from row dictionaries or nested lists.
    """
    if not isinstance(rows, dict):
        values = [[field(v) for v in row] for row in rows]
        if shape is None:
            shape = (len(values), len(values[0]) if values else 0)
        rows = {i: {j: v for j, v in enumerate(row) if v}
                for i, row in enumerate(values)}
    clean = {i: dict(r) for i, r in rows.items() if r}
    return DomainMatrix(clean, shape, field.domain)


def from_columns(columns: Sequence[Vec], nrows: int,
                 field: Field) -> DomainMatrix:
    rows: dict[int, dict[int, Scalar]] = {}
    for j, column in enumerate(columns):
        for i, value in column.items():
            if value:
                rows.setdefault(i, {})[j] = value
    return matrix(rows, (nrows, len(columns)), field)


def rows_of(M: DomainMatrix) -> dict[int, dict[int, Scalar]]:
    rep = M.to_sparse().rep
    return {i: dict(row) for i, row in rep.items() if row}


def columns_of(M: DomainMatrix) -> list[Vec]:
    columns: list[Vec] = [{} for _ in range(M.shape[1])]
    for i, row in rows_of(M).items():
        for j, value in row.items():
            columns[j][i] = value
    return columns


def apply(M: DomainMatrix, vec: Vec) -> Vec:
    """
    Image of a sparse vector under M.
    """
    out: Vec = {}
    for i, row in rows_of(M).items():
        total = None
        for j, value in row.items():
            x = vec.get(j)
            if x:
                total = value * x if total is None else total + value * x
        if total:
            out[i] = total
    return out


def identity(n: int, field: Field) -> DomainMatrix:
    return matrix({i: {i: field.one} for i in range(n)}, (n, n), field)


def zeros(m: int, n: int, field: Field) -> DomainMatrix:
    return matrix({}, (m, n), field)


def kron(A: DomainMatrix, B: DomainMatrix, field: Field) -> DomainMatrix:
    """
    Tensor product of maps, indexing V⊗W by ``v * dim(W) + w``.
    """
    (ma, na), (mb, nb) = A.shape, B.shape
    rows: dict[int, dict[int, Scalar]] = {}
    rows_b = rows_of(B)
    for i, row_a in rows_of(A).items():
        for k, row_b in rows_b.items():
            out = rows.setdefault(i * mb + k, {})
            for j, a in row_a.items():
                for l, b in row_b.items():
                    out[j * nb + l] = a * b
    return matrix(rows, (ma * mb, na * nb), field)


def compose(*maps: DomainMatrix) -> DomainMatrix:
    """
    ``compose(f, g, h) = f∘g∘h``.
    """
    result = maps[-1]
    for M in reversed(maps[:-1]):
        if M.shape[1] != result.shape[0]:
            raise ShapeError(
                f'Cannot compose {M.shape} after {result.shape}.')
        result = M * result
    return result


def matrices_equal(A: DomainMatrix, B: DomainMatrix) -> bool:
    return A.shape == B.shape and rows_of(A) == rows_of(B)


def is_identity(A: DomainMatrix) -> bool:
    n, m = A.shape
    return n == m and rows_of(A) == {
        i: {i: A.domain.one} for i in range(n)}


def permutation_matrix(images: Sequence[int], field: Field) -> DomainMatrix:
    """
    The map sending basis vector j to basis vector ``images[j]``.
    """
    return from_columns([{i: field.one} for i in images],
                        len(images), field)


# -- elimination --------------------------------------------------------------

def rref(rows: dict[int, dict[int, Scalar]], ncols: int,
         field: Field) -> tuple[list[dict[int, Scalar]], tuple[int, ...]]:
    """
    Reduced row echelon form of a sparse system.

    Returns:
        The nonzero rows in order and the tuple of pivot columns.
    """
    nrows = max(rows, default=-1) + 1
    if nrows == 0 or ncols == 0:
        return [], ()
    reduced, pivots = matrix(rows, (nrows, ncols), field).rref()
    rep = rows_of(reduced)
    return [rep.get(i, {}) for i in range(len(pivots))], tuple(pivots)


def solve_linear(A: DomainMatrix, b: Sequence[Scalar] | Vec,
                 field: Field | None = None) -> list[Scalar] | None:
    """
    Solve ``A·x = b`` exactly.

    Free variables are pinned to zero, so the answer is deterministic.

    Args:
        A: Coefficient matrix of shape m×n.
        b: Right hand side, dense of length m or sparse.
        field: Ground field, inferred from A when omitted.

    Returns:
        A solution as a dense list, or None when the system is
        inconsistent.
    """
    m, n = A.shape
    field = field or field_of(A)
    if not isinstance(b, dict):
        if len(b) != m:
            raise ShapeError(f'Right hand side of length {len(b)} for a '
                             f'{m}×{n} system.')
        b = sparse(list(b))
    elif any(i >= m for i in b):
        raise ShapeError(f'Right hand side index outside {m} rows.')

    augmented = rows_of(A)
    for i, value in b.items():
        augmented.setdefault(i, {})[n] = value
    reduced, pivots = rref(augmented, n + 1, field)
    logger.debug(f'Solved {m}×{n} system, rank {len(pivots)}.')
    if n in pivots:
        return None
    x = [field.zero] * n
    for row, column in zip(reduced, pivots):
        x[column] = row.get(n, field.zero)
    return x


def solve_sparse(rows: dict[int, dict[int, Scalar]], b: Vec, ncols: int,
                 field: Field) -> tuple[Vec | None, int]:
    """
    Solve a system given by row dictionaries.

    Returns:
        The pinned solution (None if inconsistent) and the dimension of
        the solution space of the homogeneous system.
    """
    augmented = {i: dict(r) for i, r in rows.items()}
    for i, value in b.items():
        augmented.setdefault(i, {})[ncols] = value
    reduced, pivots = rref(augmented, ncols + 1, field)
    if ncols in pivots:
        return None, ncols - len(pivots) + 1
    solution = {column: row[ncols] for row, column in zip(reduced, pivots)
                if row.get(ncols)}
    return solution, ncols - len(pivots)


def echelon(vectors: Iterable[Vec], n: int,
            field: Field) -> tuple[list[Vec], tuple[int, ...]]:
    """
    Reduced echelon basis of the span of some sparse vectors.
    """
    rows = {i: dict(v) for i, v in enumerate(vectors) if v}
    rows = {i: v for i, v in enumerate(rows.values())}
    return rref(rows, n, field)


def rank(vectors: Iterable[Vec], n: int, field: Field) -> int:
    return len(echelon(vectors, n, field)[1])


def kernel_basis(A: DomainMatrix,
                 field: Field | None = None) -> list[list[Scalar]]:
    """
    Exact basis of ``{x : A·x = 0}`` in reduced echelon form.
    """
    field = field or field_of(A)
    n = A.shape[1]
    return [dense(v, n, field) for v in kernel_vectors(rows_of(A), n, field)]


def kernel_vectors(rows: dict[int, dict[int, Scalar]], n: int,
                   field: Field) -> list[Vec]:
    reduced, pivots = rref(rows, n, field)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for j in free:
        v = {j: field.one}
        for row, column in zip(reduced, pivots):
            value = row.get(j)
            if value:
                v[column] = -value
        basis.append(v)
    return echelon(basis, n, field)[0]


def field_of(M: DomainMatrix) -> Field:
    K = M.domain
    if K == QQ:
        return Field(kind='Q')
    if K.is_FiniteField:
        return Field(kind='F', p=int(K.characteristic()))
    raise FieldError(f'Unsupported ground domain {K}.')


def inverse(A: DomainMatrix, field: Field) -> DomainMatrix | None:
    n, m = A.shape
    if n != m:
        raise ShapeError(f'Only square matrices are invertible, got {A.shape}')
    augmented = rows_of(A)
    for i in range(n):
        augmented.setdefault(i, {})[n + i] = field.one
    reduced, pivots = rref(augmented, 2 * n, field)
    if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) != n:
        return None
    return matrix({i: {j - n: v for j, v in row.items() if j >= n}
                   for i, row in enumerate(reduced)}, (n, n), field)


class Subspace:
    """
    A subspace of k^n kept as a reduced echelon basis.

    The pivot columns give a canonical retraction: the coordinates of a
    member are its entries at the pivots.
    """

    def __init__(self, vectors: Iterable[Vec], ambient: int, field: Field):
        self.ambient = ambient
        self.field = field
        self.basis, self.pivots = echelon(vectors, ambient, field)

    def __repr__(self):
        return f'Subspace(dim={self.dim}, ambient={self.ambient})'

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def inclusion(self) -> DomainMatrix:
        return from_columns(self.basis, self.ambient, self.field)

    @property
    def retraction(self) -> DomainMatrix:
        return matrix({i: {p: self.field.one}
                       for i, p in enumerate(self.pivots)},
                      (self.dim, self.ambient), self.field)

    def coordinates(self, vec: Vec) -> Vec:
        return {i: vec[p] for i, p in enumerate(self.pivots) if vec.get(p)}

    def reduce(self, vec: Vec) -> Vec:
        """
        Remainder of ``vec`` after eliminating the pivot entries.
        """
        out = dict(vec)
        for row, p in zip(self.basis, self.pivots):
            c = out.get(p)
            if c:
                out = add(out, row, -c)
        return out

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def element(self, coords: Vec) -> Vec:
        out: Vec = {}
        for i, c in coords.items():
            out = add(out, self.basis[i], c)
        return out

    def complement(self) -> list[int]:
        """
        Standard basis indices spanning an echelon complement.
        """
        pivots = set(self.pivots)
        return [j for j in range(self.ambient) if j not in pivots]


class Quotient:
    """
    k^n modulo the span of some relations, with a fixed echelon section.
    """

    def __init__(self, relations: Iterable[Vec], ambient: int, field: Field):
        self.ambient = ambient
        self.field = field
        self.relations = Subspace(relations, ambient, field)
        self.free = self.relations.complement()
        self._position = {j: i for i, j in enumerate(self.free)}

    def __repr__(self):
        return f'Quotient(dim={self.dim}, ambient={self.ambient})'

    @property
    def dim(self) -> int:
        return len(self.free)

    def project(self, vec: Vec) -> Vec:
        reduced = self.relations.reduce(vec)
        return {self._position[j]: v for j, v in reduced.items()}

    def lift(self, coords: Vec) -> Vec:
        return {self.free[i]: v for i, v in coords.items()}

    @property
    def projection(self) -> DomainMatrix:
        return from_columns([self.project({j: self.field.one})
                             for j in range(self.ambient)],
                            self.dim, self.field)

    @property
    def section(self) -> DomainMatrix:
        return from_columns([{j: self.field.one} for j in self.free],
                            self.ambient, self.field)


# -- tensors ------------------------------------------------------------------

class SparseTensor:
    """
    Exact multi-index table.

    Zero entries are never stored. Tables that are more than half full
    are kept as a flat row-major tuple instead of a dictionary.
    """

    def __init__(self, shape: Sequence[int],
                 entries: dict[tuple[int, ...], Any] | None,
                 field: Field):
        self.shape = tuple(shape)
        self.field = field
        clean: dict[tuple[int, ...], Scalar] = {}
        for index, value in (entries or {}).items():
            index = tuple(index)
            if len(index) != len(self.shape) or any(
                    not 0 <= i < d for i, d in zip(index, self.shape)):
                raise ShapeError(
                    f'Index {index} outside tensor of shape {self.shape}.')
            value = field(value)
            if value:
                clean[index] = value

        self.size = prod(self.shape)
        self.nnz = len(clean)
        if self.size and 2 * self.nnz > self.size:
            self._dense = tuple(
                clean.get(index, field.zero) for index in self._indices())
            self._entries = None
        else:
            self._dense = None
            self._entries = clean

    def _indices(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.shape))

    def _flat(self, index: tuple[int, ...]) -> int:
        flat = 0
        for i, d in zip(index, self.shape):
            flat = flat * d + i
        return flat

    @property
    def layout(self) -> str:
        return 'sparse' if self._dense is None else 'dense'

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def fill(self) -> float:
        return self.nnz / self.size if self.size else 0.0

    def __getitem__(self, index: tuple[int, ...] | int) -> Scalar:
        if isinstance(index, int):
            index = (index,)
        if self._dense is not None:
            return self._dense[self._flat(index)]
        return self._entries.get(tuple(index), self.field.zero)

    def items(self) -> Iterator[tuple[tuple[int, ...], Scalar]]:
        if self._dense is not None:
            for index, value in zip(self._indices(), self._dense):
                if value:
                    yield index, value
        else:
            yield from sorted(self._entries.items())

    def to_dict(self) -> dict[tuple[int, ...], Scalar]:
        return dict(self.items())

    def __len__(self):
        return self.nnz

    def __eq__(self, other):
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return self.shape == other.shape and \
            self.to_dict() == other.to_dict()

    def __repr__(self):
        return (f'SparseTensor(shape={self.shape}, nnz={self.nnz}, '
                f'layout={self.layout})')

    def __add__(self, other: 'SparseTensor') -> 'SparseTensor':
        if self.shape != other.shape:
            raise ShapeError(f'Cannot add {self.shape} and {other.shape}.')
        return SparseTensor(self.shape,
                            add(self.to_dict(), other.to_dict()),
                            self.field)

    def scale(self, c: Scalar) -> 'SparseTensor':
        return SparseTensor(self.shape, scaled(self.to_dict(), c),
                            self.field)

    def permute(self, axes: Sequence[int]) -> 'SparseTensor':
        return SparseTensor(
            tuple(self.shape[a] for a in axes),
            {tuple(index[a] for a in axes): v for index, v in self.items()},
            self.field)

    @classmethod
    def from_vector(cls, vec: Vec, n: int, field: Field) -> 'SparseTensor':
        return cls((n,), {(i,): v for i, v in vec.items()}, field)

    def to_vector(self) -> Vec:
        if self.ndim != 1:
            raise ShapeError(f'Tensor of shape {self.shape} is not a vector.')
        return {index[0]: v for index, v in self.items()}

    @classmethod
    def from_matrix(cls, M: DomainMatrix, field: Field) -> 'SparseTensor':
        return cls(M.shape, {(i, j): v for i, row in rows_of(M).items()
                             for j, v in row.items()}, field)

    def to_matrix(self, row_axes: Sequence[int],
                  column_axes: Sequence[int]) -> DomainMatrix:
        """
        Flatten into a matrix, grouping the given axes row-major.
        """
        def flat(index, axes):
            out = 0
            for a in axes:
                out = out * self.shape[a] + index[a]
            return out
        nrows = prod(self.shape[a] for a in row_axes)
        ncols = prod(self.shape[a] for a in column_axes)
        rows: dict[int, dict[int, Scalar]] = {}
        for index, value in self.items():
            rows.setdefault(flat(index, row_axes), {})[
                flat(index, column_axes)] = value
        return matrix(rows, (nrows, ncols), self.field)


def contract(t: SparseTensor, u: SparseTensor,
             axes: Sequence[tuple[int, int]]) -> SparseTensor:
    """
    Contract axis ``i`` of t against axis ``j`` of u for each pair.

    The output axes are the unpaired axes of t followed by those of u.
    """
    t_axes = [i for i, _ in axes]
    u_axes = [j for _, j in axes]
    for i, j in axes:
        if t.shape[i] != u.shape[j]:
            raise ShapeError(f'Cannot pair axis {i} of {t.shape} with axis '
                             f'{j} of {u.shape}.')
    if len(set(t_axes)) != len(t_axes) or len(set(u_axes)) != len(u_axes):
        raise ShapeError(f'Repeated axis in pairing {list(axes)}.')

    t_free = [a for a in range(t.ndim) if a not in t_axes]
    u_free = [a for a in range(u.ndim) if a not in u_axes]

    groups: dict[tuple[int, ...], list] = {}
    for index, value in u.items():
        groups.setdefault(tuple(index[j] for j in u_axes), []).append(
            (tuple(index[a] for a in u_free), value))

    out: dict[tuple[int, ...], Scalar] = {}
    for index, a in t.items():
        key = tuple(index[i] for i in t_axes)
        head = tuple(index[k] for k in t_free)
        for tail, b in groups.get(key, ()):
            accumulate(out, head + tail, a * b)

    shape = tuple(t.shape[a] for a in t_free) + \
        tuple(u.shape[a] for a in u_free)
    return SparseTensor(shape, out, t.field)
