"""
Crossed (G,θ)-modules: G-graded spaces ``V = ⊕ V_g`` with an action
``h▸V_g ⊆ V_{hgh⁻¹}`` satisfying

    h▸(l▸v) = θ(hlgl⁻¹h⁻¹,h,l) θ(h,l,g) / θ(h,lgl⁻¹,l) · (hl)▸v

for ``v ∈ V_g``. They are the Yetter-Drinfeld modules over k^θG written
out on homogeneous bases.
"""
import logging
import random
from itertools import product
from typing import Any

from pydantic import model_validator

from dqb_workbench.base import CheckSuite, NonHomogeneous, PreconditionError
from dqb_workbench.dqb import (DualQuasiBialgebra, GroupCocycleData,
                               from_group_cocycle)
from dqb_workbench.exact import (Field, Scalar, Vec, accumulate, columns_of,
                                 compose, from_columns, identity, inverse,
                                 matrix)
from dqb_workbench.schemas import Model, Report, Witness
from dqb_workbench.utils import format_vector, tensor_labels
from dqb_workbench.yd import YDModule

logger = logging.getLogger(__name__)


class CrossedGModule(Model):
    """
    ``grading[v]`` is the group element of basis vector v and
    ``action[(h, v)]`` the vector ``h▸v``. Missing action entries are zero.
    """
    group: GroupCocycleData
    labels: list[str]
    grading: list[int]
    action: dict[tuple[int, int], dict[int, Any]] = {}

    @model_validator(mode='after')
    def validate_tables(self):
        n, d = self.group.order, len(self.labels)
        if len(self.grading) != d:
            raise ValueError(f'{len(self.grading)} grades for {d} basis '
                             f'vectors.')
        if any(not 0 <= g < n for g in self.grading):
            raise ValueError('Grade outside the group.')
        clean = {}
        for (h, v), image in self.action.items():
            if not (0 <= h < n and 0 <= v < d):
                raise ValueError(f'Action index {(h, v)} out of range.')
            entries = {}
            for w, c in image.items():
                if not 0 <= w < d:
                    raise ValueError(f'Action image index {w} out of range.')
                c = self.group.field(c)
                if c:
                    entries[w] = c
            if entries:
                clean[(h, v)] = entries
        self.action = clean
        return self

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def field(self) -> Field:
        return self.group.field

    def act(self, h: int, v: int) -> Vec:
        return self.action.get((h, v), {})

    def act_vec(self, h: int, vec: Vec) -> Vec:
        out: Vec = {}
        for v, x in vec.items():
            for w, y in self.act(h, v).items():
                accumulate(out, w, x * y)
        return out

    def component(self, g: int) -> list[int]:
        return [v for v, grade in enumerate(self.grading) if grade == g]

    def format(self, vec: Vec) -> str:
        return format_vector(vec, self.labels, self.field)


def _conjugate(G: GroupCocycleData, h: int, g: int) -> int:
    table = G.mul_table
    return table[table[h][g]][G.inv_table[h]]


def associativity_factor(G: GroupCocycleData, h: int, l: int,
                         g: int) -> Scalar:
    """``θ(hlgl⁻¹h⁻¹,h,l) θ(h,l,g) / θ(h,lgl⁻¹,l)``."""
    inner = _conjugate(G, l, g)
    outer = _conjugate(G, h, inner)
    return (G.theta_of(outer, h, l) * G.theta_of(h, l, g)
            / G.theta_of(h, inner, l))


def crossed_check(V: CrossedGModule) -> Report:
    """
    Grading compatibility, unit action and twisted associativity, with
    ``(h, l, v)`` witnesses.
    """
    G = V.group
    one = V.field.one

    def group():
        if not G.is_group:
            raise PreconditionError('the grading monoid is not a group')
        return None

    def grading():
        group()
        for h, v in product(range(G.order), range(V.dim)):
            target = _conjugate(G, h, V.grading[v])
            image = V.act(h, v)
            if any(V.grading[w] != target for w in image):
                return Witness(at=[G.labels[h], V.labels[v]],
                               lhs=V.format(image),
                               message=f'h▸v leaves V_{G.labels[target]}')
        return None

    def unit():
        for v in range(V.dim):
            image = V.act(G.unit, v)
            if image != {v: one}:
                return Witness(at=[V.labels[v]], lhs=V.format(image),
                               rhs=V.labels[v], message='1▸v ≠ v')
        return None

    def associativity():
        group()
        for h, l, v in product(range(G.order), range(G.order),
                               range(V.dim)):
            lhs = V.act_vec(h, V.act(l, v))
            factor = associativity_factor(G, h, l, V.grading[v])
            rhs = {w: factor * c
                   for w, c in V.act(G.mul_table[h][l], v).items()}
            if lhs != rhs:
                return Witness(at=[G.labels[h], G.labels[l], V.labels[v]],
                               lhs=V.format(lhs), rhs=V.format(rhs),
                               message='h▸(l▸v) differs from the twisted '
                                       '(hl)▸v')
        return None

    return CheckSuite('crossed module', [
        ('group', group),
        ('grading compatible', grading),
        ('unit action', unit),
        ('twisted associativity', associativity)]).run()


def crossed_to_yd(V: CrossedGModule,
                  H: DualQuasiBialgebra | None = None) -> YDModule:
    """
    The Yetter-Drinfeld module over k^θG with ``ρ(v) = g⊗v`` on V_g.

    Args:
        V: The crossed module.
        H: The dual quasi-bialgebra of the group, built from it if omitted.
    """
    H = H or from_group_cocycle(V.group)
    one = V.field.one
    coaction = {(v, g, v): one for v, g in enumerate(V.grading)}
    action = {(h, v, w): c for (h, v), image in V.action.items()
              for w, c in image.items()}
    return YDModule(H, V.labels, coaction, action)


def yd_to_crossed(W: YDModule, group: GroupCocycleData) -> CrossedGModule:
    """
    Read a Yetter-Drinfeld module over k^θG as a crossed module.

    Raises:
        NonHomogeneous: A basis vector is not homogeneous for the coaction.
    """
    if W.H.dim != group.order:
        raise PreconditionError(f'{W!r} lives over a base of dimension '
                                f'{W.H.dim}, the group has order '
                                f'{group.order}.')
    one = W.field.one
    grading = []
    for v in range(W.dim):
        terms = W.co(v)
        if len(terms) != 1 or terms[0][0][1] != v or terms[0][1] != one:
            logger.error(f'Basis vector {W.labels[v]} is not homogeneous.')
            raise NonHomogeneous(W.labels[v])
        grading.append(terms[0][0][0])
    action = {}
    if W.has_action:
        for h, v in product(range(group.order), range(W.dim)):
            image = W.act(h, v)
            if image:
                action[(h, v)] = dict(image)
    return CrossedGModule(group=group, labels=W.labels, grading=grading,
                          action=action)


def crossed_tensor(V: CrossedGModule, W: CrossedGModule) -> CrossedGModule:
    """
    ``(V⊗W)_g = ⊕ V_h⊗W_{h⁻¹g}`` with

        h▸(v⊗w) = θ(hgh⁻¹,hkh⁻¹,h) θ(h,g,k) / θ(hgh⁻¹,h,k)
                  · (h▸v)⊗(h▸w)

    for ``v ∈ V_g`` and ``w ∈ W_k``.
    """
    G = V.group
    if W.group != G:
        raise PreconditionError('Crossed modules over different groups.')
    table = G.mul_table
    dW = W.dim
    grading = [table[g][k] for g, k in product(V.grading, W.grading)]
    action: dict = {}
    for h, v, w in product(range(G.order), range(V.dim), range(dW)):
        g, k = V.grading[v], W.grading[w]
        g2, k2 = _conjugate(G, h, g), _conjugate(G, h, k)
        factor = (G.theta_of(g2, k2, h) * G.theta_of(h, g, k)
                  / G.theta_of(g2, h, k))
        image: Vec = {}
        for p, x in V.act(h, v).items():
            for q, y in W.act(h, w).items():
                accumulate(image, p * dW + q, factor * x * y)
        if image:
            action[(h, v * dW + w)] = image
    return CrossedGModule(group=G, labels=tensor_labels(V.labels, W.labels),
                          grading=grading, action=action)


def crossed_braiding(V: CrossedGModule, W: CrossedGModule):
    """``c(v⊗w) = (g▸w)⊗v`` for ``v ∈ V_g``, as a matrix ``V⊗W → W⊗V``."""
    dV, dW = V.dim, W.dim
    columns = []
    for v, w in product(range(dV), range(dW)):
        image = {q * dV + v: c
                 for q, c in W.act(V.grading[v], w).items()}
        columns.append(image)
    return from_columns(columns, dV * dW, V.field)


def _generator(G: GroupCocycleData) -> int | None:
    table = G.mul_table
    for a in range(G.order):
        seen, x = set(), G.unit
        for _ in range(G.order):
            x = table[x][a]
            seen.add(x)
        if len(seen) == G.order:
            return a
    return None


def _power_roots(field: Field, c: Scalar, n: int) -> list[Scalar]:
    """Solutions of ``xⁿ = c`` found among small field elements."""
    if field.kind == 'F':
        candidates = [field(i) for i in range(1, field.p)]
    else:
        candidates = [field(1), field(-1)]
    return [x for x in candidates if x ** n == c]


def _companion(c: Scalar, n: int, field: Field) -> list[list[Scalar]]:
    """The companion matrix of ``xⁿ − c``."""
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = field.one
    rows[0][n - 1] = c
    return rows


def random_crossed_module(group: GroupCocycleData, field: Field | None = None,
                          rng: random.Random | None = None,
                          max_blocks: int = 2,
                          entry_range: int = 3) -> CrossedGModule:
    """
    A random crossed module over a cyclic group.

    For a generator a of order n and a grade g the action of a on V_g is a
    matrix T with ``Tⁿ = c_g·I``, ``c_g = ∏_{k=1}^{n-1} f_g(a,a^k)`` and
    ``f_g(h,l) = θ(g,h,l)θ(h,l,g)/θ(h,g,l)``. T is a block sum of scalar
    roots and companion matrices of ``xⁿ − c_g``, conjugated by a random
    invertible matrix; the powers ``a^k▸ = T·(a^{k-1}▸)/f_g(a,a^{k-1})``
    give the rest of the action.

    Raises:
        PreconditionError: The group is not cyclic.
    """
    field = field or group.field
    rng = rng or random.Random(0)
    a = _generator(group)
    if a is None:
        raise PreconditionError('random crossed modules need a cyclic '
                                'group')
    n = group.order
    table = group.mul_table
    powers = [group.unit]
    for _ in range(n - 1):
        powers.append(table[powers[-1]][a])

    def f(g, h, l):
        return (group.theta_of(g, h, l) * group.theta_of(h, l, g)
                / group.theta_of(h, g, l))

    labels, grading, action = [], [], {}
    for g in range(n):
        c = field.one
        for k in range(1, n):
            c *= f(g, a, powers[k])
        roots = _power_roots(field, c, n)
        blocks = []
        for _ in range(rng.randint(0, max_blocks)):
            if roots and rng.random() < 0.5:
                blocks.append([[rng.choice(roots)]])
            else:
                blocks.append(_companion(c, n, field))
        size = sum(len(b) for b in blocks)
        if not size:
            continue
        T = [[field.zero] * size for _ in range(size)]
        offset = 0
        for block in blocks:
            for i, row in enumerate(block):
                for j, x in enumerate(row):
                    T[offset + i][offset + j] = x
            offset += len(block)
        while True:
            P = matrix([[field(rng.randint(-entry_range, entry_range))
                         for _ in range(size)] for _ in range(size)],
                       (size, size), field)
            P_inv = inverse(P, field)
            if P_inv is not None:
                break
        generator = compose(P, matrix(T, (size, size), field), P_inv)

        start = len(labels)
        labels += [f'{group.labels[g]}_{i}' for i in range(size)]
        grading += [g] * size
        current = identity(size, field)
        for k in range(n):
            if k:
                scale = field.one / f(g, a, powers[k - 1])
                current = from_columns(
                    [{i: x * scale for i, x in column.items()}
                     for column in columns_of(compose(generator, current))],
                    size, field)
            for j, column in enumerate(columns_of(current)):
                if column:
                    action[(powers[k], start + j)] = {
                        start + i: x for i, x in column.items()}
    logger.debug(f'Random crossed module of dimension {len(labels)} over '
                 f'{group.labels}.')
    return CrossedGModule(group=group, labels=labels, grading=grading,
                          action=action)
