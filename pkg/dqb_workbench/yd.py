"""
Yetter-Drinfeld modules over a dual quasi-bialgebra H.

A module carries a left H-coaction ``ρ(v) = v₋₁⊗v₀`` and a left action
``h⊳v``. Its monoidal structure is the one of left H-comodules: the
tensor coaction is codiagonal and the associativity constraint is

    ((u⊗v)⊗w) ↦ ω⁻¹(u₋₁, v₋₁, w₋₁) u₀⊗(v₀⊗w₀).

Tensor products ``V⊗W`` are indexed by ``v * dim(W) + w``; since the flat
index does not depend on the bracketing, constraints are square matrices.
"""
import logging
from itertools import product
from typing import Sequence

from sympy.polys.matrices import DomainMatrix

from dqb_workbench.base import (BaseChecker, CheckSuite, PreconditionError,
                                ShapeError)
from dqb_workbench.dqb import DualQuasiBialgebra
from dqb_workbench.exact import (Scalar, SparseTensor, Vec, accumulate,
                                 columns_of, compose, from_columns, identity,
                                 kron, matrices_equal)
from dqb_workbench.schemas import Report, Witness
from dqb_workbench.utils import format_vector, tensor_labels

logger = logging.getLogger(__name__)

Index = int | Vec


def omega(H: DualQuasiBialgebra, a: Index, b: Index, c: Index,
          inverse: bool = False) -> Scalar:
    """
    ω or ω⁻¹ on basis indices or sparse vectors.
    """
    if isinstance(a, int) and isinstance(b, int) and isinstance(c, int):
        return H.w_inv(a, b, c) if inverse else H.w(a, b, c)
    vectors = [{x: H.field.one} if isinstance(x, int) else x
               for x in (a, b, c)]
    return H.w_vec(*vectors, inverse=inverse)


class YDModule:
    """
    A left H-comodule with an optional left action.

    Args:
        H:        The base dual quasi-bialgebra.
        labels:   Basis labels.
        coaction: ``coaction[v, h, w]`` is the coefficient of ``e_h⊗e_w``
                  in ``ρ(e_v)``.
        action:   ``action[h, v, w]`` is the coefficient of ``e_w`` in
                  ``e_h⊳e_v``; None for a plain comodule.
        name:     Optional display name.
    """

    def __init__(self, H: DualQuasiBialgebra, labels: Sequence[str],
                 coaction: SparseTensor | dict,
                 action: SparseTensor | dict | None = None,
                 name: str | None = None):
        self.logger = logging.getLogger(__name__)
        self.H = H
        self.field = H.field
        self.labels = list(labels)
        self.name = name
        d, n = len(self.labels), H.dim
        if not isinstance(coaction, SparseTensor):
            coaction = SparseTensor((d, n, d), coaction, H.field)
        if coaction.shape != (d, n, d):
            raise ShapeError(f'Coaction of shape {coaction.shape}, '
                             f'expected {(d, n, d)}.')
        if action is not None and not isinstance(action, SparseTensor):
            action = SparseTensor((n, d, d), action, H.field)
        if action is not None and action.shape != (n, d, d):
            raise ShapeError(f'Action of shape {action.shape}, '
                             f'expected {(n, d, d)}.')
        self.coaction = coaction
        self.action = action

        self._co: list[list] = [[] for _ in range(d)]
        for (v, h, w), value in coaction.items():
            self._co[v].append(((h, w), value))
        self._act: dict[tuple[int, int], Vec] = {}
        if action is not None:
            for (h, v, w), value in action.items():
                self._act.setdefault((h, v), {})[w] = value
        self._co_n: dict[tuple[int, int], list] = {}

    def __repr__(self):
        kind = 'YDModule' if self.has_action else 'Comodule'
        name = f'{self.name}, ' if self.name else ''
        return f'{kind}({name}dim={self.dim})'

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def has_action(self) -> bool:
        return self.action is not None

    def co(self, v: int) -> list[tuple[tuple[int, int], Scalar]]:
        return self._co[v]

    def co_n(self, v: int, k: int) -> list[tuple[tuple[int, ...], Scalar]]:
        """
        ``v₋ₖ ⊗ ... ⊗ v₋₁ ⊗ v₀`` as tuples of k indices of H and one of V.
        """
        key = (v, k)
        if key not in self._co_n:
            expanded: dict[tuple[int, ...], Scalar] = {}
            for (h, w), c in self._co[v]:
                for hs, d in self.H.delta_n(h, k):
                    accumulate(expanded, hs + (w,), c * d)
            self._co_n[key] = sorted(expanded.items())
        return self._co_n[key]

    def act(self, h: int, v: int) -> Vec:
        if not self.has_action:
            raise PreconditionError(f'{self!r} carries no action.')
        return self._act.get((h, v), {})

    def act_vec(self, h: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, x in h.items():
            for j, y in v.items():
                for k, z in self.act(i, j).items():
                    accumulate(out, k, x * y * z)
        return out

    def coact_vec(self, v: Vec) -> dict[tuple[int, int], Scalar]:
        out: dict = {}
        for i, x in v.items():
            for key, c in self._co[i]:
                accumulate(out, key, x * c)
        return out

    def format(self, vec: dict) -> str:
        return format_vector(vec, self.labels, self.field)

    def format_coaction(self, vec: dict) -> str:
        return format_vector(vec, [self.H.labels, self.labels], self.field)


def _require_same_base(*modules: YDModule):
    H = modules[0].H
    if any(m.H is not H for m in modules):
        raise ShapeError('Modules over different dual quasi-bialgebras.')
    return H


def unit_module(H: DualQuasiBialgebra) -> YDModule:
    """
    The unit object k with ``ρ(1) = 1_H⊗1`` and ``h⊳1 = ε(h)``.
    """
    coaction = {(0, p, 0): z for p, z in H.one.items()}
    action = {(h, 0, 0): H.eps(h) for h in range(H.dim) if H.eps(h)}
    return YDModule(H, ['1'], coaction, action, name='k')


def comodule_tensor(V: YDModule, W: YDModule) -> YDModule:
    """
    ``V⊗W`` with the codiagonal coaction ``v₋₁w₋₁ ⊗ v₀⊗w₀`` only.
    """
    H = _require_same_base(V, W)
    dW = W.dim
    coaction: dict = {}
    for v, w in product(range(V.dim), range(dW)):
        for (g, v0), a in V.co(v):
            for (h, w0), b in W.co(w):
                for p, z in H.mul_basis(g, h).items():
                    accumulate(coaction, (v * dW + w, p, v0 * dW + w0),
                               a * b * z)
    return YDModule(H, tensor_labels(V.labels, W.labels), coaction,
                    name=_tensor_name(V, W))


def _tensor_name(V: YDModule, W: YDModule) -> str | None:
    if V.name and W.name:
        return f'({V.name}⊗{W.name})'
    return None


def yd_tensor(V: YDModule, W: YDModule) -> YDModule:
    """
    The tensor product in the category of Yetter-Drinfeld modules.

    The action is

        h⊳(v⊗w) = ω(h₁,v₋₁,w₋₂) ω⁻¹((h₂⊳v₀)₋₂,h₃,w₋₁)
                  ω((h₂⊳v₀)₋₁,(h₄⊳w₀)₋₁,h₅) (h₂⊳v₀)₀ ⊗ (h₄⊳w₀)₀.
    """
    H = _require_same_base(V, W)
    if not (V.has_action and W.has_action):
        raise PreconditionError('Both factors need an action.')
    plain = comodule_tensor(V, W)
    dW = W.dim
    action: dict = {}
    for h in range(H.dim):
        splits = H.delta_n(h, 5)
        for v, w in product(range(V.dim), range(dW)):
            target = v * dW + w
            for (h1, h2, h3, h4, h5), c in splits:
                for (v1, v0), a in V.co(v):
                    for (w2, w1, w0), b in W.co_n(w, 2):
                        first = H.w(h1, v1, w2)
                        if not first:
                            continue
                        scale = c * a * b * first
                        for p, x in V.act(h2, v0).items():
                            for (p2, p1, p0), y in V.co_n(p, 2):
                                second = H.w_inv(p2, h3, w1)
                                if not second:
                                    continue
                                for q, z in W.act(h4, w0).items():
                                    for (q1, q0), u in W.co(q):
                                        third = H.w(p1, q1, h5)
                                        accumulate(
                                            action,
                                            (h, target, p0 * dW + q0),
                                            scale * x * y * second * z * u
                                            * third)
    logger.debug(f'Tensor of {V!r} and {W!r}: {len(action)} action '
                 f'entries.')
    return YDModule(H, plain.labels, plain.coaction, action,
                    name=plain.name)


def yd_braiding(V: YDModule, W: YDModule) -> DomainMatrix:
    """
    ``c(v⊗w) = (v₋₁⊳w)⊗v₀`` as a matrix ``V⊗W → W⊗V``.
    """
    H = _require_same_base(V, W)
    dV, dW = V.dim, W.dim
    columns = []
    for v, w in product(range(dV), range(dW)):
        image: Vec = {}
        for (h, v0), a in V.co(v):
            for q, z in W.act(h, w).items():
                accumulate(image, q * dV + v0, a * z)
        columns.append(image)
    return from_columns(columns, dV * dW, H.field)


def yd_associator(U: YDModule, V: YDModule, W: YDModule,
                  inverse: bool = False) -> DomainMatrix:
    """
    The associativity constraint ``(U⊗V)⊗W → U⊗(V⊗W)``.

    With ``inverse=True`` the factor is ω instead of ω⁻¹.
    """
    H = _require_same_base(U, V, W)
    dV, dW = V.dim, W.dim
    columns = []
    for u, v, w in product(range(U.dim), range(dV), range(dW)):
        image: Vec = {}
        for (g, u0), a in U.co(u):
            for (h, v0), b in V.co(v):
                for (k, w0), c in W.co(w):
                    factor = H.w(g, h, k) if inverse else H.w_inv(g, h, k)
                    accumulate(image, (u0 * dV + v0) * dW + w0,
                               a * b * c * factor)
        columns.append(image)
    return from_columns(columns, U.dim * dV * dW, H.field)


# -- checks -------------------------------------------------------------------

def _comodule_checks(V: YDModule):
    H = V.H

    def coassociativity() -> Witness | None:
        for v in range(V.dim):
            lhs: dict = {}
            for (h, w), c in V.co(v):
                for (a, b), d in H.comult(h):
                    accumulate(lhs, (a, b, w), c * d)
            rhs: dict = {}
            for (h, w), c in V.co(v):
                for (g, u), d in V.co(w):
                    accumulate(rhs, (h, g, u), c * d)
            if lhs != rhs:
                labels = [H.labels, H.labels, V.labels]
                return Witness(at=[V.labels[v]],
                               lhs=format_vector(lhs, labels, V.field),
                               rhs=format_vector(rhs, labels, V.field),
                               message='(Δ⊗V)ρ ≠ (H⊗ρ)ρ')
        return None

    def counit() -> Witness | None:
        for v in range(V.dim):
            image: Vec = {}
            for (h, w), c in V.co(v):
                accumulate(image, w, c * H.eps(h))
            if image != {v: V.field.one}:
                return Witness(at=[V.labels[v]], lhs=V.format(image),
                               rhs=V.labels[v], message='ε(v₋₁)v₀ ≠ v')
        return None

    return [('coaction coassociative', coassociativity),
            ('coaction counital', counit)]


def _unit_action(V: YDModule) -> Witness | None:
    H = V.H
    for v in range(V.dim):
        image = V.act_vec(H.one, {v: V.field.one})
        if image != {v: V.field.one}:
            return Witness(at=[V.labels[v]], lhs=V.format(image),
                           rhs=V.labels[v], message='1⊳v ≠ v')
    return None


def _quasi_associativity(V: YDModule) -> Witness | None:
    """
    (hl)⊳v = ω⁻¹(h₁,l₁,v₋₁) ω(h₂,(l₂⊳v₀)₋₁,l₃)
             ω⁻¹((h₃⊳(l₂⊳v₀)₀)₋₁,h₄,l₄) (h₃⊳(l₂⊳v₀)₀)₀
    """
    H = V.H
    n = H.dim
    for h, l, v in product(range(n), range(n), range(V.dim)):
        lhs = V.act_vec(H.mul_basis(h, l), {v: V.field.one})
        rhs: Vec = {}
        for (h1, h2, h3, h4), a in H.delta_n(h, 4):
            for (l1, l2, l3, l4), b in H.delta_n(l, 4):
                for (v1, v0), c in V.co(v):
                    first = H.w_inv(h1, l1, v1)
                    if not first:
                        continue
                    for q, x in V.act(l2, v0).items():
                        for (q1, q0), y in V.co(q):
                            second = H.w(h2, q1, l3)
                            if not second:
                                continue
                            for r, z in V.act(h3, q0).items():
                                for (r1, r0), u in V.co(r):
                                    third = H.w_inv(r1, h4, l4)
                                    accumulate(rhs, r0,
                                               a * b * c * first * x * y
                                               * second * z * u * third)
        if lhs != rhs:
            return Witness(at=[H.labels[h], H.labels[l], V.labels[v]],
                           lhs=V.format(lhs), rhs=V.format(rhs),
                           message='(hl)⊳v differs from the twisted '
                                   'iterated action')
    return None


def _left_handed(V: YDModule) -> Witness | None:
    """
    ω(h₁,l₁,v₋₁) ω(((h₂l₂)⊳v₀)₋₁,h₃,l₃) ((h₂l₂)⊳v₀)₀
        = ω(h₁,(l₁⊳v)₋₁,l₂) h₂⊳(l₁⊳v)₀
    """
    H = V.H
    n = H.dim
    for h, l, v in product(range(n), range(n), range(V.dim)):
        lhs: Vec = {}
        for (h1, h2, h3), a in H.delta_n(h, 3):
            for (l1, l2, l3), b in H.delta_n(l, 3):
                for (v1, v0), c in V.co(v):
                    first = H.w(h1, l1, v1)
                    if not first:
                        continue
                    acted = V.act_vec(H.mul_basis(h2, l2), {v0: V.field.one})
                    for q, x in acted.items():
                        for (q1, q0), y in V.co(q):
                            accumulate(lhs, q0, a * b * c * first * x * y
                                       * H.w(q1, h3, l3))
        rhs: Vec = {}
        for (h1, h2), a in H.comult(h):
            for (l1, l2), b in H.comult(l):
                for q, x in V.act(l1, v).items():
                    for (q1, q0), y in V.co(q):
                        factor = H.w(h1, q1, l2)
                        if not factor:
                            continue
                        for r, z in V.act(h2, q0).items():
                            accumulate(rhs, r, a * b * x * y * factor * z)
        if lhs != rhs:
            return Witness(at=[H.labels[h], H.labels[l], V.labels[v]],
                           lhs=V.format(lhs), rhs=V.format(rhs))
    return None


def _compatibility(V: YDModule) -> Witness | None:
    """
    (h₁⊳v)₋₁h₂ ⊗ (h₁⊳v)₀ = h₁v₋₁ ⊗ h₂⊳v₀
    """
    H = V.H
    for h, v in product(range(H.dim), range(V.dim)):
        lhs: dict = {}
        rhs: dict = {}
        for (h1, h2), a in H.comult(h):
            for q, x in V.act(h1, v).items():
                for (g, q0), y in V.co(q):
                    for p, z in H.mul_basis(g, h2).items():
                        accumulate(lhs, (p, q0), a * x * y * z)
            for (g, v0), b in V.co(v):
                for p, z in H.mul_basis(h1, g).items():
                    for r, u in V.act(h2, v0).items():
                        accumulate(rhs, (p, r), a * b * z * u)
        if lhs != rhs:
            return Witness(at=[H.labels[h], V.labels[v]],
                           lhs=V.format_coaction(lhs),
                           rhs=V.format_coaction(rhs),
                           message='(h₁⊳v)₋₁h₂⊗(h₁⊳v)₀ ≠ h₁v₋₁⊗h₂⊳v₀')
    return None


def check_comodule(V: YDModule, name: str | None = None) -> Report:
    return CheckSuite(name or repr(V), _comodule_checks(V)).run()


def check_yd(V: YDModule, name: str | None = None) -> Report:
    """
    All Yetter-Drinfeld axioms on every basis tuple.

    Besides the axioms proper, the equivalent left-handed form of the
    quasi-associativity is evaluated as a record of its own.
    """
    if not V.has_action:
        raise PreconditionError(f'{V!r} carries no action.')
    checks = _comodule_checks(V) + [
        ('unit action', lambda: _unit_action(V)),
        ('quasi-associativity', lambda: _quasi_associativity(V)),
        ('compatibility', lambda: _compatibility(V)),
        ('left-handed quasi-associativity', lambda: _left_handed(V)),
    ]
    return CheckSuite(name or repr(V), checks).run()


def check_yd_morphism(f: DomainMatrix, V: YDModule, W: YDModule) -> Report:
    """
    Colinearity and, when both carry actions, linearity of ``f: V → W``.
    """
    H = _require_same_base(V, W)
    if f.shape != (W.dim, V.dim):
        raise ShapeError(f'Map of shape {f.shape} from dimension {V.dim} '
                         f'to {W.dim}.')
    images = columns_of(f)

    def colinear() -> Witness | None:
        for v in range(V.dim):
            lhs = W.coact_vec(images[v])
            rhs: dict = {}
            for (h, v0), a in V.co(v):
                for w, b in images[v0].items():
                    accumulate(rhs, (h, w), a * b)
            if lhs != rhs:
                return Witness(at=[V.labels[v]],
                               lhs=W.format_coaction(lhs),
                               rhs=W.format_coaction(rhs),
                               message='ρf ≠ (H⊗f)ρ')
        return None

    def linear() -> Witness | None:
        for h, v in product(range(H.dim), range(V.dim)):
            lhs: Vec = {}
            for u, a in V.act(h, v).items():
                for w, b in images[u].items():
                    accumulate(lhs, w, a * b)
            rhs = W.act_vec({h: H.field.one}, images[v])
            if lhs != rhs:
                return Witness(at=[H.labels[h], V.labels[v]],
                               lhs=W.format(lhs), rhs=W.format(rhs),
                               message='f(h⊳v) ≠ h⊳f(v)')
        return None

    checks = [('colinear', colinear)]
    if V.has_action and W.has_action:
        checks.append(('linear', linear))
    return CheckSuite(f'{V!r} → {W!r}', checks).run()


def is_yd_morphism(f: DomainMatrix, V: YDModule, W: YDModule) -> bool:
    return check_yd_morphism(f, V, W).passed


def _matrix_witness(A: DomainMatrix, B: DomainMatrix,
                    source: Sequence[str], target: Sequence[str],
                    field, message: str) -> Witness:
    left, right = columns_of(A), columns_of(B)
    for j, (a, b) in enumerate(zip(left, right)):
        if a != b:
            return Witness(at=[source[j]],
                           lhs=format_vector(a, target, field),
                           rhs=format_vector(b, target, field),
                           message=message)
    return Witness(message=message)


def _pentagon(U: YDModule, V: YDModule, W: YDModule,
              X: YDModule) -> Witness | None:
    field = U.field
    UV, WX = comodule_tensor(U, V), comodule_tensor(W, X)
    VW = comodule_tensor(V, W)
    lhs = compose(yd_associator(U, V, WX), yd_associator(UV, W, X))
    rhs = compose(kron(identity(U.dim, field), yd_associator(V, W, X),
                       field),
                  yd_associator(U, VW, X),
                  kron(yd_associator(U, V, W), identity(X.dim, field),
                       field))
    if matrices_equal(lhs, rhs):
        return None
    labels = tensor_labels(U.labels, V.labels, W.labels, X.labels)
    return _matrix_witness(lhs, rhs, labels, labels, U.field,
                           'pentagon does not commute')


def check_pentagon(U: YDModule, V: YDModule, W: YDModule,
                   X: YDModule) -> Report:
    return CheckSuite(f'constraints of {U!r}, {V!r}, {W!r}, {X!r}',
                      [('pentagon', lambda: _pentagon(U, V, W, X))]).run()


def check_triangle(U: YDModule, V: YDModule) -> Report:
    """
    ``(U⊗l)∘a_{U,k,V} = r⊗V``; both unit constraints are identities
    under ``U⊗k = U``.
    """
    k = unit_module(U.H)

    def triangle() -> Witness | None:
        a = yd_associator(U, k, V)
        eye = identity(U.dim * V.dim, U.field)
        if matrices_equal(a, eye):
            return None
        labels = tensor_labels(U.labels, k.labels, V.labels)
        return _matrix_witness(a, eye, labels, labels, U.field,
                               'a(U,k,V) is not the identity')

    return CheckSuite(f'constraints of {U!r}, {V!r}',
                      [('triangle', triangle)]).run()


# -- braided bialgebras -------------------------------------------------------

class BraidedBialgebra:
    """
    A bialgebra in the category of Yetter-Drinfeld modules.

    ``mult[r, s, t]`` is the coefficient of ``t`` in ``rs`` and
    ``delta[r, s, t]`` the coefficient of ``s⊗t`` in ``Δ(r)``.
    """

    def __init__(self, carrier: YDModule,
                 mult: SparseTensor | dict, unit: Vec,
                 delta: SparseTensor | dict, counit: Vec | Sequence,
                 name: str | None = None):
        self.logger = logging.getLogger(__name__)
        d = carrier.dim
        field = carrier.field
        if not isinstance(mult, SparseTensor):
            mult = SparseTensor((d, d, d), mult, field)
        if not isinstance(delta, SparseTensor):
            delta = SparseTensor((d, d, d), delta, field)
        if mult.shape != (d, d, d) or delta.shape != (d, d, d):
            raise ShapeError(f'Structure tensors must have shape '
                             f'{(d, d, d)}.')
        if not isinstance(counit, dict):
            counit = dict(enumerate(counit))
        self.carrier = carrier
        self.H = carrier.H
        self.field = field
        self.mult = mult
        self.delta = delta
        self.unit = {i: field(v) for i, v in unit.items() if v}
        self.counit = {i: field(v) for i, v in counit.items() if v}
        self.name = name or carrier.name
        self._columns: list[Vec] | None = None
        self._comult: list[list] = [[] for _ in range(d)]
        for (r, s, t), value in delta.items():
            self._comult[r].append(((s, t), value))

    def __repr__(self):
        name = f'{self.name}, ' if self.name else ''
        return f'BraidedBialgebra({name}dim={self.dim})'

    @property
    def dim(self) -> int:
        return self.carrier.dim

    @property
    def labels(self) -> list[str]:
        return self.carrier.labels

    @property
    def mult_matrix(self) -> DomainMatrix:
        """``R⊗R → R``."""
        return self.mult.to_matrix([2], [0, 1])

    @property
    def delta_matrix(self) -> DomainMatrix:
        """``R → R⊗R``."""
        return self.delta.to_matrix([1, 2], [0])

    def mul(self, a: Vec, b: Vec) -> Vec:
        out: Vec = {}
        d = self.dim
        if self._columns is None:
            self._columns = columns_of(self.mult_matrix)
        columns = self._columns
        for i, x in a.items():
            for j, y in b.items():
                for k, z in columns[i * d + j].items():
                    accumulate(out, k, x * y * z)
        return out

    def comult(self, r: int) -> list[tuple[tuple[int, int], Scalar]]:
        return self._comult[r]

    def eps(self, r: int) -> Scalar:
        return self.counit.get(r, self.field.zero)


def delta_tensor_square(R: BraidedBialgebra) -> DomainMatrix:
    """
    The comultiplication of ``R⊗R`` in closed form, as a matrix
    ``R⊗R → (R⊗R)⊗(R⊗R)``.

    With ``Δ(r) = r¹⊗r²`` and ``Δ(s) = s¹⊗s²``:

        ω⁻¹(r¹₋₂, r²₋₅, s¹₋₂s²₋₄) ω(r²₋₄, s¹₋₁, s²₋₃)
        ω⁻¹((r²₋₃⊳s¹₀)₋₂, r²₋₂, s²₋₂) ω(r¹₋₁, (r²₋₃⊳s¹₀)₋₁, r²₋₁s²₋₁)
        [r¹₀⊗(r²₋₃⊳s¹₀)₀]⊗[r²₀⊗s²₀]
    """
    V, H = R.carrier, R.H
    d = R.dim
    columns = []
    for r, s in product(range(d), repeat=2):
        image: Vec = {}
        for (r1, r2), x1 in R.comult(r):
            for (s1, s2), x2 in R.comult(s):
                for (A2, A1, a0), y1 in V.co_n(r1, 2):
                    for (B5, B4, B3, B2, B1, b0), y2 in V.co_n(r2, 5):
                        for (C2, C1, c0), y3 in V.co_n(s1, 2):
                            for (D4, D3, D2, D1, d0), y4 in V.co_n(s2, 4):
                                first = omega(H, A2, B5,
                                              H.mul_basis(C2, D4),
                                              inverse=True)
                                if not first:
                                    continue
                                second = H.w(B4, C1, D3)
                                if not second:
                                    continue
                                scale = x1 * x2 * y1 * y2 * y3 * y4 * \
                                    first * second
                                for t, z in V.act(B3, c0).items():
                                    for (T2, T1, t0), u in V.co_n(t, 2):
                                        third = H.w_inv(T2, B2, D2)
                                        if not third:
                                            continue
                                        fourth = omega(H, A1, T1,
                                                       H.mul_basis(B1, D1))
                                        index = ((a0 * d + t0) * d + b0) \
                                            * d + d0
                                        accumulate(image, index,
                                                   scale * z * u * third
                                                   * fourth)
        columns.append(image)
    return from_columns(columns, d ** 4, R.field)


def delta_tensor_square_composite(R: BraidedBialgebra) -> DomainMatrix:
    """
    ``a⁻¹_{R,R,R⊗R}(R⊗a_{R,R,R})(R⊗(c⊗R))(R⊗a⁻¹_{R,R,R})a_{R,R,R⊗R}(Δ⊗Δ)``.
    """
    V, field = R.carrier, R.field
    d = R.dim
    VV = comodule_tensor(V, V)
    eye = identity(d, field)
    delta = R.delta_matrix
    return compose(
        yd_associator(V, V, VV, inverse=True),
        kron(eye, yd_associator(V, V, V), field),
        kron(eye, kron(yd_braiding(V, V), eye, field), field),
        kron(eye, yd_associator(V, V, V, inverse=True), field),
        yd_associator(V, V, VV),
        kron(delta, delta, field))


class BraidedBialgebraChecker(BaseChecker):
    """
    The braided bialgebra axioms relative to the constraint of the
    category, on all basis tuples.
    """

    def __init__(self, R: BraidedBialgebra):
        self.logger = logging.getLogger(__name__)
        self.R = R
        self._carrier: Report | None = None

    @property
    def subject(self) -> str:
        return repr(self.R)

    def checks(self):
        yield 'multiplication is a morphism', self._mult_morphism
        yield 'unit is a morphism', self._unit_morphism
        yield 'comultiplication is a morphism', self._delta_morphism
        yield 'counit is a morphism', self._counit_morphism
        yield 'associativity', self._associativity
        yield 'unitality', self._unitality
        yield 'coassociativity', self._coassociativity
        yield 'counitality', self._counitality
        yield 'unit comultiplicative', self._unit_comultiplicative
        yield 'counit multiplicative', self._counit_multiplicative
        yield 'compatibility', self._compatibility

    def _require(self):
        if self._carrier is None:
            self._carrier = check_yd(self.R.carrier)
        if not self._carrier.passed:
            raise PreconditionError(
                f'the carrier is not a Yetter-Drinfeld module: '
                f'{self._carrier.first_failure.name} fails', self._carrier)

    def _morphism(self, f: DomainMatrix, V: YDModule,
                  W: YDModule) -> Witness | None:
        report = check_yd_morphism(f, V, W)
        failure = report.first_failure
        if failure is None:
            return None
        return failure.witness

    def _mult_morphism(self) -> Witness | None:
        self._require()
        V = self.R.carrier
        return self._morphism(self.R.mult_matrix, yd_tensor(V, V), V)

    def _unit_morphism(self) -> Witness | None:
        self._require()
        R = self.R
        unit = from_columns([R.unit], R.dim, R.field)
        return self._morphism(unit, unit_module(R.H), R.carrier)

    def _delta_morphism(self) -> Witness | None:
        self._require()
        V = self.R.carrier
        return self._morphism(self.R.delta_matrix, V, yd_tensor(V, V))

    def _counit_morphism(self) -> Witness | None:
        self._require()
        R = self.R
        counit = from_columns([{0: R.eps(r)} if R.eps(r) else {}
                               for r in range(R.dim)], 1, R.field)
        return self._morphism(counit, R.carrier, unit_module(R.H))

    def _associativity(self) -> Witness | None:
        R, V, H = self.R, self.R.carrier, self.R.H
        one = R.field.one
        for r, s, t in product(range(R.dim), repeat=3):
            lhs = R.mul(R.mul({r: one}, {s: one}), {t: one})
            rhs: Vec = {}
            for (g, r0), a in V.co(r):
                for (h, s0), b in V.co(s):
                    for (k, t0), c in V.co(t):
                        factor = H.w_inv(g, h, k)
                        if factor:
                            inner = R.mul({r0: one},
                                          R.mul({s0: one}, {t0: one}))
                            for p, z in inner.items():
                                accumulate(rhs, p, a * b * c * factor * z)
            if lhs != rhs:
                return Witness(at=[R.labels[i] for i in (r, s, t)],
                               lhs=V.format(lhs), rhs=V.format(rhs),
                               message='(rs)t ≠ ω⁻¹(r₋₁,s₋₁,t₋₁)r₀(s₀t₀)')
        return None

    def _unitality(self) -> Witness | None:
        R = self.R
        for r in range(R.dim):
            e = {r: R.field.one}
            for image in (R.mul(R.unit, e), R.mul(e, R.unit)):
                if image != e:
                    return Witness(at=[R.labels[r]],
                                   lhs=R.carrier.format(image),
                                   rhs=R.labels[r], message='1r ≠ r or '
                                                            'r1 ≠ r')
        return None

    def _coassociativity(self) -> Witness | None:
        R, field = self.R, self.R.field
        V = R.carrier
        eye = identity(R.dim, field)
        delta = R.delta_matrix
        lhs = compose(yd_associator(V, V, V), kron(delta, eye, field),
                      delta)
        rhs = compose(kron(eye, delta, field), delta)
        if matrices_equal(lhs, rhs):
            return None
        return _matrix_witness(lhs, rhs, R.labels,
                               tensor_labels(R.labels, R.labels, R.labels),
                               field, 'a(Δ⊗R)Δ ≠ (R⊗Δ)Δ')

    def _counitality(self) -> Witness | None:
        R = self.R
        for r in range(R.dim):
            left: Vec = {}
            right: Vec = {}
            for (s, t), c in R.comult(r):
                accumulate(left, t, c * R.eps(s))
                accumulate(right, s, c * R.eps(t))
            e = {r: R.field.one}
            if left != e or right != e:
                bad = left if left != e else right
                return Witness(at=[R.labels[r]], lhs=R.carrier.format(bad),
                               rhs=R.labels[r],
                               message='(ε⊗R)Δ ≠ R or (R⊗ε)Δ ≠ R')
        return None

    def _unit_comultiplicative(self) -> Witness | None:
        R = self.R
        image: dict = {}
        for i, x in R.unit.items():
            for (s, t), c in R.comult(i):
                accumulate(image, (s, t), x * c)
        square = {(i, j): x * y for i, x in R.unit.items()
                  for j, y in R.unit.items()}
        counit = sum((x * R.eps(i) for i, x in R.unit.items()),
                     R.field.zero)
        if image != square or counit != R.field.one:
            return Witness(at=['1'],
                           lhs=format_vector(image, R.labels, R.field),
                           rhs=format_vector(square, R.labels, R.field),
                           message='Δ(1) ≠ 1⊗1 or ε(1) ≠ 1')
        return None

    def _counit_multiplicative(self) -> Witness | None:
        R = self.R
        one = R.field.one
        for r, s in product(range(R.dim), repeat=2):
            product_ = R.mul({r: one}, {s: one})
            lhs = sum((v * R.eps(i) for i, v in product_.items()),
                      R.field.zero)
            rhs = R.eps(r) * R.eps(s)
            if lhs != rhs:
                return Witness(at=[R.labels[r], R.labels[s]],
                               lhs=R.field.format(lhs),
                               rhs=R.field.format(rhs))
        return None

    def _compatibility(self) -> Witness | None:
        self._require()
        R = self.R
        lhs = compose(R.delta_matrix, R.mult_matrix)
        rhs = compose(kron(R.mult_matrix, R.mult_matrix, R.field),
                      delta_tensor_square(R))
        if matrices_equal(lhs, rhs):
            return None
        labels = tensor_labels(R.labels, R.labels)
        return _matrix_witness(lhs, rhs, labels, labels, R.field,
                               'Δ_R m_R ≠ (m_R⊗m_R)Δ_{R⊗R}')


def check_braided_bialgebra(R: BraidedBialgebra) -> Report:
    return BraidedBialgebraChecker(R).run()


def delta_agreement(R: BraidedBialgebra) -> bool:
    """
    Whether the closed form of Δ_{R⊗R} equals its composite.
    """
    return matrices_equal(delta_tensor_square(R),
                          delta_tensor_square_composite(R))
