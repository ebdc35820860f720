"""
Bicomodules with a right action over a dual quasi-bialgebra H, the
functors F and G relating them to Yetter-Drinfeld modules, the projector
τ and the monoidal structure maps of the tensor product over H (⊗_H) and
the cotensor product (⧠_H).

A trimodule M has a left coaction ``m₋₁⊗m₀``, a right coaction
``m₀⊗m₁``, a right action ``mh`` and optionally a left action ``hm``.
The right action is associative only up to the bicomodule constraint:

    (mh)l = ω⁻¹(m₋₁,h₁,l₁) m₀(h₂l₂) ω(m₁,h₃,l₃).

``M⊗_H N`` is the quotient of ``M⊗N`` by a fixed echelon basis of its
relations and ``M⧠_H N`` the kernel of ``ρʳ⊗N − M⊗ρˡ``, so every map
between these spaces is an exact matrix.
"""
import logging
from itertools import product
from typing import Callable, Sequence

from sympy.polys.matrices import DomainMatrix

from dqb_workbench.base import (CheckSuite, PreconditionError,
                                ShapeError)
from dqb_workbench.dqb import DualQuasiBialgebra
from dqb_workbench.exact import (Quotient, SparseTensor, Subspace,
                                 Vec, accumulate, columns_of, compose,
                                 field_of, from_columns, identity, inverse,
                                 is_identity, kernel_vectors, kron,
                                 matrices_equal, rows_of)
from dqb_workbench.schemas import Report, Witness
from dqb_workbench.utils import dedupe_labels, format_vector, tensor_labels
from dqb_workbench.yd import (YDModule, check_yd_morphism, comodule_tensor,
                              unit_module, yd_associator, yd_braiding,
                              yd_tensor)

logger = logging.getLogger(__name__)


class Trimodule:
    """
    A bicomodule with a right and optionally a left action.

    Args:
        H:      The base dual quasi-bialgebra.
        labels: Basis labels.
        lco:    ``lco[m, h, p]``, coefficient of ``e_h⊗e_p`` in ``ρˡ(e_m)``.
        rco:    ``rco[m, p, h]``, coefficient of ``e_p⊗e_h`` in ``ρʳ(e_m)``.
        ract:   ``ract[m, h, p]``, coefficient of ``e_p`` in ``e_m·e_h``.
        lact:   ``lact[h, m, p]``, coefficient of ``e_p`` in ``e_h·e_m``.
        name:   Optional display name.
    """

    def __init__(self, H: DualQuasiBialgebra, labels: Sequence[str],
                 lco: SparseTensor | dict, rco: SparseTensor | dict,
                 ract: SparseTensor | dict,
                 lact: SparseTensor | dict | None = None,
                 name: str | None = None):
        self.logger = logging.getLogger(__name__)
        self.H = H
        self.field = H.field
        self.labels = list(labels)
        self.name = name
        d, n = len(self.labels), H.dim

        def tensor(value, shape, what):
            if not isinstance(value, SparseTensor):
                value = SparseTensor(shape, value, H.field)
            if value.shape != shape:
                raise ShapeError(f'{what} of shape {value.shape}, expected '
                                 f'{shape}.')
            return value

        self.lco_tensor = tensor(lco, (d, n, d), 'Left coaction')
        self.rco_tensor = tensor(rco, (d, d, n), 'Right coaction')
        self.ract_tensor = tensor(ract, (d, n, d), 'Right action')
        self.lact_tensor = None if lact is None else \
            tensor(lact, (n, d, d), 'Left action')

        self._lco: list[list] = [[] for _ in range(d)]
        for (m, h, p), v in self.lco_tensor.items():
            self._lco[m].append(((h, p), v))
        self._rco: list[list] = [[] for _ in range(d)]
        for (m, p, h), v in self.rco_tensor.items():
            self._rco[m].append(((p, h), v))
        self._ract: dict[tuple[int, int], Vec] = {}
        for (m, h, p), v in self.ract_tensor.items():
            self._ract.setdefault((m, h), {})[p] = v
        self._lact: dict[tuple[int, int], Vec] = {}
        if self.lact_tensor is not None:
            for (h, m, p), v in self.lact_tensor.items():
                self._lact.setdefault((h, m), {})[p] = v
        self._lco_n: dict = {}
        self._rco_n: dict = {}

    @classmethod
    def from_functions(cls, H: DualQuasiBialgebra, labels: Sequence[str],
                       lco: Callable[[int], dict],
                       rco: Callable[[int], dict],
                       ract: Callable[[int, int], Vec],
                       lact: Callable[[int, int], Vec] | None = None,
                       name: str | None = None) -> 'Trimodule':
        """
        Tabulate structures given on basis elements.
        """
        d, n = len(labels), H.dim
        lco_t, rco_t, ract_t = {}, {}, {}
        lact_t = None if lact is None else {}
        for m in range(d):
            for (h, p), v in lco(m).items():
                lco_t[(m, h, p)] = v
            for (p, h), v in rco(m).items():
                rco_t[(m, p, h)] = v
            for h in range(n):
                for p, v in ract(m, h).items():
                    ract_t[(m, h, p)] = v
                if lact is not None:
                    for p, v in lact(h, m).items():
                        lact_t[(h, m, p)] = v
        return cls(H, labels, lco_t, rco_t, ract_t, lact_t, name)

    def __repr__(self):
        name = f'{self.name}, ' if self.name else ''
        return f'Trimodule({name}dim={self.dim})'

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def has_left_action(self) -> bool:
        return self.lact_tensor is not None

    def lco(self, m: int) -> list:
        return self._lco[m]

    def rco(self, m: int) -> list:
        return self._rco[m]

    def lco_n(self, m: int, k: int) -> list:
        """``m₋ₖ⊗...⊗m₋₁⊗m₀`` as index tuples."""
        key = (m, k)
        if key not in self._lco_n:
            out: dict = {}
            for (h, p), c in self._lco[m]:
                for hs, d in self.H.delta_n(h, k):
                    accumulate(out, hs + (p,), c * d)
            self._lco_n[key] = sorted(out.items())
        return self._lco_n[key]

    def rco_n(self, m: int, k: int) -> list:
        """``m₀⊗m₁⊗...⊗mₖ`` as index tuples."""
        key = (m, k)
        if key not in self._rco_n:
            out: dict = {}
            for (p, h), c in self._rco[m]:
                for hs, d in self.H.delta_n(h, k):
                    accumulate(out, (p,) + hs, c * d)
            self._rco_n[key] = sorted(out.items())
        return self._rco_n[key]

    def bico(self, m: int, left: int = 1, right: int = 1) -> list:
        """``m₋ₗ⊗...⊗m₋₁⊗m₀⊗m₁⊗...⊗mᵣ`` as index tuples."""
        out: dict = {}
        for key, c in self.lco_n(m, left):
            for tail, d in self.rco_n(key[-1], right):
                accumulate(out, key[:-1] + tail, c * d)
        return sorted(out.items())

    def ract(self, m: int, h: int) -> Vec:
        return self._ract.get((m, h), {})

    def lact(self, h: int, m: int) -> Vec:
        if not self.has_left_action:
            raise PreconditionError(f'{self!r} has no left action.')
        return self._lact.get((h, m), {})

    def ract_vec(self, x: Vec, h: Vec) -> Vec:
        out: Vec = {}
        for m, a in x.items():
            for g, b in h.items():
                for p, c in self.ract(m, g).items():
                    accumulate(out, p, a * b * c)
        return out

    def lact_vec(self, h: Vec, x: Vec) -> Vec:
        out: Vec = {}
        for g, a in h.items():
            for m, b in x.items():
                for p, c in self.lact(g, m).items():
                    accumulate(out, p, a * b * c)
        return out

    def lco_vec(self, x: Vec) -> dict:
        out: dict = {}
        for m, a in x.items():
            for key, c in self._lco[m]:
                accumulate(out, key, a * c)
        return out

    def rco_vec(self, x: Vec) -> dict:
        out: dict = {}
        for m, a in x.items():
            for key, c in self._rco[m]:
                accumulate(out, key, a * c)
        return out

    def format(self, vec: dict) -> str:
        return format_vector(vec, self.labels, self.field)


def regular_trimodule(H: DualQuasiBialgebra) -> Trimodule:
    """
    H with Δ as both coactions and the multiplication as both actions.
    """
    def lco(m):
        return dict(H.comult(m))

    return Trimodule.from_functions(
        H, H.labels, lco, lco, lambda m, h: H.mul_basis(m, h),
        lambda h, m: H.mul_basis(h, m), name='H')


# -- checks -------------------------------------------------------------------

def _coaction_checks(M: Trimodule) -> list:
    H = M.H

    def left_coassociative():
        for m in range(M.dim):
            lhs: dict = {}
            for (h, p), c in M.lco(m):
                for (a, b), d in H.comult(h):
                    accumulate(lhs, (a, b, p), c * d)
            rhs: dict = {}
            for (h, p), c in M.lco(m):
                for (g, q), d in M.lco(p):
                    accumulate(rhs, (h, g, q), c * d)
            if lhs != rhs:
                return _tensor_witness(M, m, lhs, rhs, [H, H, M])
        return None

    def right_coassociative():
        for m in range(M.dim):
            lhs: dict = {}
            for (p, h), c in M.rco(m):
                for (a, b), d in H.comult(h):
                    accumulate(lhs, (p, a, b), c * d)
            rhs: dict = {}
            for (p, h), c in M.rco(m):
                for (q, g), d in M.rco(p):
                    accumulate(rhs, (q, g, h), c * d)
            if lhs != rhs:
                return _tensor_witness(M, m, lhs, rhs, [M, H, H])
        return None

    def counital():
        for m in range(M.dim):
            left: Vec = {}
            right: Vec = {}
            for (h, p), c in M.lco(m):
                accumulate(left, p, c * H.eps(h))
            for (p, h), c in M.rco(m):
                accumulate(right, p, c * H.eps(h))
            e = {m: M.field.one}
            if left != e or right != e:
                return Witness(at=[M.labels[m]],
                               lhs=M.format(left if left != e else right),
                               rhs=M.labels[m])
        return None

    def bicomodule():
        for m in range(M.dim):
            lhs: dict = {}
            for (h, p), c in M.lco(m):
                for (q, g), d in M.rco(p):
                    accumulate(lhs, (h, q, g), c * d)
            rhs: dict = {}
            for (p, g), c in M.rco(m):
                for (h, q), d in M.lco(p):
                    accumulate(rhs, (h, q, g), c * d)
            if lhs != rhs:
                return _tensor_witness(M, m, lhs, rhs, [H, M, H])
        return None

    return [('left coaction coassociative', left_coassociative),
            ('right coaction coassociative', right_coassociative),
            ('coactions counital', counital),
            ('coactions commute', bicomodule)]


def _tensor_witness(M: Trimodule, m: int, lhs: dict, rhs: dict,
                    slots: list) -> Witness:
    labels = [s.labels for s in slots]
    return Witness(at=[M.labels[m]],
                   lhs=format_vector(lhs, labels, M.field),
                   rhs=format_vector(rhs, labels, M.field))


def _right_action_checks(M: Trimodule) -> list:
    H = M.H
    n = H.dim

    def quasi_associative():
        for m, h, l in product(range(M.dim), range(n), range(n)):
            lhs = M.ract_vec(M.ract(m, h), {l: M.field.one})
            rhs: Vec = {}
            for (g, m0, k), a in M.bico(m):
                for (h1, h2, h3), b in H.delta_n(h, 3):
                    for (l1, l2, l3), c in H.delta_n(l, 3):
                        factor = H.w_inv(g, h1, l1) * H.w(k, h3, l3)
                        if not factor:
                            continue
                        for p, x in M.ract_vec({m0: M.field.one},
                                               H.mul_basis(h2, l2)).items():
                            accumulate(rhs, p, a * b * c * factor * x)
            if lhs != rhs:
                return Witness(at=[M.labels[m], H.labels[h], H.labels[l]],
                               lhs=M.format(lhs), rhs=M.format(rhs),
                               message='(mh)l ≠ ω⁻¹(m₋₁,h₁,l₁)m₀(h₂l₂)'
                                       'ω(m₁,h₃,l₃)')
        return None

    def unital():
        for m in range(M.dim):
            image = M.ract_vec({m: M.field.one}, H.one)
            if image != {m: M.field.one}:
                return Witness(at=[M.labels[m]], lhs=M.format(image),
                               rhs=M.labels[m], message='m1 ≠ m')
        return None

    def left_colinear():
        for m, h in product(range(M.dim), range(n)):
            lhs = M.lco_vec(M.ract(m, h))
            rhs: dict = {}
            for (g, m0), a in M.lco(m):
                for (h1, h2), b in H.comult(h):
                    for p, x in H.mul_basis(g, h1).items():
                        for q, y in M.ract(m0, h2).items():
                            accumulate(rhs, (p, q), a * b * x * y)
            if lhs != rhs:
                return Witness(at=[M.labels[m], H.labels[h]],
                               lhs=format_vector(lhs, [H.labels, M.labels],
                                                 M.field),
                               rhs=format_vector(rhs, [H.labels, M.labels],
                                                 M.field))
        return None

    def right_colinear():
        for m, h in product(range(M.dim), range(n)):
            lhs = M.rco_vec(M.ract(m, h))
            rhs: dict = {}
            for (m0, g), a in M.rco(m):
                for (h1, h2), b in H.comult(h):
                    for q, y in M.ract(m0, h1).items():
                        for p, x in H.mul_basis(g, h2).items():
                            accumulate(rhs, (q, p), a * b * x * y)
            if lhs != rhs:
                return Witness(at=[M.labels[m], H.labels[h]],
                               lhs=format_vector(lhs, [M.labels, H.labels],
                                                 M.field),
                               rhs=format_vector(rhs, [M.labels, H.labels],
                                                 M.field))
        return None

    return [('right action quasi-associative', quasi_associative),
            ('right action unital', unital),
            ('right action left colinear', left_colinear),
            ('right action right colinear', right_colinear)]


def _left_action_checks(M: Trimodule) -> list:
    H = M.H
    n = H.dim
    one = M.field.one

    def quasi_associative():
        for h, l, m in product(range(n), range(n), range(M.dim)):
            lhs = M.lact_vec(H.mul_basis(h, l), {m: one})
            rhs: Vec = {}
            for (g, m0, k), a in M.bico(m):
                for (h1, h2, h3), b in H.delta_n(h, 3):
                    for (l1, l2, l3), c in H.delta_n(l, 3):
                        factor = H.w_inv(h1, l1, g) * H.w(h3, l3, k)
                        if not factor:
                            continue
                        inner = M.lact(l2, m0)
                        for p, x in M.lact_vec({h2: one}, inner).items():
                            accumulate(rhs, p, a * b * c * factor * x)
            if lhs != rhs:
                return Witness(at=[H.labels[h], H.labels[l], M.labels[m]],
                               lhs=M.format(lhs), rhs=M.format(rhs),
                               message='(hl)m ≠ ω⁻¹(h₁,l₁,m₋₁)h₂(l₂m₀)'
                                       'ω(h₃,l₃,m₁)')
        return None

    def unital():
        for m in range(M.dim):
            image = M.lact_vec(H.one, {m: one})
            if image != {m: one}:
                return Witness(at=[M.labels[m]], lhs=M.format(image),
                               rhs=M.labels[m], message='1m ≠ m')
        return None

    def bimodule():
        for h, m, l in product(range(n), range(M.dim), range(n)):
            lhs = M.ract_vec(M.lact(h, m), {l: one})
            rhs: Vec = {}
            for (g, m0, k), a in M.bico(m):
                for (h1, h2, h3), b in H.delta_n(h, 3):
                    for (l1, l2, l3), c in H.delta_n(l, 3):
                        factor = H.w_inv(h1, g, l1) * H.w(h3, k, l3)
                        if not factor:
                            continue
                        inner = M.ract(m0, l2)
                        for p, x in M.lact_vec({h2: one}, inner).items():
                            accumulate(rhs, p, a * b * c * factor * x)
            if lhs != rhs:
                return Witness(at=[H.labels[h], M.labels[m], H.labels[l]],
                               lhs=M.format(lhs), rhs=M.format(rhs),
                               message='(hm)l ≠ ω⁻¹(h₁,m₋₁,l₁)h₂(m₀l₂)'
                                       'ω(h₃,m₁,l₃)')
        return None

    def left_colinear():
        for h, m in product(range(n), range(M.dim)):
            lhs = M.lco_vec(M.lact(h, m))
            rhs: dict = {}
            for (h1, h2), a in H.comult(h):
                for (g, m0), b in M.lco(m):
                    for p, x in H.mul_basis(h1, g).items():
                        for q, y in M.lact(h2, m0).items():
                            accumulate(rhs, (p, q), a * b * x * y)
            if lhs != rhs:
                return Witness(at=[H.labels[h], M.labels[m]],
                               lhs=format_vector(lhs, [H.labels, M.labels],
                                                 M.field),
                               rhs=format_vector(rhs, [H.labels, M.labels],
                                                 M.field))
        return None

    def right_colinear():
        for h, m in product(range(n), range(M.dim)):
            lhs = M.rco_vec(M.lact(h, m))
            rhs: dict = {}
            for (h1, h2), a in H.comult(h):
                for (m0, g), b in M.rco(m):
                    for q, y in M.lact(h1, m0).items():
                        for p, x in H.mul_basis(h2, g).items():
                            accumulate(rhs, (q, p), a * b * x * y)
            if lhs != rhs:
                return Witness(at=[H.labels[h], M.labels[m]],
                               lhs=format_vector(lhs, [M.labels, H.labels],
                                                 M.field),
                               rhs=format_vector(rhs, [M.labels, H.labels],
                                                 M.field))
        return None

    return [('left action quasi-associative', quasi_associative),
            ('left action unital', unital),
            ('actions compatible', bimodule),
            ('left action left colinear', left_colinear),
            ('left action right colinear', right_colinear)]


def check_trimodule(M: Trimodule, name: str | None = None) -> Report:
    """
    Bicomodule, right module and, if present, left module axioms.
    """
    checks = _coaction_checks(M) + _right_action_checks(M)
    if M.has_left_action:
        checks += _left_action_checks(M)
    return CheckSuite(name or repr(M), checks).run()


def check_trimodule_morphism(f: DomainMatrix, M: Trimodule,
                             N: Trimodule) -> Report:
    """
    ``f: M → N`` commutes with both coactions and the actions.
    """
    if f.shape != (N.dim, M.dim):
        raise ShapeError(f'Map of shape {f.shape} from dimension {M.dim} '
                         f'to {N.dim}.')
    H = M.H
    images = columns_of(f)

    def apply(vec: Vec) -> Vec:
        out: Vec = {}
        for i, c in vec.items():
            for j, v in images[i].items():
                accumulate(out, j, c * v)
        return out

    def coaction(left: bool):
        for m in range(M.dim):
            if left:
                lhs = N.lco_vec(images[m])
                rhs: dict = {}
                for (h, p), c in M.lco(m):
                    for q, v in images[p].items():
                        accumulate(rhs, (h, q), c * v)
            else:
                lhs = N.rco_vec(images[m])
                rhs = {}
                for (p, h), c in M.rco(m):
                    for q, v in images[p].items():
                        accumulate(rhs, (q, h), c * v)
            if lhs != rhs:
                return Witness(at=[M.labels[m]],
                               message='f is not colinear')
        return None

    def action(left: bool):
        for m, h in product(range(M.dim), range(H.dim)):
            if left:
                lhs = apply(M.lact(h, m))
                rhs = N.lact_vec({h: H.field.one}, images[m])
            else:
                lhs = apply(M.ract(m, h))
                rhs = N.ract_vec(images[m], {h: H.field.one})
            if lhs != rhs:
                return Witness(at=[M.labels[m], H.labels[h]],
                               lhs=N.format(lhs), rhs=N.format(rhs))
        return None

    checks = [('left colinear', lambda: coaction(True)),
              ('right colinear', lambda: coaction(False)),
              ('right linear', lambda: action(False))]
    if M.has_left_action and N.has_left_action:
        checks.append(('left linear', lambda: action(True)))
    return CheckSuite(f'{M!r} → {N!r}', checks).run()


def is_trimodule_morphism(f: DomainMatrix, M: Trimodule,
                          N: Trimodule) -> bool:
    return check_trimodule_morphism(f, M, N).passed


# -- F, coinvariants and τ ----------------------------------------------------

def F_build(V: YDModule) -> Trimodule:
    """
    ``F(V) = V⊗H`` with

    * ``ρˡ(v⊗h) = v₋₁h₁⊗(v₀⊗h₂)`` and ``ρʳ(v⊗h) = (v⊗h₁)⊗h₂``,
    * ``(v⊗h)l = ω⁻¹(v₋₁,h₁,l₁) v₀⊗h₂l₂``,
    * for a Yetter-Drinfeld module also
      ``l(v⊗h) = ω(l₁,v₋₁,h₁) ω⁻¹((l₂⊳v₀)₋₁,l₃,h₂) (l₂⊳v₀)₀⊗l₄h₃``.
    """
    H = V.H
    n = H.dim

    def lco(i):
        v, h = divmod(i, n)
        out: dict = {}
        for (g, v0), a in V.co(v):
            for (h1, h2), b in H.comult(h):
                for p, z in H.mul_basis(g, h1).items():
                    accumulate(out, (p, v0 * n + h2), a * b * z)
        return out

    def rco(i):
        v, h = divmod(i, n)
        out: dict = {}
        for (h1, h2), b in H.comult(h):
            accumulate(out, (v * n + h1, h2), b)
        return out

    def ract(i, l):
        v, h = divmod(i, n)
        out: Vec = {}
        for (g, v0), a in V.co(v):
            for (h1, h2), b in H.comult(h):
                for (l1, l2), c in H.comult(l):
                    factor = H.w_inv(g, h1, l1)
                    if not factor:
                        continue
                    for p, z in H.mul_basis(h2, l2).items():
                        accumulate(out, v0 * n + p, a * b * c * factor * z)
        return out

    def lact(l, i):
        v, h = divmod(i, n)
        out: Vec = {}
        for (l1, l2, l3, l4), a in H.delta_n(l, 4):
            for (g, v0), b in V.co(v):
                for (h1, h2, h3), c in H.delta_n(h, 3):
                    first = H.w(l1, g, h1)
                    if not first:
                        continue
                    for q, x in V.act(l2, v0).items():
                        for (k, q0), y in V.co(q):
                            second = H.w_inv(k, l3, h2)
                            if not second:
                                continue
                            for p, z in H.mul_basis(l4, h3).items():
                                accumulate(out, q0 * n + p,
                                           a * b * c * first * x * y
                                           * second * z)
        return out

    name = f'F({V.name})' if V.name else None
    return Trimodule.from_functions(
        H, tensor_labels(V.labels, H.labels), lco, rco, ract,
        lact if V.has_action else None, name=name)


def coinvariants(M: Trimodule) -> Subspace:
    """
    ``M^coH = {m : m₀⊗m₁ = m⊗1}`` as an exact kernel.
    """
    H = M.H
    n = H.dim
    columns = []
    for m in range(M.dim):
        image: Vec = {}
        for (p, h), c in M.rco(m):
            accumulate(image, p * n + h, c)
        for p, z in H.one.items():
            accumulate(image, m * n + p, -z)
        columns.append(image)
    rows = rows_of(from_columns(columns, M.dim * n, M.field))
    return Subspace(kernel_vectors(rows, M.dim, M.field), M.dim, M.field)


def tau(M: Trimodule, S: DomainMatrix) -> DomainMatrix:
    """
    ``τ(m) = ω(m₋₁, S(m₁)₁, m₂) m₀S(m₁)₂``, a projection onto ``M^coH``.
    """
    H = M.H
    if S.shape != (H.dim, H.dim):
        raise ShapeError(f'Preantipode of shape {S.shape} for dimension '
                         f'{H.dim}.')
    S_columns = columns_of(S)
    columns = []
    for m in range(M.dim):
        image: Vec = {}
        for (g, m0, k1, k2), c in M.bico(m, 1, 2):
            for a, s in S_columns[k1].items():
                for (a1, a2), d in H.comult(a):
                    factor = H.w(g, a1, k2)
                    if not factor:
                        continue
                    for p, x in M.ract(m0, a2).items():
                        accumulate(image, p, c * s * d * factor * x)
        columns.append(image)
    return from_columns(columns, M.dim, M.field)


def check_tau_laws(M: Trimodule, t: DomainMatrix) -> Report:
    """
    The laws characterizing τ for an arbitrary endomorphism t of M:

    * ``t(mh) = ω⁻¹(t(m₀)₋₁, m₁, h) t(m₀)₀``
    * ``m₋₁⊗t(m₀) = t(m₀)₋₁m₁⊗t(m₀)₀``
    * ``t(m₀)m₁ = m``
    * ``t(mh) = mε(h)`` for coinvariant m
    * the image of t is coinvariant
    """
    H = M.H
    n = H.dim
    images = columns_of(t)
    K = coinvariants(M)
    one = M.field.one

    def apply(vec: Vec) -> Vec:
        out: Vec = {}
        for i, c in vec.items():
            for j, v in images[i].items():
                accumulate(out, j, c * v)
        return out

    def twisted_module():
        for m, h in product(range(M.dim), range(n)):
            lhs = apply(M.ract(m, h))
            rhs: Vec = {}
            for (m0, k), a in M.rco(m):
                for (g, p), b in M.lco_vec(images[m0]).items():
                    accumulate(rhs, p, a * b * H.w_inv(g, k, h))
            if lhs != rhs:
                return Witness(at=[M.labels[m], H.labels[h]],
                               lhs=M.format(lhs), rhs=M.format(rhs))
        return None

    def left_colinear():
        for m in range(M.dim):
            lhs: dict = {}
            for (g, m0), a in M.lco(m):
                for p, x in images[m0].items():
                    accumulate(lhs, (g, p), a * x)
            rhs: dict = {}
            for (m0, k), a in M.rco(m):
                for (g, p), b in M.lco_vec(images[m0]).items():
                    for q, z in H.mul_basis(g, k).items():
                        accumulate(rhs, (q, p), a * b * z)
            if lhs != rhs:
                labels = [H.labels, M.labels]
                return Witness(at=[M.labels[m]],
                               lhs=format_vector(lhs, labels, M.field),
                               rhs=format_vector(rhs, labels, M.field))
        return None

    def reconstruction():
        for m in range(M.dim):
            image: Vec = {}
            for (m0, k), a in M.rco(m):
                for p, x in M.ract_vec(images[m0], {k: one}).items():
                    accumulate(image, p, a * x)
            if image != {m: one}:
                return Witness(at=[M.labels[m]], lhs=M.format(image),
                               rhs=M.labels[m], message='t(m₀)m₁ ≠ m')
        return None

    def coinvariant_module():
        for b, h in product(K.basis, range(n)):
            lhs = apply(M.ract_vec(b, {h: one}))
            rhs = {p: x * H.eps(h) for p, x in b.items() if H.eps(h)}
            if lhs != rhs:
                return Witness(at=[M.format(b), H.labels[h]],
                               lhs=M.format(lhs), rhs=M.format(rhs))
        return None

    def coinvariant_image():
        for m in range(M.dim):
            if not K.contains(images[m]):
                return Witness(at=[M.labels[m]], lhs=M.format(images[m]),
                               message='t(m) is not coinvariant')
        return None

    return CheckSuite(f'τ laws on {M!r}', [
        ('twisted module law', twisted_module),
        ('left colinear', left_colinear),
        ('reconstruction', reconstruction),
        ('coinvariant module law', coinvariant_module),
        ('coinvariant image', coinvariant_image)]).run()


# -- ⊗_H and ⧠_H --------------------------------------------------------------

def _induced(H: DualQuasiBialgebra, labels: Sequence[str],
             elements: Sequence[Vec], coords: Callable[[Vec], Vec],
             lco: Callable[[int], dict], rco: Callable[[int], dict],
             ract: Callable[[int, int], Vec],
             lact: Callable[[int, int], Vec] | None,
             name: str | None) -> Trimodule:
    """
    Structures of a sub or quotient space from those of its ambient.
    """
    def grouped(parts: dict, slot: int) -> dict:
        by_h: dict[int, Vec] = {}
        for key, c in parts.items():
            by_h.setdefault(key[slot], {})
            accumulate(by_h[key[slot]], key[1 - slot], c)
        return by_h

    def sub_lco(p):
        total: dict = {}
        for i, x in elements[p].items():
            for key, c in lco(i).items():
                accumulate(total, key, x * c)
        out = {}
        for h, vec in grouped(total, 0).items():
            for q, y in coords(vec).items():
                out[(h, q)] = y
        return out

    def sub_rco(p):
        total: dict = {}
        for i, x in elements[p].items():
            for key, c in rco(i).items():
                accumulate(total, key, x * c)
        out = {}
        for h, vec in grouped(total, 1).items():
            for q, y in coords(vec).items():
                out[(q, h)] = y
        return out

    def sub_ract(p, h):
        total: Vec = {}
        for i, x in elements[p].items():
            for j, c in ract(i, h).items():
                accumulate(total, j, x * c)
        return coords(total)

    def sub_lact(h, p):
        total: Vec = {}
        for i, x in elements[p].items():
            for j, c in lact(h, i).items():
                accumulate(total, j, x * c)
        return coords(total)

    return Trimodule.from_functions(H, labels, sub_lco, sub_rco, sub_ract,
                                    None if lact is None else sub_lact,
                                    name=name)


def _pair_name(M: Trimodule, N: Trimodule, sep: str) -> str | None:
    if M.name and N.name:
        return f'({M.name}{sep}{N.name})'
    return None


class TensorOverH:
    """
    ``M⊗_H N``, the quotient of ``M⊗N`` by
    ``(mh)⊗n − ω⁻¹(m₋₁,h₁,n₋₁) m₀⊗h₂n₀ ω(m₁,h₃,n₁)``.

    ``chi`` is the canonical projection from ``M⊗N``; ``section`` sends a
    class to its echelon representative. ``module`` carries the induced
    structures: codiagonal coactions, the right action
    ``ω⁻¹(m₋₁,n₋₁,h₁) m₀⊗n₀h₂ ω(m₁,n₁,h₃)`` and, when M has one, the left
    action ``ω(h₁,m₋₁,n₋₁) h₂m₀⊗n₀ ω⁻¹(h₃,m₁,n₁)``.
    """

    def __init__(self, M: Trimodule, N: Trimodule):
        if M.H is not N.H:
            raise ShapeError('Trimodules over different bases.')
        if not N.has_left_action:
            raise PreconditionError(f'{N!r} has no left action to tensor '
                                    f'over H with.')
        self.logger = logging.getLogger(__name__)
        self.M, self.N, self.H = M, N, M.H
        H = self.H
        dN = N.dim
        self.ambient = M.dim * dN

        relations = []
        for m, h, k in product(range(M.dim), range(H.dim), range(dN)):
            relation: Vec = {}
            for p, x in M.ract(m, h).items():
                accumulate(relation, p * dN + k, x)
            for (g, m0, g1), a in M.bico(m):
                for (f, n0, f1), b in N.bico(k):
                    for (h1, h2, h3), c in H.delta_n(h, 3):
                        factor = H.w_inv(g, h1, f) * H.w(g1, h3, f1)
                        if not factor:
                            continue
                        for q, y in N.lact(h2, n0).items():
                            accumulate(relation, m0 * dN + q,
                                       -a * b * c * factor * y)
            if relation:
                relations.append(relation)
        self.quotient = Quotient(relations, self.ambient, M.field)
        self.logger.debug(f'{M!r} ⊗_H {N!r}: {len(relations)} relations, '
                          f'dimension {self.quotient.dim}.')

        labels = [f'{M.labels[j // dN]}⊗{N.labels[j % dN]}'
                  for j in self.quotient.free]
        self.module = _induced(
            H, dedupe_labels(labels),
            [{j: M.field.one} for j in self.quotient.free],
            self.quotient.project, self._lco, self._rco, self._ract,
            self._lact if M.has_left_action else None,
            _pair_name(M, N, '⊗_H'))

    def __repr__(self):
        return f'TensorOverH(dim={self.dim})'

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def chi(self) -> DomainMatrix:
        return self.quotient.projection

    @property
    def section(self) -> DomainMatrix:
        return self.quotient.section

    def project(self, vec: Vec) -> Vec:
        return self.quotient.project(vec)

    def lift(self, coords: Vec) -> Vec:
        return self.quotient.lift(coords)

    def _lco(self, i):
        M, N, H = self.M, self.N, self.H
        m, k = divmod(i, N.dim)
        out: dict = {}
        for (g, m0), a in M.lco(m):
            for (f, n0), b in N.lco(k):
                for p, z in H.mul_basis(g, f).items():
                    accumulate(out, (p, m0 * N.dim + n0), a * b * z)
        return out

    def _rco(self, i):
        M, N, H = self.M, self.N, self.H
        m, k = divmod(i, N.dim)
        out: dict = {}
        for (m0, g), a in M.rco(m):
            for (n0, f), b in N.rco(k):
                for p, z in H.mul_basis(g, f).items():
                    accumulate(out, (m0 * N.dim + n0, p), a * b * z)
        return out

    def _ract(self, i, h):
        M, N, H = self.M, self.N, self.H
        m, k = divmod(i, N.dim)
        out: Vec = {}
        for (g, m0, g1), a in M.bico(m):
            for (f, n0, f1), b in N.bico(k):
                for (h1, h2, h3), c in H.delta_n(h, 3):
                    factor = H.w_inv(g, f, h1) * H.w(g1, f1, h3)
                    if not factor:
                        continue
                    for q, y in N.ract(n0, h2).items():
                        accumulate(out, m0 * N.dim + q,
                                   a * b * c * factor * y)
        return out

    def _lact(self, h, i):
        M, N, H = self.M, self.N, self.H
        m, k = divmod(i, N.dim)
        out: Vec = {}
        for (g, m0, g1), a in M.bico(m):
            for (f, n0, f1), b in N.bico(k):
                for (h1, h2, h3), c in H.delta_n(h, 3):
                    factor = H.w(h1, g, f) * H.w_inv(h3, g1, f1)
                    if not factor:
                        continue
                    for p, x in M.lact(h2, m0).items():
                        accumulate(out, p * N.dim + n0,
                                   a * b * c * factor * x)
        return out


def tensor_over_H(M: Trimodule, N: Trimodule) -> TensorOverH:
    return TensorOverH(M, N)


class Cotensor:
    """
    ``M⧠_H N``, the kernel of ``m₀⊗m₁⊗n − m⊗n₋₁⊗n₀`` inside ``M⊗N``.

    ``j`` is the inclusion into ``M⊗N``. The induced structures are
    ``ρˡ = m₋₁⊗(m₀⧠n)``, ``ρʳ = (m⧠n₀)⊗n₁``, ``(m⧠n)h = mh₁⧠nh₂`` and,
    when both factors have one, ``h(m⧠n) = h₁m⧠h₂n``.
    """

    def __init__(self, M: Trimodule, N: Trimodule):
        if M.H is not N.H:
            raise ShapeError('Trimodules over different bases.')
        self.logger = logging.getLogger(__name__)
        self.M, self.N, self.H = M, N, M.H
        H = self.H
        n, dN = H.dim, N.dim
        self.ambient = M.dim * dN

        columns = []
        for m, k in product(range(M.dim), range(dN)):
            image: Vec = {}
            for (m0, h), a in M.rco(m):
                accumulate(image, (m0 * n + h) * dN + k, a)
            for (h, n0), b in N.lco(k):
                accumulate(image, (m * n + h) * dN + n0, -b)
            columns.append(image)
        rows = rows_of(from_columns(columns, M.dim * n * dN, M.field))
        self.subspace = Subspace(kernel_vectors(rows, self.ambient, M.field),
                                 self.ambient, M.field)
        self.logger.debug(f'{M!r} ⧠_H {N!r}: dimension {self.dim}.')

        pair_labels = tensor_labels(M.labels, N.labels, sep='⧠')
        labels = []
        for b in self.subspace.basis:
            if len(b) == 1 and next(iter(b.values())) == M.field.one:
                labels.append(pair_labels[next(iter(b))])
            else:
                labels.append(format_vector(b, pair_labels, M.field)
                              .replace(' ', ''))
        both = M.has_left_action and N.has_left_action
        self.module = _induced(
            H, dedupe_labels(labels), self.subspace.basis,
            self.subspace.coordinates, self._lco, self._rco, self._ract,
            self._lact if both else None, _pair_name(M, N, '⧠_H'))

    def __repr__(self):
        return f'Cotensor(dim={self.dim})'

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def j(self) -> DomainMatrix:
        return self.subspace.inclusion

    def coordinates(self, vec: Vec) -> Vec:
        if not self.subspace.contains(vec):
            raise ShapeError('Vector outside the cotensor product.')
        return self.subspace.coordinates(vec)

    def element(self, coords: Vec) -> Vec:
        return self.subspace.element(coords)

    def _lco(self, i):
        m, k = divmod(i, self.N.dim)
        return {(h, m0 * self.N.dim + k): a
                for (h, m0), a in self.M.lco(m)}

    def _rco(self, i):
        m, k = divmod(i, self.N.dim)
        return {(m * self.N.dim + n0, h): b
                for (n0, h), b in self.N.rco(k)}

    def _ract(self, i, h):
        M, N, H = self.M, self.N, self.H
        m, k = divmod(i, N.dim)
        out: Vec = {}
        for (h1, h2), c in H.comult(h):
            for p, x in M.ract(m, h1).items():
                for q, y in N.ract(k, h2).items():
                    accumulate(out, p * N.dim + q, c * x * y)
        return out

    def _lact(self, h, i):
        M, N, H = self.M, self.N, self.H
        m, k = divmod(i, N.dim)
        out: Vec = {}
        for (h1, h2), c in H.comult(h):
            for p, x in M.lact(h1, m).items():
                for q, y in N.lact(h2, k).items():
                    accumulate(out, p * N.dim + q, c * x * y)
        return out


def cotensor(M: Trimodule, N: Trimodule) -> Cotensor:
    return Cotensor(M, N)


def tensor_maps(f: DomainMatrix, g: DomainMatrix, source: TensorOverH,
                target: TensorOverH) -> DomainMatrix:
    """
    ``f⊗_H g`` between two tensor products over H.
    """
    return compose(target.chi, kron(f, g, source.M.field), source.section)


def cotensor_maps(f: DomainMatrix, g: DomainMatrix, source: Cotensor,
                  target: Cotensor) -> DomainMatrix:
    """
    ``f⧠_H g`` between two cotensor products.
    """
    image = compose(kron(f, g, source.M.field), source.j)
    return from_columns([target.coordinates(c) for c in columns_of(image)],
                        target.dim, source.M.field)


def tensor_over_H_associator(M: Trimodule, N: Trimodule,
                             P: Trimodule) -> DomainMatrix:
    """
    ``(M⊗_H N)⊗_H P → M⊗_H(N⊗_H P)``,
    ``(m⊗n)⊗p ↦ ω⁻¹(m₋₁,n₋₁,p₋₁) m₀⊗(n₀⊗p₀) ω(m₁,n₁,p₁)``.
    """
    H = M.H
    MN = TensorOverH(M, N)
    left = TensorOverH(MN.module, P)
    NP = TensorOverH(N, P)
    right = TensorOverH(M, NP.module)
    dN, dP = N.dim, P.dim
    columns = []
    for j in left.quotient.free:
        q, p = divmod(j, dP)
        m, k = divmod(MN.quotient.free[q], dN)
        flat: dict = {}
        for (g, m0, g1), a in M.bico(m):
            for (f, n0, f1), b in N.bico(k):
                for (e, p0, e1), c in P.bico(p):
                    factor = H.w_inv(g, f, e) * H.w(g1, f1, e1)
                    if factor:
                        accumulate(flat, (m0, n0 * dP + p0),
                                   a * b * c * factor)
        outer: Vec = {}
        for (m0, inner), x in flat.items():
            for r, y in NP.project({inner: H.field.one}).items():
                accumulate(outer, m0 * NP.dim + r, x * y)
        columns.append(right.project(outer))
    return from_columns(columns, right.dim, H.field)


def left_unitor(M: Trimodule) -> DomainMatrix:
    """``H⊗_H M → M``, ``h⊗m ↦ hm``."""
    T = TensorOverH(regular_trimodule(M.H), M)
    columns = [M.lact(*divmod(j, M.dim)) for j in T.quotient.free]
    return from_columns(columns, M.dim, M.field)


def right_unitor(M: Trimodule) -> DomainMatrix:
    """``M⊗_H H → M``, ``m⊗h ↦ mh``."""
    H = M.H
    T = TensorOverH(M, regular_trimodule(H))
    columns = [M.ract(*divmod(j, H.dim)) for j in T.quotient.free]
    return from_columns(columns, M.dim, M.field)


def _matrix_witness(A: DomainMatrix, B: DomainMatrix,
                    message: str) -> Witness:
    for j, (a, b) in enumerate(zip(columns_of(A), columns_of(B))):
        if a != b:
            return Witness(at=[str(j)], lhs=str(sorted(a.items())),
                           rhs=str(sorted(b.items())), message=message)
    return Witness(message=message)


def _compare(A: DomainMatrix, B: DomainMatrix,
             message: str) -> Witness | None:
    if A.shape != B.shape:
        return Witness(lhs=str(A.shape), rhs=str(B.shape),
                       message=f'{message}: shapes differ')
    if matrices_equal(A, B):
        return None
    return _matrix_witness(A, B, message)


def check_tensor_coherence(M: Trimodule, N: Trimodule, P: Trimodule,
                           Q: Trimodule) -> Report:
    """
    Pentagon for ``M, N, P, Q`` and triangle for ``M, N`` in ⊗_H.
    """
    H = M.H
    field = M.field

    def eye(X: Trimodule) -> DomainMatrix:
        return identity(X.dim, field)

    def pentagon():
        MN, NP, PQ = (TensorOverH(M, N), TensorOverH(N, P),
                      TensorOverH(P, Q))
        MN_P = TensorOverH(MN.module, P)
        N_PQ = TensorOverH(N, PQ.module)
        NP_Q = TensorOverH(NP.module, Q)
        M_NP = TensorOverH(M, NP.module)
        lhs = compose(
            tensor_over_H_associator(M, N, PQ.module),
            tensor_over_H_associator(MN.module, P, Q))
        rhs = compose(
            tensor_maps(eye(M), tensor_over_H_associator(N, P, Q),
                        TensorOverH(M, NP_Q.module),
                        TensorOverH(M, N_PQ.module)),
            tensor_over_H_associator(M, NP.module, Q),
            tensor_maps(tensor_over_H_associator(M, N, P), eye(Q),
                        TensorOverH(MN_P.module, Q),
                        TensorOverH(M_NP.module, Q)))
        return _compare(lhs, rhs, 'pentagon does not commute')

    def triangle():
        R = regular_trimodule(H)
        MH = TensorOverH(M, R)
        HN = TensorOverH(R, N)
        lhs = compose(
            tensor_maps(eye(M), left_unitor(N),
                        TensorOverH(M, HN.module), TensorOverH(M, N)),
            tensor_over_H_associator(M, R, N))
        rhs = tensor_maps(right_unitor(M), eye(N),
                          TensorOverH(MH.module, N), TensorOverH(M, N))
        return _compare(lhs, rhs, 'triangle does not commute')

    return CheckSuite('⊗_H constraints',
                      [('pentagon', pentagon),
                       ('triangle', triangle)]).run()


# -- structure maps -----------------------------------------------------------

def _one_terms(H: DualQuasiBialgebra):
    return H.one.items()


def xi_target(U: YDModule, M: Trimodule) -> Trimodule:
    """
    ``U⊗M`` with ``ρˡ = u₋₁m₋₁⊗(u₀⊗m₀)``, ``ρʳ = (u⊗m₀)⊗m₁``, right
    action ``ω⁻¹(u₋₁,m₋₁,h₁) u₀⊗m₀h₂`` and, for a Yetter-Drinfeld U and
    M with a left action,
    ``ω(h₁,u₋₁,m₋₂) ω⁻¹((h₂⊳u₀)₋₁,h₃,m₋₁) (h₂⊳u₀)₀⊗h₄m₀``.
    """
    H = M.H
    dM = M.dim

    def lco(i):
        u, m = divmod(i, dM)
        out: dict = {}
        for (g, u0), a in U.co(u):
            for (f, m0), b in M.lco(m):
                for p, z in H.mul_basis(g, f).items():
                    accumulate(out, (p, u0 * dM + m0), a * b * z)
        return out

    def rco(i):
        u, m = divmod(i, dM)
        return {(u * dM + m0, h): b for (m0, h), b in M.rco(m)}

    def ract(i, h):
        u, m = divmod(i, dM)
        out: Vec = {}
        for (g, u0), a in U.co(u):
            for (f, m0), b in M.lco(m):
                for (h1, h2), c in H.comult(h):
                    factor = H.w_inv(g, f, h1)
                    if not factor:
                        continue
                    for q, y in M.ract(m0, h2).items():
                        accumulate(out, u0 * dM + q, a * b * c * factor * y)
        return out

    def lact(h, i):
        u, m = divmod(i, dM)
        out: Vec = {}
        for (h1, h2, h3, h4), a in H.delta_n(h, 4):
            for (g, u0), b in U.co(u):
                for (f2, f1, m0), c in M.lco_n(m, 2):
                    first = H.w(h1, g, f2)
                    if not first:
                        continue
                    for q, x in U.act(h2, u0).items():
                        for (k, q0), y in U.co(q):
                            second = H.w_inv(k, h3, f1)
                            if not second:
                                continue
                            for p, z in M.lact(h4, m0).items():
                                accumulate(out, q0 * dM + p,
                                           a * b * c * first * x * y
                                           * second * z)
        return out

    with_left = U.has_action and M.has_left_action
    return Trimodule.from_functions(
        H, tensor_labels(U.labels, M.labels), lco, rco, ract,
        lact if with_left else None)


def xi(U: YDModule, M: Trimodule) -> DomainMatrix:
    """
    ``ξ: F(U)⊗_H M → U⊗M``,
    ``(u⊗h)⊗m ↦ ω⁻¹(u₋₁,h₁,m₋₁) u₀⊗h₂m₀``.
    """
    H = M.H
    n, dM = H.dim, M.dim
    T = TensorOverH(F_build(U), M)
    columns = []
    for j in T.quotient.free:
        i, m = divmod(j, dM)
        u, h = divmod(i, n)
        image: Vec = {}
        for (g, u0), a in U.co(u):
            for (h1, h2), b in H.comult(h):
                for (f, m0), c in M.lco(m):
                    factor = H.w_inv(g, h1, f)
                    if not factor:
                        continue
                    for q, y in M.lact(h2, m0).items():
                        accumulate(image, u0 * dM + q,
                                   a * b * c * factor * y)
        columns.append(image)
    return from_columns(columns, U.dim * dM, H.field)


def xi_inverse(U: YDModule, M: Trimodule) -> DomainMatrix:
    """``u⊗m ↦ (u⊗1)⊗_H m``."""
    H = M.H
    n, dM = H.dim, M.dim
    T = TensorOverH(F_build(U), M)
    columns = []
    for u, m in product(range(U.dim), range(dM)):
        columns.append(T.project({(u * n + p) * dM + m: z
                                  for p, z in _one_terms(H)}))
    return from_columns(columns, T.dim, H.field)


def alpha(U: YDModule, V: YDModule, inverse: bool = False) -> DomainMatrix:
    """
    ``U⊗(V⊗H) → (U⊗V)⊗H``, ``u⊗(v⊗k) ↦ ω(u₋₁,v₋₁,k₁)(u₀⊗v₀)⊗k₂``.
    """
    H = U.H
    n, dV = H.dim, V.dim
    columns = []
    for u, v, k in product(range(U.dim), range(dV), range(n)):
        image: Vec = {}
        for (g, u0), a in U.co(u):
            for (f, v0), b in V.co(v):
                for (k1, k2), c in H.comult(k):
                    factor = H.w_inv(g, f, k1) if inverse \
                        else H.w(g, f, k1)
                    accumulate(image, (u0 * dV + v0) * n + k2,
                               a * b * c * factor)
        columns.append(image)
    return from_columns(columns, U.dim * dV * n, H.field)


def phi2(U: YDModule, V: YDModule) -> DomainMatrix:
    """``φ₂(U,V) = α_{U,V}∘ξ_{U,F(V)}: F(U)⊗_H F(V) → F(U⊗V)``."""
    return compose(alpha(U, V), xi(U, F_build(V)))


def phi2_inverse(U: YDModule, V: YDModule) -> DomainMatrix:
    """``(u⊗v)⊗k ↦ ω⁻¹(u₋₁,v₋₁,k₁)(u₀⊗1)⊗_H(v₀⊗k₂)``."""
    H = U.H
    n, dV = H.dim, V.dim
    T = TensorOverH(F_build(U), F_build(V))
    dFV = dV * n
    columns = []
    for u, v, k in product(range(U.dim), range(dV), range(n)):
        ambient: Vec = {}
        for (g, u0), a in U.co(u):
            for (f, v0), b in V.co(v):
                for (k1, k2), c in H.comult(k):
                    factor = H.w_inv(g, f, k1)
                    if not factor:
                        continue
                    for p, z in _one_terms(H):
                        accumulate(ambient, (u0 * n + p) * dFV + v0 * n + k2,
                                   a * b * c * factor * z)
        columns.append(T.project(ambient))
    return from_columns(columns, T.dim, H.field)


def phi0(H: DualQuasiBialgebra) -> DomainMatrix:
    """``H → F(k)``, ``h ↦ 1⊗h``."""
    return identity(H.dim, H.field)


def beta(V: YDModule, M: Trimodule) -> DomainMatrix:
    """``F(V)⧠_H M → V⊗M``, ``(v⊗h)⧠m ↦ vε(h)⊗m``."""
    H = M.H
    n, dM = H.dim, M.dim
    C = Cotensor(F_build(V), M)
    columns = []
    for b in C.subspace.basis:
        image: Vec = {}
        for j, x in b.items():
            i, m = divmod(j, dM)
            v, h = divmod(i, n)
            accumulate(image, v * dM + m, x * H.eps(h))
        columns.append(image)
    return from_columns(columns, V.dim * dM, H.field)


def beta_inverse(V: YDModule, M: Trimodule) -> DomainMatrix:
    """``v⊗m ↦ (v⊗m₋₁)⧠m₀``."""
    H = M.H
    n, dM = H.dim, M.dim
    C = Cotensor(F_build(V), M)
    columns = []
    for v, m in product(range(V.dim), range(dM)):
        ambient = {(v * n + g) * dM + m0: a for (g, m0), a in M.lco(m)}
        columns.append(C.coordinates(ambient))
    return from_columns(columns, C.dim, H.field)


def psi2(U: YDModule, V: YDModule) -> DomainMatrix:
    """
    ``F(U)⧠_H F(V) → F(U⊗V)``,
    ``(u⊗h)⧠(v⊗k) ↦ ω(u₋₁,v₋₁,k₁) u₀ε(h)⊗v₀⊗k₂``.
    """
    H = U.H
    n, dV = H.dim, V.dim
    C = Cotensor(F_build(U), F_build(V))
    columns = []
    for b in C.subspace.basis:
        image: Vec = {}
        for j, x in b.items():
            i, i2 = divmod(j, dV * n)
            u, h = divmod(i, n)
            v, k = divmod(i2, n)
            if not H.eps(h):
                continue
            for (g, u0), a in U.co(u):
                for (f, v0), c in V.co(v):
                    for (k1, k2), d in H.comult(k):
                        accumulate(image, (u0 * dV + v0) * n + k2,
                                   x * H.eps(h) * a * c * d
                                   * H.w(g, f, k1))
        columns.append(image)
    return from_columns(columns, U.dim * dV * n, H.field)


def psi2_inverse(U: YDModule, V: YDModule) -> DomainMatrix:
    """``(u⊗v)⊗h ↦ ω⁻¹(u₋₁,v₋₂,h₁)(u₀⊗v₋₁h₂)⧠(v₀⊗h₃)``."""
    H = U.H
    n, dV = H.dim, V.dim
    C = Cotensor(F_build(U), F_build(V))
    columns = []
    for u, v, h in product(range(U.dim), range(dV), range(n)):
        ambient: Vec = {}
        for (g, u0), a in U.co(u):
            for (f2, f1, v0), b in V.co_n(v, 2):
                for (h1, h2, h3), c in H.delta_n(h, 3):
                    factor = H.w_inv(g, f2, h1)
                    if not factor:
                        continue
                    for p, z in H.mul_basis(f1, h2).items():
                        accumulate(ambient,
                                   (u0 * n + p) * (dV * n) + v0 * n + h3,
                                   a * b * c * factor * z)
        columns.append(C.coordinates(ambient))
    return from_columns(columns, C.dim, H.field)


def psi0(H: DualQuasiBialgebra) -> DomainMatrix:
    return identity(H.dim, H.field)


def _tau_columns(M: Trimodule, S: DomainMatrix) -> list[Vec]:
    return columns_of(tau(M, S))


def psi2_G(M: Trimodule, N: Trimodule) -> DomainMatrix:
    """``G(M)⊗G(N) → G(M⧠_H N)``, ``m⊗n ↦ mn₋₁⧠n₀``."""
    KM, KN = coinvariants(M), coinvariants(N)
    C = Cotensor(M, N)
    KC = coinvariants(C.module)
    dN = N.dim
    columns = []
    for bm, bn in product(KM.basis, KN.basis):
        ambient: Vec = {}
        for (g, n0), y in N.lco_vec(bn).items():
            for p, x in M.ract_vec(bm, {g: M.field.one}).items():
                accumulate(ambient, p * dN + n0, x * y)
        columns.append(KC.coordinates(C.coordinates(ambient)))
    return from_columns(columns, KC.dim, M.field)


def psi2_G_inverse(M: Trimodule, N: Trimodule,
                   S: DomainMatrix) -> DomainMatrix:
    """``m⧠n ↦ τ(m)⊗τ(n)``."""
    KM, KN = coinvariants(M), coinvariants(N)
    C = Cotensor(M, N)
    KC = coinvariants(C.module)
    tM, tN = _tau_columns(M, S), _tau_columns(N, S)
    dN = N.dim
    columns = []
    for b in KC.basis:
        ambient = C.element(b)
        image: Vec = {}
        for j, x in ambient.items():
            m, k = divmod(j, dN)
            for p, y in tM[m].items():
                for q, z in tN[k].items():
                    accumulate(image, p * dN + q, x * y * z)
        coords: Vec = {}
        for (i, pm), (l, pn) in product(enumerate(KM.pivots),
                                        enumerate(KN.pivots)):
            value = image.get(pm * dN + pn)
            if value:
                coords[i * KN.dim + l] = value
        columns.append(coords)
    return from_columns(columns, KM.dim * KN.dim, M.field)


def theta2(M: Trimodule, N: Trimodule, S: DomainMatrix) -> DomainMatrix:
    """``ϑ₂: M⧠_H N → M⊗_H N``, ``m⧠n ↦ τ(m)⊗_H n``."""
    C, T = Cotensor(M, N), TensorOverH(M, N)
    tM = _tau_columns(M, S)
    dN = N.dim
    columns = []
    for b in C.subspace.basis:
        image: Vec = {}
        for j, x in b.items():
            m, k = divmod(j, dN)
            for p, y in tM[m].items():
                accumulate(image, p * dN + k, x * y)
        columns.append(T.project(image))
    return from_columns(columns, T.dim, M.field)


def theta2_inverse(M: Trimodule, N: Trimodule) -> DomainMatrix:
    """``m⊗_H n ↦ m₀n₋₁⧠m₁n₀``."""
    C, T = Cotensor(M, N), TensorOverH(M, N)
    dN = N.dim
    columns = []
    for j in T.quotient.free:
        m, k = divmod(j, dN)
        image: Vec = {}
        for (m0, g), a in M.rco(m):
            for (f, n0), b in N.lco(k):
                for p, x in M.ract(m0, f).items():
                    for q, y in N.lact(g, n0).items():
                        accumulate(image, p * dN + q, a * b * x * y)
        columns.append(C.coordinates(image))
    return from_columns(columns, C.dim, M.field)


def kappa(U: YDModule, V: YDModule) -> DomainMatrix:
    """
    ``κ: F(U)⊗_H F(V) → F(U)⧠_H F(V)``,
    ``x⊗_H y ↦ x₀y₋₁⧠x₁y₀``.
    """
    return theta2_inverse(F_build(U), F_build(V))


def kappa_inverse(U: YDModule, V: YDModule) -> DomainMatrix:
    """``(u⊗h)⧠(v⊗k) ↦ (uε(h)⊗1)⊗_H(v⊗k)``."""
    H = U.H
    n = H.dim
    FU, FV = F_build(U), F_build(V)
    C, T = Cotensor(FU, FV), TensorOverH(FU, FV)
    dFV = FV.dim
    columns = []
    for b in C.subspace.basis:
        ambient: Vec = {}
        for j, x in b.items():
            i, y = divmod(j, dFV)
            u, h = divmod(i, n)
            if not H.eps(h):
                continue
            for p, z in _one_terms(H):
                accumulate(ambient, (u * n + p) * dFV + y,
                           x * H.eps(h) * z)
        columns.append(T.project(ambient))
    return from_columns(columns, T.dim, H.field)


STRUCTURE_MAPS: dict[str, Callable[..., DomainMatrix]] = {
    'xi': xi,
    'xi_inverse': xi_inverse,
    'alpha': alpha,
    'alpha_inverse': lambda U, V: alpha(U, V, inverse=True),
    'beta': beta,
    'beta_inverse': beta_inverse,
    'phi2': phi2,
    'phi2_inverse': phi2_inverse,
    'phi0': phi0,
    'psi2': psi2,
    'psi2_inverse': psi2_inverse,
    'psi0': psi0,
    'psi2_G': psi2_G,
    'psi2_G_inverse': psi2_G_inverse,
    'theta2': theta2,
    'theta2_inverse': theta2_inverse,
    'kappa': kappa,
    'kappa_inverse': kappa_inverse,
}

_NEEDS_PREANTIPODE = {'psi2_G_inverse', 'theta2'}


def structure_map(kind: str, *args, S: DomainMatrix | None = None
                  ) -> DomainMatrix:
    """
    One of the monoidal structure maps as an exact matrix.

    Args:
        kind: A key of ``STRUCTURE_MAPS``.
        args: The objects the map is built on.
        S:    A preantipode, required by ``theta2`` and
              ``psi2_G_inverse``.
    """
    try:
        build = STRUCTURE_MAPS[kind]
    except KeyError:
        raise ShapeError(f'Unknown structure map "{kind}", expected one of '
                         f'{sorted(STRUCTURE_MAPS)}.')
    logger.debug(f'Building structure map {kind}.')
    if kind in _NEEDS_PREANTIPODE:
        if S is None:
            raise PreconditionError(f'{kind} needs a preantipode.')
        return build(*args, S)
    return build(*args)


def check_monoidal_functor(U: YDModule, V: YDModule, W: YDModule,
                           kind: str = 'tensor') -> Report:
    """
    Coherence of ``(F, φ₂, φ₀)`` for ``kind='tensor'`` or of
    ``(F, ψ₂, ψ₀)`` for ``kind='cotensor'`` on three modules.
    """
    if kind not in ('tensor', 'cotensor'):
        raise ShapeError(f'Unknown monoidal structure "{kind}".')
    H = U.H
    field = U.field
    n = H.dim
    FU, FV, FW = F_build(U), F_build(V), F_build(W)
    k = unit_module(H)
    Fk = F_build(k)
    R = regular_trimodule(H)
    join = yd_tensor if kind == 'tensor' else comodule_tensor
    UV, VW = join(U, V), join(V, W)
    F_a = kron(yd_associator(U, V, W), identity(n, field), field)

    def eye(X) -> DomainMatrix:
        return identity(X.dim, field)

    def associativity():
        if kind == 'tensor':
            FU_FV = TensorOverH(FU, FV)
            FV_FW = TensorOverH(FV, FW)
            lhs = compose(
                F_a, phi2(UV, W),
                tensor_maps(phi2(U, V), eye(FW),
                            TensorOverH(FU_FV.module, FW),
                            TensorOverH(F_build(UV), FW)))
            rhs = compose(
                phi2(U, VW),
                tensor_maps(eye(FU), phi2(V, W),
                            TensorOverH(FU, FV_FW.module),
                            TensorOverH(FU, F_build(VW))),
                tensor_over_H_associator(FU, FV, FW))
        else:
            FU_FV = Cotensor(FU, FV)
            FV_FW = Cotensor(FV, FW)
            lhs = compose(
                F_a, psi2(UV, W),
                cotensor_maps(psi2(U, V), eye(FW),
                              Cotensor(FU_FV.module, FW),
                              Cotensor(F_build(UV), FW)))
            rhs = compose(
                psi2(U, VW),
                cotensor_maps(eye(FU), psi2(V, W),
                              Cotensor(FU, FV_FW.module),
                              Cotensor(FU, F_build(VW))),
                cotensor_associator(FU, FV, FW))
        return _compare(lhs, rhs, 'associativity diagram does not commute')

    def left_unit():
        if kind == 'tensor':
            lhs = compose(
                identity(U.dim * n, field), phi2(k, U),
                tensor_maps(phi0(H), eye(FU), TensorOverH(R, FU),
                            TensorOverH(Fk, FU)))
            rhs = left_unitor(FU)
        else:
            lhs = compose(
                identity(U.dim * n, field), psi2(k, U),
                cotensor_maps(psi0(H), eye(FU), Cotensor(R, FU),
                              Cotensor(Fk, FU)))
            rhs = cotensor_left_unitor(FU)
        return _compare(lhs, rhs, 'left unit diagram does not commute')

    def right_unit():
        if kind == 'tensor':
            lhs = compose(
                identity(U.dim * n, field), phi2(U, k),
                tensor_maps(eye(FU), phi0(H), TensorOverH(FU, R),
                            TensorOverH(FU, Fk)))
            rhs = right_unitor(FU)
        else:
            lhs = compose(
                identity(U.dim * n, field), psi2(U, k),
                cotensor_maps(eye(FU), psi0(H), Cotensor(FU, R),
                              Cotensor(FU, Fk)))
            rhs = cotensor_right_unitor(FU)
        return _compare(lhs, rhs, 'right unit diagram does not commute')

    symbol = 'φ' if kind == 'tensor' else 'ψ'
    return CheckSuite(f'monoidal structure {symbol} of F', [
        ('associativity diagram', associativity),
        ('left unit diagram', left_unit),
        ('right unit diagram', right_unit)]).run()


def cotensor_associator(M: Trimodule, N: Trimodule,
                        P: Trimodule) -> DomainMatrix:
    """``(M⧠_H N)⧠_H P → M⧠_H(N⧠_H P)``, the identity on representatives."""
    MN = Cotensor(M, N)
    left = Cotensor(MN.module, P)
    NP = Cotensor(N, P)
    right = Cotensor(M, NP.module)
    dN, dP = N.dim, P.dim
    columns = []
    for b in left.subspace.basis:
        flat: dict = {}
        for j, x in b.items():
            q, p = divmod(j, dP)
            for i, y in MN.subspace.basis[q].items():
                m, k = divmod(i, dN)
                accumulate(flat, (m, k * dP + p), x * y)
        by_m: dict[int, Vec] = {}
        for (m, inner), x in flat.items():
            accumulate(by_m.setdefault(m, {}), inner, x)
        outer: Vec = {}
        for m, vec in by_m.items():
            for r, y in NP.coordinates(vec).items():
                accumulate(outer, m * NP.dim + r, y)
        columns.append(right.coordinates(outer))
    return from_columns(columns, right.dim, M.field)


def cotensor_left_unitor(M: Trimodule) -> DomainMatrix:
    """``H⧠_H M → M``, ``h⧠m ↦ ε(h)m``."""
    H = M.H
    C = Cotensor(regular_trimodule(H), M)
    columns = []
    for b in C.subspace.basis:
        image: Vec = {}
        for j, x in b.items():
            h, m = divmod(j, M.dim)
            accumulate(image, m, x * H.eps(h))
        columns.append(image)
    return from_columns(columns, M.dim, M.field)


def cotensor_right_unitor(M: Trimodule) -> DomainMatrix:
    """``M⧠_H H → M``, ``m⧠h ↦ mε(h)``."""
    H = M.H
    C = Cotensor(M, regular_trimodule(H))
    columns = []
    for b in C.subspace.basis:
        image: Vec = {}
        for j, x in b.items():
            m, h = divmod(j, H.dim)
            accumulate(image, m, x * H.eps(h))
        columns.append(image)
    return from_columns(columns, M.dim, M.field)


# -- the adjunction -----------------------------------------------------------

def _coinvariant_coaction(M: Trimodule, K: Subspace) -> tuple[dict, list]:
    coaction: dict = {}
    for p, b in enumerate(K.basis):
        by_h: dict[int, Vec] = {}
        for (h, m0), c in M.lco_vec(b).items():
            accumulate(by_h.setdefault(h, {}), m0, c)
        for h, vec in by_h.items():
            for q, y in K.coordinates(vec).items():
                coaction[(p, h, q)] = y
    labels = dedupe_labels([format_vector(b, M.labels, M.field)
                            .replace(' ', '') for b in K.basis])
    return coaction, labels


def yd_on_coinvariants(M: Trimodule, S: DomainMatrix) -> YDModule:
    """
    ``G(M) = M^coH`` with the restricted left coaction and
    ``h⊳m = τ(hm)``.
    """
    if not M.has_left_action:
        raise PreconditionError(f'{M!r} has no left action.')
    H = M.H
    K = coinvariants(M)
    t = _tau_columns(M, S)
    coaction, labels = _coinvariant_coaction(M, K)
    action: dict = {}
    for p, b in enumerate(K.basis):
        for h in range(H.dim):
            image: Vec = {}
            for m, x in M.lact_vec({h: H.field.one}, b).items():
                for r, y in t[m].items():
                    accumulate(image, r, x * y)
            for q, y in K.coordinates(image).items():
                action[(h, p, q)] = y
    name = f'G({M.name})' if M.name else None
    return YDModule(H, labels, coaction, action, name=name)


def comodule_on_coinvariants(M: Trimodule) -> YDModule:
    """``M^coH`` with the restricted left coaction only."""
    coaction, labels = _coinvariant_coaction(M, coinvariants(M))
    return YDModule(M.H, labels, coaction)


def unit_map(V: YDModule) -> DomainMatrix:
    """``η_V: V → (F V)^coH``, ``v ↦ v⊗1``."""
    H = V.H
    n = H.dim
    K = coinvariants(F_build(V))
    columns = []
    for v in range(V.dim):
        element = {v * n + p: z for p, z in _one_terms(H)}
        columns.append(K.coordinates(element) if K.contains(element)
                       else {})
    return from_columns(columns, K.dim, H.field)


def counit_map(M: Trimodule) -> DomainMatrix:
    """``ε_M: F(M^coH) → M``, ``x⊗h ↦ xh``."""
    H = M.H
    K = coinvariants(M)
    columns = []
    for b, h in product(K.basis, range(H.dim)):
        columns.append(M.ract_vec(b, {h: H.field.one}))
    return from_columns(columns, M.dim, M.field)


def counit_inverse(M: Trimodule, S: DomainMatrix) -> DomainMatrix:
    """``m ↦ τ(m₀)⊗m₁``."""
    H = M.H
    n = H.dim
    K = coinvariants(M)
    t = _tau_columns(M, S)
    columns = []
    for m in range(M.dim):
        image: Vec = {}
        for (m0, h), a in M.rco(m):
            for i, x in K.coordinates(t[m0]).items():
                accumulate(image, i * n + h, a * x)
        columns.append(image)
    return from_columns(columns, K.dim * n, M.field)


def _isomorphism_witness(f: DomainMatrix, g: DomainMatrix | None,
                         name: str) -> Witness | None:
    m, k = f.shape
    if m != k:
        return Witness(lhs=str(f.shape), message=f'{name} is not square')
    if g is None:
        g = inverse(f, field_of(f))
        if g is None:
            return Witness(message=f'{name} is singular')
    if not (is_identity(compose(f, g)) and is_identity(compose(g, f))):
        return Witness(message=f'{name} and its inverse do not compose '
                               f'to the identity')
    return None


def adjunction_suite(H: DualQuasiBialgebra, V: YDModule, M: Trimodule,
                     S: DomainMatrix | None = None) -> Report:
    """
    The unit η_V and the counit ε_M of the adjunction between F and G.

    η_V is always checked. The counit, its inverse ``m ↦ τ(m₀)⊗m₁`` and
    the morphism properties need a preantipode; without one those records
    report that the equivalence is not certified.
    """
    if V.H is not H or M.H is not H:
        raise ShapeError('Objects over different dual quasi-bialgebras.')

    def need_preantipode():
        if S is None:
            raise PreconditionError('no preantipode; equivalence not '
                                    'certified')

    def unit_iso():
        return _isomorphism_witness(unit_map(V), None, 'η_V')

    def unit_morphism():
        need_preantipode()
        if not V.has_action:
            return None
        G = yd_on_coinvariants(F_build(V), S)
        report = check_yd_morphism(unit_map(V), V, G)
        failure = report.first_failure
        return None if failure is None else failure.witness

    def counit_iso():
        need_preantipode()
        return _isomorphism_witness(counit_map(M), counit_inverse(M, S),
                                    'ε_M')

    def counit_morphism():
        need_preantipode()
        if M.has_left_action:
            G = yd_on_coinvariants(M, S)
        else:
            G = comodule_on_coinvariants(M)
        report = check_trimodule_morphism(counit_map(M), F_build(G), M)
        failure = report.first_failure
        return None if failure is None else failure.witness

    return CheckSuite(f'adjunction on {V!r}, {M!r}', [
        ('unit is an isomorphism', unit_iso),
        ('unit is a morphism', unit_morphism),
        ('counit is an isomorphism', counit_iso),
        ('counit is a morphism', counit_morphism)]).run()


# -- braiding -----------------------------------------------------------------

def trimodule_braiding(M: Trimodule, N: Trimodule,
                       S: DomainMatrix) -> DomainMatrix:
    """
    ``c: M⊗_H N → N⊗_H M``,
    ``m⊗n ↦ ω(m₋₂, τ(n₀)₋₁, n₁) (m₋₁⊳τ(n₀)₀ ⊗_H m₀)·n₂``
    where ``h⊳x = τ(hx)`` on coinvariants.

    Only the bicomodule structure of the regular object is used; no
    Yetter-Drinfeld structure on H is assumed.
    """
    H = M.H
    source = TensorOverH(M, N)
    target = TensorOverH(N, M)
    tN = _tau_columns(N, S)
    dM = M.dim
    columns = []
    for j in source.quotient.free:
        m, k = divmod(j, N.dim)
        ambient: Vec = {}
        for (g2, g1, m0), a in M.lco_n(m, 2):
            for (n0, k1, k2), b in N.rco_n(k, 2):
                for (p, t0), c in N.lco_vec(tN[n0]).items():
                    factor = H.w(g2, p, k1)
                    if not factor:
                        continue
                    moved: Vec = {}
                    for y, x in N.lact(g1, t0).items():
                        for r, z in tN[y].items():
                            accumulate(moved, r, x * z)
                    for r, x in moved.items():
                        for q, y in target._ract(r * dM + m0, k2).items():
                            accumulate(ambient, q,
                                       a * b * c * factor * x * y)
        columns.append(target.project(ambient))
    return from_columns(columns, target.dim, H.field)


def lambda_map(U: YDModule, V: YDModule) -> DomainMatrix:
    """``λ_{U,V} = φ₂(V,U)⁻¹∘F(c_{U,V})∘φ₂(U,V)``."""
    H = U.H
    F_c = kron(yd_braiding(U, V), identity(H.dim, H.field), H.field)
    return compose(phi2_inverse(V, U), F_c, phi2(U, V))
