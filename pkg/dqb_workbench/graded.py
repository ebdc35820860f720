"""
The associated graded dual quasi-bialgebra of a filtered one and its
projection onto the degree-zero part.
"""
import logging
from itertools import product

from dqb_workbench.base import CheckSuite, PreconditionError
from dqb_workbench.bosonization import ProjectionData
from dqb_workbench.coalgebra import (Filtration, certify_coradical,
                                     graded_coalgebra)
from dqb_workbench.dqb import DQBMorphism, DualQuasiBialgebra, subbialgebra
from dqb_workbench.exact import (Vec, accumulate, from_columns, inverse,
                                 rows_of)
from dqb_workbench.schemas import Report, Witness

logger = logging.getLogger(__name__)


class GradedDQB(DualQuasiBialgebra):
    """
    ``gr A`` on the echelon representatives of a filtration.

    ``representatives[i]`` is the element of A whose class is basis vector
    i, of degree ``degrees[i]``. ``declared`` is set when the filtration
    was supplied rather than certified as the coradical filtration.
    """

    def __init__(self, *args, degrees, representatives,
                 source: DualQuasiBialgebra, declared: bool = False,
                 **kwargs):
        super().__init__(*args, **kwargs)
        self.degrees = list(degrees)
        self.representatives = list(representatives)
        self.source = source
        self.declared = declared

    def homogeneous(self, degree: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == degree]


def check_dual_chevalley(A: DualQuasiBialgebra, F: Filtration) -> Report:
    """
    The first layer of F is a subcoalgebra containing 1 and closed under
    the multiplication.
    """
    base = F.layers[0]

    def unital():
        if base.contains(A.one):
            return None
        return Witness(at=['1'], message='1 is not in A_0')

    def closed():
        for a, b in product(base.basis, repeat=2):
            value = A.mul(a, b)
            if not base.contains(value):
                return Witness(at=[A.format(a), A.format(b)],
                               lhs=A.format(value),
                               message='A_0·A_0 ⊄ A_0')
        return None

    return CheckSuite(f'dual Chevalley property of {A!r}', [
        ('coalgebra filtration', lambda: F.check(A)),
        ('unit in degree 0', unital),
        ('degree 0 closed under products', closed)]).run()


def check_algebra_filtration(A: DualQuasiBialgebra,
                             F: Filtration) -> Report:
    """``A_a·A_b ⊆ A_{a+b}`` for all layers."""
    top = len(F) - 1

    def inclusion():
        for a, b in product(range(len(F)), repeat=2):
            target = F.layers[min(a + b, top)]
            for x, y in product(F.layers[a].basis, F.layers[b].basis):
                value = A.mul(x, y)
                if not target.contains(value):
                    return Witness(at=[f'A_{a}', f'A_{b}', A.format(x),
                                       A.format(y)],
                                   lhs=A.format(value),
                                   message=f'A_{a}·A_{b} ⊄ A_{a + b}')
        return None

    return CheckSuite(f'algebra filtration of {A!r}',
                      [('products respect degree', inclusion)]).run()


def coradical_filtration(A: DualQuasiBialgebra,
                         grouplikes: list[Vec] | None = None
                         ) -> Filtration:
    """
    The certified coradical filtration of a pointed A.

    Raises:
        PreconditionError: The grouplikes do not certify the coradical.
    """
    certificate = certify_coradical(A, grouplikes)
    if not certificate.certified:
        raise PreconditionError(f'coradical of {A!r} not certified: '
                                f'{certificate.message}')
    return certificate.filtration


def gr_dqb(A: DualQuasiBialgebra, F: Filtration,
           declared: bool = False) -> GradedDQB:
    """
    ``gr A`` with

    * ``m_gr(x̄⊗ȳ)`` the class of xy in degree ``deg x + deg y``,
    * Δ keeping the components of bidegree (a, b) with ``a + b = deg x``,
    * ``ω_gr`` equal to ω on degree (0, 0, 0) and zero elsewhere.

    Args:
        A:        The filtered dual quasi-bialgebra.
        F:        Its coradical filtration.
        declared: Mark F as supplied, not certified.

    Raises:
        PreconditionError: The dual Chevalley property or the algebra
            filtration condition fails.
    """
    for report in (check_dual_chevalley(A, F),
                   check_algebra_filtration(A, F)):
        if not report.passed:
            failure = report.first_failure
            logger.error(f'gr of {A!r} rejected: {failure.name} fails.')
            raise PreconditionError(f'{failure.name} fails', report)

    C = graded_coalgebra(A, F)
    n = A.dim
    field = A.field
    degrees = C.degrees
    representatives = C.representatives
    change = inverse(from_columns(representatives, n, field), field)
    to_graded = rows_of(change)

    def coordinates(vec: Vec) -> Vec:
        out: Vec = {}
        for i, x in vec.items():
            for row, r in to_graded.items():
                if r.get(i):
                    accumulate(out, row, x * r[i])
        return out

    mult = {}
    for i, j in product(range(n), repeat=2):
        degree = degrees[i] + degrees[j]
        value = A.mul(representatives[i], representatives[j])
        for k, c in coordinates(value).items():
            if degrees[k] == degree:
                mult[(i, j, k)] = c
    unit = {k: c for k, c in coordinates(A.one).items() if degrees[k] == 0}
    base = C.homogeneous(0)
    omega = {}
    for index in product(base, repeat=3):
        value = A.w_vec(*(representatives[i] for i in index))
        if value:
            omega[index] = value
    logger.debug(f'gr {A!r}: degree dims '
                 f'{[len(C.homogeneous(d)) for d in range(len(F))]}.')
    return GradedDQB(field, C.labels, C.delta, C.counit, mult, unit, omega,
                     degrees=degrees, representatives=representatives,
                     source=A, declared=declared)


def representative_map(G: GradedDQB) -> DQBMorphism:
    """
    ``gr A → A`` sending each class to its echelon representative, a
    morphism exactly when A is coradically graded by F.
    """
    return DQBMorphism(G, G.source,
                       from_columns(G.representatives, G.source.dim,
                                    G.field), name='representatives')


def gr_projection(A: DualQuasiBialgebra, F: Filtration,
                  declared: bool = False) -> ProjectionData:
    """
    ``gr A`` with ``σ(h) = h + A₋₁`` and ``π(a + A_{n-1}) = δ_{n,0}a``
    onto ``H = A₀``.
    """
    G = gr_dqb(A, F, declared)
    field = G.field
    base = G.homogeneous(0)
    H, inclusion = subbialgebra(G, [{i: field.one} for i in base])
    position = {i: p for p, i in enumerate(base)}
    pi_columns = [{position[i]: field.one} if i in position else {}
                  for i in range(G.dim)]
    pi = DQBMorphism(G, H, from_columns(pi_columns, H.dim, field),
                     name='π')
    sigma = DQBMorphism(H, G, inclusion.matrix, name='σ')
    return ProjectionData(A=G, H=H, sigma=sigma, pi=pi)
