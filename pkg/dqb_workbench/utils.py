from itertools import product
from typing import Sequence

from dqb_workbench.exact import Field


def format_vector(vec: dict, labels: Sequence[str] | Sequence[Sequence[str]],
                  field: Field) -> str:
    """
    Render a sparse vector or tensor as a signed sum of basis labels.

    Args:
        vec:    Sparse vector ``{index: scalar}`` or sparse tensor
                ``{(i, j, ...): scalar}``.
        labels: Basis labels, or one label list per tensor slot.
        field:  Ground field used to print coefficients.

    Returns:
        A string such as ``x⊗1 - g⊗x``; ``0`` for the zero vector.
    """
    if not vec:
        return '0'
    terms = []
    for key in sorted(vec):
        if isinstance(key, tuple):
            slots = labels if _is_nested(labels) else [labels] * len(key)
            name = '⊗'.join(slots[s][i] for s, i in enumerate(key))
        else:
            name = labels[key]
        coefficient = field.format(vec[key])
        if coefficient == '1':
            term = name
        elif coefficient == '-1':
            term = f'-{name}'
        else:
            term = f'{coefficient}*{name}'
        terms.append(term)
    text = ' + '.join(terms)
    return text.replace('+ -', '- ')


def _is_nested(labels) -> bool:
    return bool(labels) and not isinstance(labels[0], str)


def tensor_labels(*label_lists: Sequence[str], sep: str = '⊗') -> list[str]:
    """
    Labels of a tensor product basis in ``v * dim(W) + w`` order.
    """
    return [sep.join(parts) for parts in product(*label_lists)]


def dedupe_labels(labels: Sequence[str]) -> list[str]:
    seen: dict[str, int] = {}
    result = []
    for label in labels:
        if label in seen:
            seen[label] += 1
            label = f'{label}_{seen[label]}'
        else:
            seen[label] = 0
        result.append(label)
    return result
