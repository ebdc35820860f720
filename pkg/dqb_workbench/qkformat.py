"""
Reading and writing the line oriented ``.qk`` structure-constants format.

A file declares its field and then a sequence of object blocks::

    field Q

    object dqb H dim 2 basis 1 g
      delta 1 1 1 = 1
      delta g g g = 1
      counit 1 = 1
      counit g = 1
      mult 1 1 1 = 1
      mult 1 g g = 1
      mult g 1 g = 1
      mult g g 1 = 1
      unit 1 = 1
      omega g g g = -1
    end

Entries name basis vectors by label. Objects built over another object
carry ``over <name> sha256 <hex>``, the hash of the canonical block of the
referenced object.
"""
import hashlib
import logging
import re
from itertools import product
from typing import Any

from pydantic import ConfigDict, ValidationError
from sympy.polys.matrices import DomainMatrix

from dqb_workbench.base import (NotFound, ParseError, PreconditionError,
                                WorkbenchError)
from dqb_workbench.coalgebra import Coalgebra, check_coalgebra
from dqb_workbench.crossed import CrossedGModule, crossed_check
from dqb_workbench.dqb import (DQBMorphism, DualQuasiBialgebra,
                               GroupCocycleData, check_dqb,
                               check_dqb_morphism, check_group_cocycle)
from dqb_workbench.exact import Field, matrix, rows_of
from dqb_workbench.hopfmod import Trimodule, check_trimodule
from dqb_workbench.preantipode import check_preantipode
from dqb_workbench.schemas import Model, Report
from dqb_workbench.yd import (BraidedBialgebra, YDModule,
                              check_braided_bialgebra, check_comodule,
                              check_yd)

logger = logging.getLogger(__name__)

# Entry keys of each kind with the basis each index slot refers to:
# 's' the object's own basis, 'b' the base object's, 't' a map's target.
ENTRY_SLOTS = {
    'coalgebra': {'delta': 'sss', 'counit': 's'},
    'dqb': {'delta': 'sss', 'counit': 's', 'mult': 'sss', 'unit': 's',
            'omega': 'sss'},
    'group': {'times': 'ss', 'theta': 'sss'},
    'comodule': {'coaction': 'sbs'},
    'yd': {'coaction': 'sbs', 'action': 'bss'},
    'braided': {'coaction': 'sbs', 'action': 'bss', 'mult': 'sss',
                'unit': 's', 'delta': 'sss', 'counit': 's'},
    'trimodule': {'lco': 'sbs', 'rco': 'ssb', 'ract': 'sbs', 'lact': 'bss'},
    'crossed': {'grade': 's', 'action': 'bss'},
    'preantipode': {'entry': 'bb'},
    'map': {'entry': 'ts'},
}

# Entries whose value is a basis label of the given slot, not a scalar.
LABEL_VALUES = {('group', 'times'): 's', ('crossed', 'grade'): 'b'}

BASED = {'comodule', 'yd', 'braided', 'trimodule', 'crossed',
         'preantipode', 'map'}
NO_BASIS = {'preantipode', 'map'}

TOKEN = re.compile(r'\S+')


class LinearMap(Model):
    """
    A named linear map between two workspace objects, column j the image
    of the j-th source basis vector.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    source: str
    target: str
    matrix: DomainMatrix


class Workspace(Model):
    """
    Named objects over a common field, in declaration order.
    """
    field: Field = Field()
    objects: dict[str, Any] = {}
    kinds: dict[str, str] = {}
    bases: dict[str, str] = {}
    provenance: dict[str, tuple[str, str]] = {}

    def __contains__(self, name: str) -> bool:
        return name in self.objects

    @property
    def names(self) -> list[str]:
        return list(self.objects)

    def get(self, name: str, kind: str | tuple[str, ...] | None = None):
        """
        Look up an object, optionally requiring its kind.

        Raises:
            NotFound: No object of that name and kind.
        """
        if name not in self.objects:
            raise NotFound(f'No object named "{name}" in the workspace.')
        kinds = (kind,) if isinstance(kind, str) else kind
        if kinds and self.kinds[name] not in kinds:
            raise NotFound(f'"{name}" is a {self.kinds[name]}, expected '
                           f'{" or ".join(kinds)}.')
        return self.objects[name]

    def of_kind(self, *kinds: str) -> list[str]:
        return [n for n in self.objects if self.kinds[n] in kinds]

    def name_of(self, obj: Any) -> str:
        for name, candidate in self.objects.items():
            if candidate is obj:
                return name
        raise NotFound(f'{obj!r} is not in the workspace.')

    def add(self, name: str, obj: Any, over: str | None = None,
            kind: str | None = None,
            provenance: tuple[str, str] | None = None) -> None:
        """
        Register an object.

        Args:
            name:       Object name, unique in the workspace.
            obj:        The structure.
            over:       Name of the base object; looked up from the
                        object itself when omitted.
            kind:       Object kind; inferred when omitted.
            provenance: ``(H, R)`` for a bosonization.
        """
        if not TOKEN.fullmatch(name) or name in self.objects:
            raise PreconditionError(f'Invalid or duplicate object name '
                                    f'"{name}".')
        kind = kind or infer_kind(obj)
        if kind in BASED and kind != 'map':
            if over is None:
                base = obj.group if kind == 'crossed' else getattr(
                    obj, 'H', None)
                if base is None:
                    raise PreconditionError(f'{kind} "{name}" needs a base '
                                            f'object.')
                over = self.name_of(base) if kind != 'crossed' else next(
                    (n for n in self.of_kind('group')
                     if self.objects[n] == base), None)
                if over is None:
                    raise NotFound(f'Group of "{name}" is not in the '
                                   f'workspace.')
            self.get(over)
            self.bases[name] = over
        if kind == 'map':
            self.get(obj.source)
            self.get(obj.target)
        self.objects[name] = obj
        self.kinds[name] = kind
        if provenance is not None:
            self.provenance[name] = tuple(provenance)

    def morphism(self, name: str) -> DQBMorphism:
        """The stored map as a morphism of dual quasi-bialgebras."""
        f = self.get(name, 'map')
        return DQBMorphism(self.get(f.source, 'dqb'),
                           self.get(f.target, 'dqb'), f.matrix, name=name)


def infer_kind(obj: Any) -> str:
    if isinstance(obj, BraidedBialgebra):
        return 'braided'
    if isinstance(obj, Trimodule):
        return 'trimodule'
    if isinstance(obj, YDModule):
        return 'yd' if obj.has_action else 'comodule'
    if isinstance(obj, CrossedGModule):
        return 'crossed'
    if isinstance(obj, GroupCocycleData):
        return 'group'
    if isinstance(obj, DualQuasiBialgebra):
        return 'dqb'
    if isinstance(obj, Coalgebra):
        return 'coalgebra'
    if isinstance(obj, LinearMap):
        return 'map'
    raise PreconditionError(f'Cannot store {type(obj).__name__} in a '
                            f'workspace.')


def labels_of(obj: Any) -> list[str]:
    return list(obj.labels)


# serialization

def _entry(key: str, labels: list[str], value: str) -> str:
    return f'  {key} {" ".join(labels)} = {value}'


def _tensor_lines(key: str, items, spaces: list[list[str]],
                  field: Field) -> list[str]:
    return [_entry(key, [spaces[s][i] for s, i in enumerate(index)],
                   field.format(value))
            for index, value in sorted(items)]


def _vector_lines(key: str, vec: dict, labels: list[str],
                  field: Field) -> list[str]:
    return [_entry(key, [labels[i]], field.format(vec[i]))
            for i in sorted(vec)]


def _omega_lines(H: DualQuasiBialgebra) -> list[str]:
    field = H.field
    lines = []
    for index in product(range(H.dim), repeat=3):
        default = field.one
        for i in index:
            default *= H.counit.get(i, field.zero)
        value = H.w(*index)
        if value != default:
            lines.append(_entry('omega', [H.labels[i] for i in index],
                                field.format(value)))
    return lines


def _coalgebra_lines(C: Coalgebra) -> list[str]:
    s = C.labels
    return (_tensor_lines('delta', C.delta.items(), [s, s, s], C.field)
            + _vector_lines('counit', C.counit, s, C.field))


def _body(ws: Workspace, name: str) -> list[str]:
    obj, kind = ws.objects[name], ws.kinds[name]
    field = ws.field
    base = ws.objects.get(ws.bases.get(name))
    b = labels_of(base) if base is not None else []
    lines = []
    if name in ws.provenance:
        lines.append('  provenance ' + ' '.join(ws.provenance[name]))
    if kind == 'coalgebra':
        lines += _coalgebra_lines(obj)
    elif kind == 'dqb':
        s = obj.labels
        lines += _coalgebra_lines(obj)
        lines += _tensor_lines('mult', obj.mult.items(), [s, s, s], field)
        lines += _vector_lines('unit', obj.unit, s, field)
        lines += _omega_lines(obj)
    elif kind == 'group':
        s = obj.labels
        lines += [f'  times {s[x]} {s[y]} = {s[obj.mul_table[x][y]]}'
                  for x, y in product(range(obj.order), repeat=2)]
        lines += _tensor_lines('theta', obj.theta.items(), [s, s, s], field)
    elif kind in ('comodule', 'yd', 'braided'):
        V = obj.carrier if kind == 'braided' else obj
        s = V.labels
        lines += _tensor_lines('coaction', V.coaction.items(), [s, b, s],
                               field)
        if V.has_action:
            lines += _tensor_lines('action', V.action.items(), [b, s, s],
                                   field)
        if kind == 'braided':
            lines += _tensor_lines('mult', obj.mult.items(), [s, s, s],
                                   field)
            lines += _vector_lines('unit', obj.unit, s, field)
            lines += _tensor_lines('delta', obj.delta.items(), [s, s, s],
                                   field)
            lines += _vector_lines('counit', obj.counit, s, field)
    elif kind == 'trimodule':
        s = obj.labels
        lines += _tensor_lines('lco', obj.lco_tensor.items(), [s, b, s],
                               field)
        lines += _tensor_lines('rco', obj.rco_tensor.items(), [s, s, b],
                               field)
        lines += _tensor_lines('ract', obj.ract_tensor.items(), [s, b, s],
                               field)
        if obj.lact_tensor is not None:
            lines += _tensor_lines('lact', obj.lact_tensor.items(),
                                   [b, s, s], field)
    elif kind == 'crossed':
        s = obj.labels
        lines += [f'  grade {s[v]} = {b[g]}'
                  for v, g in enumerate(obj.grading)]
        items = [((h, v, w), c) for (h, v), image in obj.action.items()
                 for w, c in image.items()]
        lines += _tensor_lines('action', items, [b, s, s], field)
    elif kind == 'preantipode':
        items = [((i, j), c) for i, row in rows_of(obj).items()
                 for j, c in row.items()]
        lines += _tensor_lines('entry', items, [b, b], field)
    elif kind == 'map':
        s = labels_of(ws.objects[obj.source])
        t = labels_of(ws.objects[obj.target])
        items = [((i, j), c) for i, row in rows_of(obj.matrix).items()
                 for j, c in row.items()]
        lines += _tensor_lines('entry', items, [t, s], field)
    return lines


def _reference(ws: Workspace, keyword: str, name: str) -> str:
    return f' {keyword} {name} sha256 {block_hash(ws, name)}'


def _header(ws: Workspace, name: str) -> str:
    obj, kind = ws.objects[name], ws.kinds[name]
    header = f'object {kind} {name}'
    if kind == 'map':
        header += _reference(ws, 'from', obj.source)
        header += _reference(ws, 'to', obj.target)
    elif name in ws.bases:
        header += _reference(ws, 'over', ws.bases[name])
    if kind not in NO_BASIS:
        labels = labels_of(obj)
        header += f' dim {len(labels)} basis {" ".join(labels)}'
    return header


def serialize_object(ws: Workspace, name: str) -> str:
    """The canonical block of one object, closed by ``end``."""
    return '\n'.join([_header(ws, name), *_body(ws, name), 'end']) + '\n'


def block_hash(ws: Workspace, name: str) -> str:
    return hashlib.sha256(
        serialize_object(ws, name).encode('utf-8')).hexdigest()


def serialize(ws: Workspace) -> str:
    """
    The canonical text of a workspace.

    Entries are sorted by basis index, zero entries are omitted and ω is
    written only where it differs from ``ε⊗ε⊗ε``.
    """
    blocks = [f'field {ws.field.name}\n']
    blocks += [serialize_object(ws, name) for name in ws.objects]
    return '\n'.join(blocks)


# parsing

class _Line:
    def __init__(self, number: int, text: str):
        self.number = number
        self.tokens = [(m.group(), m.start() + 1)
                       for m in TOKEN.finditer(text)]

    def error(self, message: str, position: int = 0) -> ParseError:
        column = self.tokens[position][1] if position < len(
            self.tokens) else 1
        return ParseError(message, self.number, column)


class _Block:
    def __init__(self, line: _Line):
        self.line = line
        self.kind = ''
        self.name = ''
        self.refs: dict[str, str] = {}
        self.labels: list[str] | None = None
        self.entries: dict[str, dict] = {}
        self.provenance: tuple[str, str] | None = None


def _parse_header(line: _Line, ws: Workspace,
                  verify: bool = True) -> _Block:
    block = _Block(line)
    words = [t for t, _ in line.tokens]
    if len(words) < 3:
        raise line.error('Expected "object <kind> <name> ...".')
    block.kind, block.name = words[1], words[2]
    if block.kind not in ENTRY_SLOTS:
        raise line.error(f'Unknown object kind "{block.kind}".', 1)
    if block.name in ws:
        raise line.error(f'Duplicate object "{block.name}".', 2)
    position = 3
    dim = None
    while position < len(words):
        word = words[position]
        if word in ('over', 'from', 'to'):
            if position + 3 >= len(words):
                raise line.error(f'Expected "{word} <name> sha256 <hex>".',
                                 position)
            ref = words[position + 1]
            if words[position + 2] != 'sha256':
                raise line.error('Expected "sha256".', position + 2)
            if ref not in ws:
                raise line.error(f'Unknown reference "{ref}".', position + 1)
            if verify and block_hash(ws, ref) != words[position + 3]:
                raise line.error(f'Hash of "{ref}" does not match.',
                                 position + 3)
            block.refs[word] = ref
            position += 4
        elif word == 'dim':
            try:
                dim = int(words[position + 1])
            except (IndexError, ValueError):
                raise line.error('Expected an integer dimension.',
                                 position + 1)
            position += 2
        elif word == 'basis':
            block.labels = words[position + 1:]
            position = len(words)
        else:
            raise line.error(f'Unexpected "{word}".', position)

    if block.kind in NO_BASIS:
        if block.labels is not None or dim is not None:
            raise line.error(f'A {block.kind} takes its basis from its '
                             f'references.')
    elif block.labels is None or dim is None:
        raise line.error('Missing "dim" or "basis".')
    elif len(block.labels) != dim:
        raise line.error(f'{len(block.labels)} labels for dimension {dim}.')
    elif len(set(block.labels)) != dim or '=' in block.labels:
        raise line.error('Basis labels must be distinct.')

    expected = {'map': {'from', 'to'}}.get(
        block.kind, {'over'} if block.kind in BASED else set())
    if set(block.refs) != expected:
        raise line.error(f'A {block.kind} needs references '
                         f'{sorted(expected) or "none"}.')
    return block


def _spaces(block: _Block, ws: Workspace) -> dict[str, list[str]]:
    spaces = {}
    if block.labels is not None:
        spaces['s'] = block.labels
    if 'over' in block.refs:
        spaces['b'] = labels_of(ws.objects[block.refs['over']])
    if block.kind == 'map':
        spaces['s'] = labels_of(ws.objects[block.refs['from']])
        spaces['t'] = labels_of(ws.objects[block.refs['to']])
    return spaces


def _parse_entry(line: _Line, block: _Block, ws: Workspace,
                 spaces: dict[str, list[str]]) -> None:
    words = [t for t, _ in line.tokens]
    key = words[0]
    if key == 'provenance':
        if len(words) != 3:
            raise line.error('Expected "provenance <H> <R>".')
        block.provenance = (words[1], words[2])
        return
    slots = ENTRY_SLOTS[block.kind].get(key)
    if slots is None:
        raise line.error(f'Unknown entry "{key}" in a {block.kind}.')
    if len(words) != len(slots) + 3 or words[-2] != '=':
        placeholders = ' '.join(['<label>'] * len(slots))
        raise line.error(f'Expected "{key} {placeholders} = <value>".')
    index = []
    for position, slot in enumerate(slots, start=1):
        try:
            index.append(spaces[slot].index(words[position]))
        except ValueError:
            raise line.error(f'Unknown basis label "{words[position]}".',
                             position)
    value_slot = LABEL_VALUES.get((block.kind, key))
    if value_slot is not None:
        try:
            value = spaces[value_slot].index(words[-1])
        except ValueError:
            raise line.error(f'Unknown basis label "{words[-1]}".',
                             len(words) - 1)
    else:
        try:
            value = ws.field.scalar(words[-1])
        except WorkbenchError as err:
            raise line.error(str(err), len(words) - 1)
    table = block.entries.setdefault(key, {})
    if tuple(index) in table:
        raise line.error(f'Duplicate entry {key} {" ".join(words[1:-2])}.')
    table[tuple(index)] = value


def _flat(table: dict) -> dict:
    return {index[0]: value for index, value in table.items()}


def _build(block: _Block, ws: Workspace) -> Any:
    e = block.entries
    field = ws.field
    labels = block.labels
    base = ws.objects.get(block.refs.get('over'))
    kind = block.kind
    if kind == 'coalgebra':
        return Coalgebra(field, labels, e.get('delta', {}),
                         _flat(e.get('counit', {})))
    if kind == 'dqb':
        counit = _flat(e.get('counit', {}))
        omega = {}
        for index in product(sorted(counit), repeat=3):
            omega[index] = counit[index[0]] * counit[index[1]] * \
                counit[index[2]]
        omega.update(e.get('omega', {}))
        return DualQuasiBialgebra(field, labels, e.get('delta', {}), counit,
                                  e.get('mult', {}), _flat(e.get('unit', {})),
                                  omega)
    if kind == 'group':
        times = e.get('times', {})
        n = len(labels)
        missing = [(x, y) for x, y in product(range(n), repeat=2)
                   if (x, y) not in times]
        if missing:
            x, y = missing[0]
            raise ParseError(f'group {block.name}: no product for '
                             f'{labels[x]} {labels[y]}', block.line.number, 1)
        return GroupCocycleData(
            labels=labels, field=field, theta=e.get('theta', {}),
            mul_table=[[times[(x, y)] for y in range(n)] for x in range(n)])
    if kind in ('comodule', 'yd', 'braided'):
        action = None if kind == 'comodule' else e.get('action', {})
        V = YDModule(base, labels, e.get('coaction', {}), action,
                     name=block.name)
        if kind != 'braided':
            return V
        return BraidedBialgebra(V, e.get('mult', {}),
                                _flat(e.get('unit', {})), e.get('delta', {}),
                                _flat(e.get('counit', {})), name=block.name)
    if kind == 'trimodule':
        return Trimodule(base, labels, e.get('lco', {}), e.get('rco', {}),
                         e.get('ract', {}), e.get('lact'), name=block.name)
    if kind == 'crossed':
        grades = _flat(e.get('grade', {}))
        if len(grades) != len(labels):
            raise ParseError(f'crossed {block.name}: every basis vector '
                             f'needs a grade', block.line.number, 1)
        action = {}
        for (h, v, w), c in e.get('action', {}).items():
            action.setdefault((h, v), {})[w] = c
        return CrossedGModule(group=base, labels=labels,
                              grading=[grades[v] for v in range(len(labels))],
                              action=action)
    if kind == 'preantipode':
        return matrix(_rows(e.get('entry', {})), (base.dim, base.dim),
                      field)
    source = ws.objects[block.refs['from']]
    target = ws.objects[block.refs['to']]
    return LinearMap(
        source=block.refs['from'], target=block.refs['to'],
        matrix=matrix(_rows(e.get('entry', {})),
                      (len(labels_of(target)), len(labels_of(source))),
                      field))


def _rows(table: dict) -> dict[int, dict[int, Any]]:
    rows: dict[int, dict[int, Any]] = {}
    for (i, j), value in table.items():
        rows.setdefault(i, {})[j] = value
    return rows


def validate(ws: Workspace, name: str) -> Report | None:
    """
    Run the defining checks of one object; None for kinds without any.
    """
    obj, kind = ws.objects[name], ws.kinds[name]
    base = ws.objects.get(ws.bases.get(name))
    if kind == 'coalgebra':
        return check_coalgebra(obj, name)
    if kind == 'dqb':
        return check_dqb(obj, name)
    if kind == 'group':
        return check_group_cocycle(obj)
    if kind == 'comodule':
        return check_comodule(obj, name)
    if kind == 'yd':
        return check_yd(obj, name)
    if kind == 'braided':
        return check_braided_bialgebra(obj)
    if kind == 'trimodule':
        return check_trimodule(obj, name)
    if kind == 'crossed':
        return crossed_check(obj)
    if kind == 'preantipode':
        return check_preantipode(base, obj)
    if ws.kinds[obj.source] == ws.kinds[obj.target] == 'dqb':
        return check_dqb_morphism(ws.morphism(name))
    return None


def parse(text: str | bytes, field: Field | None = None,
          check: bool = True) -> Workspace:
    """
    Read a workspace from ``.qk`` text.

    Args:
        text:  File contents.
        field: Read the scalars in this field instead of the declared one.
        check: Run the defining checks of every object on load.

    Returns:
        The workspace.

    Raises:
        ParseError:        Syntax error, unknown reference or an object
                           that cannot be constructed.
        PreconditionError: An object fails its defining checks; the
                           report is attached.
    """
    if isinstance(text, bytes):
        text = _decode(text)
    ws: Workspace | None = None
    block: _Block | None = None
    spaces: dict = {}
    verify = True
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _Line(number, raw)
        if not line.tokens or line.tokens[0][0].startswith('#'):
            continue
        head = line.tokens[0][0]
        if ws is None:
            if head != 'field' or len(line.tokens) != 2:
                raise line.error('Expected "field Q" or "field F<p>".')
            try:
                declared = Field.parse(line.tokens[1][0])
            except WorkbenchError as err:
                raise line.error(str(err), 1)
            ws = Workspace(field=field or declared)
            # hashes are taken over blocks written in the declared field
            verify = field is None or field == declared
            if not verify:
                logger.warning(f'Reading a {declared.name} file over '
                               f'{field.name}, references are not '
                               f'verified.')
        elif block is None:
            if head != 'object':
                raise line.error(f'Expected "object", got "{head}".')
            block = _parse_header(line, ws, verify)
            spaces = _spaces(block, ws)
        elif head == 'end':
            _finish(block, ws, check)
            block = None
        else:
            _parse_entry(line, block, ws, spaces)
    if ws is None:
        raise ParseError('Empty file, expected a field declaration.', 1, 1)
    if block is not None:
        raise block.line.error(f'Object "{block.name}" is not closed by '
                               f'"end".')
    return ws


def _decode(data: bytes) -> str:
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as err:
        line = data.count(b'\n', 0, err.start) + 1
        column = err.start - data.rfind(b'\n', 0, err.start)
        raise ParseError(f'Invalid UTF-8 byte 0x{data[err.start]:02x}.',
                         line, column) from err


def _finish(block: _Block, ws: Workspace, check: bool) -> None:
    try:
        obj = _build(block, ws)
    except ParseError:
        raise
    except (WorkbenchError, ValidationError) as err:
        logger.error(f'Cannot build {block.kind} "{block.name}": {err}')
        raise ParseError(f'{block.kind} {block.name}: {err}',
                         block.line.number, 1) from err
    over = block.refs.get('over')
    ws.add(block.name, obj, over=over, kind=block.kind,
           provenance=block.provenance)
    if not check:
        return
    report = validate(ws, block.name)
    if report is not None and not report.passed:
        failure = report.first_failure
        logger.error(f'{block.kind} "{block.name}" fails {failure.name}.')
        raise PreconditionError(
            f'{block.kind} {block.name}: {failure.name} fails', report)
    logger.debug(f'Loaded {block.kind} "{block.name}".')


def load(path: str, field: Field | None = None,
         check: bool = True) -> Workspace:
    with open(path, 'rb') as f:
        return parse(f.read(), field, check)


def dump(ws: Workspace, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serialize(ws))
