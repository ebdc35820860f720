import os

import pytest

from dqb_workbench.base import NotFound, ParseError, PreconditionError
from dqb_workbench.dqb import from_group_cocycle, standard_cyclic
from dqb_workbench.exact import Field
from dqb_workbench.qkformat import (Workspace, block_hash, dump, load, parse,
                                    serialize, serialize_object, validate)

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                    'data')


def data_path(filename):
    return os.path.join(DATA, filename)


FIX5 = """field Q

object dqb M dim 2 basis 1 e
  delta 1 1 1 = 1
  delta e e e = 1
  counit 1 = 1
  counit e = 1
  mult 1 1 1 = 1
  mult 1 e e = 1
  mult e 1 e = 1
  mult e e e = 1
  unit 1 = 1
end
"""


def read_text(filename):
    with open(data_path(filename), encoding='utf-8') as f:
        return f.read()


@pytest.mark.parametrize('filename', ['fix1.qk', 'fix2.qk', 'fix5.qk',
                                      'klein.qk', 'z2.qk'])
def test_canonical_files(filename):
    text = read_text(filename)
    assert serialize(parse(text)) == text


def test_load_and_dump(tmp_path, fix2_ws):
    path = str(tmp_path / 'copy.qk')
    dump(fix2_ws, path)
    with open(path, encoding='utf-8') as f:
        assert f.read() == read_text('fix2.qk')
    again = load(path)
    assert again.names == ['H', 'J']
    assert again.kinds == {'H': 'dqb', 'J': 'yd'}
    assert again.bases == {'J': 'H'}


def test_omega_default(fix2_ws):
    # only ω(g, g, g) differs from ε⊗ε⊗ε
    block = serialize_object(fix2_ws, 'H')
    assert [line for line in block.splitlines() if 'omega' in line] == \
        ['  omega g g g = -1']

    ws = parse(FIX5)
    assert ws.get('M').has_trivial_omega
    assert 'omega' not in serialize(ws)


def test_block_hash(fix2_ws):
    assert block_hash(fix2_ws, 'H') == \
        '27b545dfcb70e3ebe3a523016b9eea5c29d550ad979e5c6842b4d0aac4e36f83'
    assert block_hash(fix2_ws, 'H') != block_hash(fix2_ws, 'J')


def test_other_field():
    ws = parse(read_text('fix2.qk'), field=Field(kind='F', p=5))
    assert ws.field.name == 'F5'
    assert serialize(ws).splitlines()[0] == 'field F5'
    # -1 is written as its representative
    assert '  omega g g g = 4' in serialize(ws)


def test_unknown_label():
    text = FIX5.replace('  delta e e e = 1', '  delta e e x = 1')
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (5, 13)
    assert 'x' in str(info.value)


def test_syntax_errors():
    with pytest.raises(ParseError) as info:
        parse('')
    assert info.value.line == 1

    with pytest.raises(ParseError) as info:
        parse('field R\n')
    assert (info.value.line, info.value.column) == (1, 7)

    with pytest.raises(ParseError) as info:
        parse(FIX5.replace('dim 2', 'dim 3'))
    assert info.value.line == 3

    with pytest.raises(ParseError) as info:
        parse(FIX5.replace('object dqb', 'object monoid'))
    assert info.value.column == 8

    with pytest.raises(ParseError) as info:
        parse(FIX5.replace('end\n', ''))
    assert info.value.line == 3

    with pytest.raises(ParseError) as info:
        parse(FIX5.replace('  unit 1 = 1', '  unit 1 = 1\n  unit 1 = 1'))
    assert info.value.line == 13

    with pytest.raises(ParseError):
        parse(FIX5.replace('  unit 1 = 1', '  unit 1 = 1/0'))


def test_invalid_utf8(tmp_path):
    assert serialize(parse(FIX5.encode())) == FIX5

    with pytest.raises(ParseError) as info:
        parse(b'field Q\n\xff\n')
    assert (info.value.line, info.value.column) == (2, 1)

    path = tmp_path / 'broken.qk'
    path.write_bytes(FIX5.encode().replace(b'  delta 1 1 1',
                                           b'  \xffdelta 1 1 1'))
    with pytest.raises(ParseError) as info:
        load(str(path))
    assert (info.value.line, info.value.column) == (4, 3)
    assert '0xff' in str(info.value)


def test_comments_and_blank_lines():
    text = FIX5.replace('  unit 1 = 1', '\n  # the unit\n  unit 1 = 1')
    assert serialize(parse(text)) == FIX5


def test_bad_hash():
    text = read_text('fix2.qk')
    good = '27b545dfcb70e3ebe3a523016b9eea5c29d550ad979e5c6842b4d0aac4e36f83'
    with pytest.raises(ParseError) as info:
        parse(text.replace(good, '0' * 64))
    assert info.value.line == 16
    assert 'Hash' in str(info.value)

    with pytest.raises(ParseError):
        parse(text.replace('over H', 'over K'))


def test_non_invertible_omega():
    text = read_text('fix2.qk').split('\nobject yd')[0]
    assert serialize(parse(text)) == text
    with pytest.raises(ParseError) as info:
        parse(text.replace('omega g g g = -1', 'omega g g g = 0'))
    assert info.value.line == 3


def test_failing_object():
    text = FIX5.replace('  unit 1 = 1\n', '')
    with pytest.raises(PreconditionError) as info:
        parse(text)
    assert str(info.value).startswith('dqb M:')
    assert not info.value.report.passed

    ws = parse(text, check=False)
    assert not validate(ws, 'M').passed


def test_group_needs_full_table():
    text = read_text('z2.qk').split('\nobject crossed')[0]
    with pytest.raises(ParseError) as info:
        parse(text.replace('  times g g = 1\n', ''))
    assert 'g g' in str(info.value)


def test_workspace(fix2_ws, z2_ws):
    assert fix2_ws.get('J', 'yd').dim == 2
    with pytest.raises(NotFound):
        fix2_ws.get('K')
    with pytest.raises(NotFound):
        fix2_ws.get('J', 'dqb')
    assert fix2_ws.of_kind('dqb') == ['H']
    assert z2_ws.of_kind('group', 'crossed') == ['Z2', 'J']


def test_workspace_add(F5):
    ws = Workspace(field=F5)
    Z4 = standard_cyclic(4, F5, 2)
    ws.add('Z4', Z4)
    ws.add('H', from_group_cocycle(Z4))
    assert ws.kinds == {'Z4': 'group', 'H': 'dqb'}
    with pytest.raises(PreconditionError):
        ws.add('H', ws.get('H'))
    with pytest.raises(PreconditionError):
        ws.add('bad name', Z4)
    assert serialize(parse(serialize(ws))) == serialize(ws)
