import io
import os

import pandas as pd
import pytest

from dqb_workbench.cli import main, render, run
from dqb_workbench.hopfmod import F_build
from dqb_workbench.qkformat import dump, load

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                    'data')


def data_path(filename):
    return os.path.join(DATA, filename)


FIX1 = data_path('fix1.qk')
FIX2 = data_path('fix2.qk')
FIX5 = data_path('fix5.qk')
Z2 = data_path('z2.qk')


def test_check():
    report, status = run(['check', 'dqb', FIX2])
    assert status == 0
    assert report.passed
    assert report.command == f'check dqb {FIX2}'

    report, status = run(['check', 'yd', f'{FIX2}#J'])
    assert status == 0
    assert 'compatibility' in report.names


def test_check_other_kinds(tmp_path):
    report, status = run(['check', 'braided', f'{FIX1}#R'])
    assert status == 0
    assert report.names[-1] == 'compatibility'

    report, status = run(['check', 'crossed', f'{Z2}#J'])
    assert status == 0
    assert report.names[0] == 'group'

    ws = load(FIX2)
    ws.add('FJ', F_build(ws.get('J')))
    path = str(tmp_path / 'FJ.qk')
    dump(ws, path)
    report, status = run(['check', 'trimodule', f'{path}#FJ'])
    assert status == 0
    assert 'actions compatible' in report.names

    _, status = run(['check', 'trimodule', f'{FIX2}#J'])
    assert status == 2


def test_check_wrong_kind():
    report, status = run(['check', 'dqb', f'{FIX2}#J'])
    assert status == 2
    assert report.names == ['input']


def test_missing_file(tmp_path):
    _, status = run(['check', 'dqb', str(tmp_path / 'missing.qk')])
    assert status == 2


def test_invalid_utf8(tmp_path):
    path = tmp_path / 'broken.qk'
    path.write_bytes(b'field Q\n\xff\xfe\n')
    report, status = run(['check', 'dqb', str(path)])
    assert status == 2
    assert report.names == ['input']
    assert 'line 2, column 1' in report['input'].witness.message


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        run(['check', 'monoid', FIX2])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        run([])


def test_solve(tmp_path):
    out = str(tmp_path / 'S.qk')
    report, status = run(['--out', out, 'solve', 'preantipode', f'{FIX2}#H'])
    assert status == 0
    ws = load(out)
    assert ws.kinds == {'H': 'dqb', 'S_H': 'preantipode'}
    assert ws.bases == {'S_H': 'H'}


def test_solve_inconsistent():
    report, status = run(['solve', 'preantipode', FIX5])
    assert status == 1
    record = report['preantipode exists']
    assert record.status == 'fail'
    assert record.witness.message == 'no preantipode (system inconsistent)'


def test_bosonize_and_split(tmp_path):
    out = str(tmp_path / 'B.qk')
    _, status = run(['bosonize', f'{FIX1}#H', f'{FIX1}#R', '--out', out])
    assert status == 0
    ws = load(out)
    assert ws.names == ['H', 'R', 'B', 'B_sigma', 'B_pi']
    assert ws.provenance == {'B': ('H', 'R')}
    assert ws.get('B').labels == ['1#1', '1#g', 'x#1', 'x#g']

    _, status = run(['check', 'dqb', f'{out}#B'])
    assert status == 0

    recovered = str(tmp_path / 'R.qk')
    report, status = run(['--out', recovered, 'split', f'{out}#B',
                          f'{out}#H', f'{out}#B_sigma', f'{out}#B_pi'])
    assert status == 0, report.failed
    assert load(recovered).get('R').dim == 2


def test_bosonize_mismatched_base():
    report, status = run(['bosonize', f'{FIX2}#H', f'{FIX1}#R'])
    assert status == 1


def test_gr(tmp_path):
    out = str(tmp_path / 'B.qk')
    run(['--out', out, 'bosonize', f'{FIX1}#H', f'{FIX1}#R'])
    report, status = run(['gr', f'{out}#B'])
    assert status == 0, report.failed

    report, status = run(['gr', f'{out}#B', '--grouplikes', '1#1'])
    assert status == 1


def test_from_group_and_convert(tmp_path):
    out = str(tmp_path / 'k.qk')
    _, status = run(['--out', out, 'from-group', f'{Z2}#Z2'])
    assert status == 0
    assert load(out).of_kind('dqb') == ['kZ2']

    converted = str(tmp_path / 'J.qk')
    _, status = run(['--out', converted, 'convert', 'crossed2yd',
                     f'{Z2}#J'])
    assert status == 0
    ws = load(converted)
    assert ws.kinds['J_yd'] == 'yd'

    _, status = run(['convert', 'yd2crossed', f'{converted}#J_yd',
                     '--group', f'{converted}#Z2'])
    assert status == 0

    _, status = run(['convert', 'yd2crossed', f'{converted}#J_yd'])
    assert status == 1


def test_suite():
    report, status = run(['suite', FIX2])
    assert status == 0
    assert 'J: compatibility' in report.names

    report, status = run(['suite', FIX5])
    assert status == 1
    assert report['M: preantipode exists'].status == 'fail'


def test_records_format(capsys):
    assert main(['--format', 'records', 'check', 'dqb', FIX2]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(frame.columns) == ['subject', 'check', 'status', 'severity',
                                   'at', 'lhs', 'rhs', 'message']
    assert set(frame['status']) == {'pass'}


def test_text_format(capsys):
    assert main(['solve', 'preantipode', FIX5]) == 1
    text = capsys.readouterr().out
    assert 'inconsistent' in text
    assert 'overall: fail' in text


def test_render_timings():
    report, _ = run(['check', 'dqb', FIX2])
    assert 'elapsed' in render(report, 'records', timings=True)
