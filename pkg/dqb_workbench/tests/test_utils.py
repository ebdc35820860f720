from dqb_workbench.utils import dedupe_labels, format_vector, tensor_labels


def test_format_vector(Q):
    assert format_vector({}, ['1', 'g'], Q) == '0'
    assert format_vector({1: -Q.one, 0: Q.one}, ['1', 'g'], Q) == '1 - g'
    assert format_vector({(1, 0): Q.scalar('1/2')}, ['1', 'x'],
                         Q) == '1/2*x⊗1'
    assert format_vector({(0, 1): Q.one}, [['a', 'b'], ['c', 'd']],
                         Q) == 'a⊗d'


def test_tensor_labels():
    assert tensor_labels(['1', 'g'], ['1', 'x']) == ['1⊗1', '1⊗x',
                                                      'g⊗1', 'g⊗x']
    assert tensor_labels(['r'], ['h'], sep='#') == ['r#h']


def test_dedupe_labels():
    assert dedupe_labels(['a', 'a', 'b', 'a']) == ['a', 'a_1', 'b', 'a_2']
