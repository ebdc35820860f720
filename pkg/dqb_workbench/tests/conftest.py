import os

import pytest

from dqb_workbench.bosonization import bosonize
from dqb_workbench.exact import Field
from dqb_workbench.qkformat import load

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                    'data')


def data_path(filename):
    return os.path.join(DATA, filename)


def read_qk(filename):
    return load(data_path(filename))


@pytest.fixture(scope="session")
def Q():
    return Field()


@pytest.fixture(scope="session")
def F5():
    return Field(kind='F', p=5)


@pytest.fixture(scope="session")
def F7():
    return Field(kind='F', p=7)


@pytest.fixture(scope="session")
def fix1_ws():
    return read_qk('fix1.qk')


@pytest.fixture(scope="session")
def fix1(fix1_ws):
    return fix1_ws.get('H')


@pytest.fixture(scope="session")
def r_sweedler(fix1_ws):
    return fix1_ws.get('R')


@pytest.fixture(scope="session")
def fix2_ws():
    return read_qk('fix2.qk')


@pytest.fixture(scope="session")
def fix2(fix2_ws):
    return fix2_ws.get('H')


@pytest.fixture(scope="session")
def j_module(fix2_ws):
    return fix2_ws.get('J')


@pytest.fixture(scope="session")
def klein_ws():
    return read_qk('klein.qk')


@pytest.fixture(scope="session")
def klein(klein_ws):
    return klein_ws.get('KLEIN')


@pytest.fixture(scope="session")
def r_klein(klein_ws):
    return klein_ws.get('R')


@pytest.fixture(scope="session")
def fix3_bosonization(fix1, r_sweedler):
    return bosonize(fix1, r_sweedler)


@pytest.fixture(scope="session")
def fix3(fix3_bosonization):
    return fix3_bosonization.B


@pytest.fixture(scope="session")
def fix4_bosonization(klein, r_klein):
    return bosonize(klein, r_klein)


@pytest.fixture(scope="session")
def fix4(fix4_bosonization):
    return fix4_bosonization.B


@pytest.fixture(scope="session")
def fix5():
    return read_qk('fix5.qk').get('M')


@pytest.fixture(scope="session")
def z2_ws():
    return read_qk('z2.qk')
