import pytest

from cdsbench.library import library_workspace


@pytest.fixture
def workspace():
    return library_workspace()


@pytest.fixture
def streams(workspace):
    return workspace.system('STREAMS')


@pytest.fixture
def naturals(workspace):
    return workspace.system('NAT')


@pytest.fixture
def flip_env(workspace):
    return workspace.env('flip_example')


@pytest.fixture
def alternating(workspace):
    return workspace.env('alternating')

