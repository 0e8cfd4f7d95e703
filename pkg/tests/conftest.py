import asyncio

import numpy as np
import pandas as pd
import pytest

from escapade.models import BilinearModel, Predictor


# noinspection PyProtectedMember
# pylint: disable=inconsistent-return-statements
@pytest.mark.tryfirst
def pytest_pyfunc_call(pyfuncitem):
    """Run tests marked as async in a new loop."""
    for marker in pyfuncitem.own_markers:
        if marker.name == 'async_test':
            asyncio.run(pyfuncitem.obj(**{
                k: pyfuncitem.funcargs[k]
                for k in pyfuncitem._fixtureinfo.argnames
            }))
            return True


def gaussian_points(count, dimension, seed=0):
    return np.random.default_rng(seed).standard_normal((count, dimension))


@pytest.fixture
def gaussian_context():
    return gaussian_points(500, 2, seed=7)


@pytest.fixture
def bilinear():
    return Predictor(BilinearModel(2))


@pytest.fixture
def context_csv(tmp_path):
    """Csv of 500 gaussian points in 4 features named a to d."""
    path = tmp_path / 'context.csv'
    frame = pd.DataFrame(
        gaussian_points(500, 4, seed=11), columns=['a', 'b', 'c', 'd']
    )
    frame.to_csv(path, index=False)
    return path
