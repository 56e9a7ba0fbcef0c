"""Shared fixtures for the kdetree test suite."""

import numpy as np
import pytest

from kdetree import dataset


@pytest.fixture()
def two_blob_train():
    """Two well-separated 2-D blobs, the classic rule-extraction shape."""
    return dataset.gaussian_blobs([[4.0, 6.0], [10.0, -2.0]], [0.3, 1.2],
                                  400, seed=7)


@pytest.fixture(scope="session")
def demo_csv_path():
    return dataset.demo_dataset_path()


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
