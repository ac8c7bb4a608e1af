import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from deltagrad import (
    Dataset,
    LossConfig,
    SyntheticSpec,
    TrainConfig,
    generate_synthetic,
    train_gd,
)


@pytest.fixture(scope="session")
def logistic_data():
    return generate_synthetic(SyntheticSpec(n=120, p=5, noise=0.05, seed=11))


@pytest.fixture(scope="session")
def ridge_data():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(100, 6))
    w_true = rng.normal(size=6)
    return Dataset(X, X @ w_true + 0.1 * rng.normal(size=100))


@pytest.fixture(scope="session")
def logistic_history(logistic_data):
    cfg = TrainConfig(
        loss=LossConfig("logistic", 0.01),
        iterations=60,
        batch_size=logistic_data.n,
        eta_schedule=((0, 0.2),),
        seed=3,
    )
    return train_gd(logistic_data, cfg)


@pytest.fixture(scope="session")
def ridge_history(ridge_data):
    cfg = TrainConfig(
        loss=LossConfig("ridge", 0.1),
        iterations=200,
        batch_size=ridge_data.n,
        eta_schedule=((0, 0.8),),
        seed=3,
    )
    return train_gd(ridge_data, cfg)
