import random

import pytest

DEFAULT_SEED = 20261018


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED,
                     help="seed for randomized property tests")


@pytest.fixture
def seed(request):
    value = request.config.getoption("--seed")
    print(f"random seed: {value}")
    return value


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def pytest_report_header(config):
    from affbol import kernels

    return [f"random seed: {config.getoption('--seed')}", f"kernel backend: {kernels.BACKEND}"]
