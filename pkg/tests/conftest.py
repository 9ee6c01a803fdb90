import pytest

from uavrelay import build_config, generate_instance


@pytest.fixture(scope="session")
def cfg():
    """Paper-scale defaults: K=100, N=20, 1500 m outer square."""
    return build_config()


@pytest.fixture(scope="session")
def inst(cfg):
    return generate_instance(cfg, 1)


@pytest.fixture(scope="session")
def tiny_cfg():
    """Small geometry used by the tiny-instance optimality checks."""
    return build_config({"K": 4, "N": 2, "rc_outer": 400.0, "rb_inner": 200.0})


@pytest.fixture(scope="session")
def tiny_inst(tiny_cfg):
    return generate_instance(tiny_cfg, 5)
