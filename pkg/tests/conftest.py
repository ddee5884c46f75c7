import pytest
from hypothesis import HealthCheck, settings

from siegelcycle.rotation import golden

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def theta():
    return golden()


@pytest.fixture(scope="session")
def gamma64_timed(theta):
    """Gamma traced on 64 rays at tol 1e-3 with its wall time (~30 s)."""
    import time

    from siegelcycle.gamma import trace_gamma

    t0 = time.perf_counter()
    curve = trace_gamma(theta, 64, 1e-3)
    return curve, time.perf_counter() - t0


@pytest.fixture(scope="session")
def gamma64(gamma64_timed):
    return gamma64_timed[0]


@pytest.fixture(scope="session")
def figure1(theta):
    """200x185 parameter-plane render of [-2,2]x[-2.7,1.3] with its wall time (~5 min)."""
    import time

    from siegelcycle.render import FIGURE1_RECT, render_param_plane

    t0 = time.perf_counter()
    img = render_param_plane(theta, FIGURE1_RECT, 200, 185, 20000)
    return img, time.perf_counter() - t0
