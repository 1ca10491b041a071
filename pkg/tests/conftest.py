import numpy as np
import pytest
from dataclasses import replace

from knosim.model import ModelParams

TWO_PI = 2 * np.pi
PUMP = TWO_PI * 1000.0
KERR = TWO_PI * 500.0


def linear_response_params(chi: float = 0.0, **kw) -> ModelParams:
    """Slow-ramp parameter set: Omega0 = P/(10 e^4), delta_z = 2 Omega0, tau = 40 us."""
    omega0 = PUMP / (10 * np.exp(4.0))
    p = ModelParams(
        kerr=KERR,
        pump=PUMP,
        omega0=omega0,
        delta_z=2 * omega0,
        delta_0=chi * 2 * omega0,
        tau=40.0,
        schedule="linear",
    )
    return replace(p, **kw) if kw else p


def sta_params(chi: float = 0.0, **kw) -> ModelParams:
    """Fast-ramp parameter set: Omega0 = delta_z = 2*pi*0.02 rad/us, tau = 1.5 us."""
    omega0 = TWO_PI * 0.02
    p = ModelParams(
        kerr=KERR,
        pump=PUMP,
        omega0=omega0,
        delta_z=omega0,
        delta_0=chi * omega0,
        tau=1.5,
        schedule="cosine",
    )
    return replace(p, **kw) if kw else p


@pytest.fixture(scope="session")
def fig1_params():
    return linear_response_params()
