import os

import pytest
from hypothesis import HealthCheck, settings

from fcgerm.gallery import gallery_models

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


@pytest.fixture(scope="session")
def models():
    return gallery_models()
