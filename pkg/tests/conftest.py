import os

from hypothesis import HealthCheck, settings

# derandomized so CI failures reproduce; bump examples locally via
# HYPOTHESIS_PROFILE=dev
settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))
