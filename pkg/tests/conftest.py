# Set hypothesis custom test parameters
from hypothesis import HealthCheck, settings

settings.register_profile("k3strata", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("k3strata")
