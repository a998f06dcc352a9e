from hypothesis import HealthCheck, settings

# First calls may build shared tables (tau, Eisenstein caches); per-example
# deadlines would make those runs flaky.
settings.register_profile(
    "tauforms", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("tauforms")
