from fractions import Fraction

from hypothesis import settings, strategies as st

from spinc_surfaces.scalar import GaussQ

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(GaussQ, rationals, rationals)
seeds = st.integers(min_value=0, max_value=10**6)


def frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))
