from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from opcalc.scalar import QQi

settings.register_profile("default", deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)
nonzero_fractions = small_fractions.filter(lambda q: q != 0)
gaussian = st.builds(QQi.make, small_fractions, small_fractions)


@st.composite
def exact_sequences(draw, N=None, invertible=False, min_N=1, max_N=12):
    from opcalc.sequence import Sequence

    n = N if N is not None else draw(st.integers(min_N, max_N))
    vals = draw(st.lists(small_fractions, min_size=n, max_size=n))
    if invertible and vals[0] == 0:
        vals[0] = Fraction(1)
    return Sequence(vals)
