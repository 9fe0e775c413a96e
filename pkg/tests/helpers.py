"""Shared strategies: hypothesis draws a seed, the seeded generator builds the object."""

from hypothesis import strategies as st

from supercalc.generators import Gen

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def gen(seed: int) -> Gen:
    return Gen(seed)


def random_superform(g: Gen, chart, max_factors: int = 3, terms: int = 3):
    """Sum of f * (product of random dx^a, dpsi_j) on a super chart."""
    from supercalc.cartan import SuperForm

    out = SuperForm.zero(chart)
    for _ in range(g.integer(1, terms)):
        piece = SuperForm.from_function(g.superfunction(chart, g.integer(0, 1), density=0.5, degree=2, terms=2))
        for _ in range(g.integer(0, max_factors)):
            if chart.q and g.chance(0.5):
                piece = piece * SuperForm.dpsi(chart, g.integer(0, chart.q - 1))
            else:
                piece = piece * SuperForm.dx(chart, g.integer(0, chart.p - 1))
        out = out + piece
    return out
