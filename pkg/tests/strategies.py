from hypothesis import strategies as st

from components.isomorphism import tournament_from_bits


@st.composite
def tournaments(draw, min_n=1, max_n=7):
    """Random labelled tournaments drawn as upper-triangle edge bits."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = n * (n - 1) // 2
    bits = draw(st.integers(min_value=0, max_value=(1 << pairs) - 1))
    return tournament_from_bits(n, bits)


@st.composite
def relabelled(draw, min_n=1, max_n=7):
    """A tournament together with a random relabelling of it."""
    T = draw(tournaments(min_n, max_n))
    order = draw(st.permutations(list(range(T.n))))
    return T, T.induced(list(order))
