import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from ribbonwalk.diagram import BraidWord, from_braid


def random_braid_diagram(rng, max_strands=5, max_letters=12, closure="trace"):
    """Small random connected-ish diagram for property fuzz."""
    n = int(rng.integers(2, max_strands + 1))
    if closure == "plat" and n % 2:
        n += 1
    k = int(rng.integers(1, max_letters + 1))
    letters = [
        int(rng.integers(1, n)) * int(rng.choice((-1, 1))) for _ in range(k)
    ]
    return from_braid((n, letters), closure=closure)


@st.composite
def braid_words(draw, max_strands=5, max_letters=10):
    n = draw(st.integers(2, max_strands))
    letters = draw(
        st.lists(
            st.tuples(st.integers(1, n - 1), st.sampled_from((-1, 1))),
            min_size=1,
            max_size=max_letters,
        )
    )
    return BraidWord.make(n, [g * s for g, s in letters])


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)
