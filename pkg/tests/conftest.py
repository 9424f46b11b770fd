import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from rlabel.poset import GradedPoset, from_cover_relations  # noqa: E402


@st.composite
def graded_posets(draw, max_rank: int = 4, max_width: int = 3) -> GradedPoset:
    """Random bounded graded posets with small rank levels."""
    n = draw(st.integers(2, max_rank))
    widths = [1] + [draw(st.integers(1, max_width)) for _ in range(n - 1)] + [1]
    levels = [[f"r{r}e{i}" for i in range(w)] for r, w in enumerate(widths)]
    levels[0], levels[-1] = ["bot"], ["top"]
    covers = set()
    for r in range(1, n + 1):
        below = levels[r - 1]
        for y in levels[r]:
            picks = draw(st.lists(st.sampled_from(below), min_size=1, max_size=len(below), unique=True))
            covers.update((x, y) for x in picks)
    for r in range(n):
        for x in levels[r]:
            if not any(c[0] == x for c in covers):
                covers.add((x, draw(st.sampled_from(levels[r + 1]))))
    rank = {e: r for r, level in enumerate(levels) for e in level}
    return from_cover_relations(rank, sorted(covers))


@pytest.fixture
def run_cli(capsys):
    from rlabel.cli import main

    def run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err

    return run
