import itertools

from hypothesis import given, settings, strategies as st

from pocl.ordering import END, START, Ordering, possibly_between
from pocl.plan import CausalLink


def test_initial():
    o = Ordering.initial()
    assert o.before(START, END) and not o.before(END, START)


def test_cycle_rejected():
    o = Ordering.initial().add_step(2).add_step(3)
    o = o.constrain(2, 3)
    assert o.constrain(3, 2) is None
    assert o.constrain(2, 2) is None
    assert o.before(START, 3) and o.before(2, END)


def test_linearization_respects_order():
    o = Ordering.initial()
    for s in (2, 3, 4):
        o = o.add_step(s)
    o = o.constrain(4, 2)
    lin = o.linearization([0, 1, 2, 3, 4])
    assert lin[0] == START and lin[-1] == END
    assert lin.index(4) < lin.index(2)


def _floyd(n, edges):
    r = [[False] * n for _ in range(n)]
    for a, b in edges:
        r[a][b] = True
    for k in range(n):
        for i in range(n):
            if r[i][k]:
                for j in range(n):
                    if r[k][j]:
                        r[i][j] = True
    return r


edge_lists = st.integers(3, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(2, n - 1), st.integers(2, n - 1)), max_size=12),
    )
)


@settings(max_examples=400, deadline=None)
@given(edge_lists)
def test_closure_matches_floyd_warshall(case):
    n, edges = case
    o = Ordering.initial()
    for s in range(2, n):
        o = o.add_step(s)
    kept = [(START, END)] + [(START, s) for s in range(2, n)] + [(s, END) for s in range(2, n)]
    for a, b in edges:
        o2 = o.constrain(a, b)
        closure = _floyd(n, kept + [(a, b)])
        cyclic = any(closure[i][i] for i in range(n))
        assert (o2 is None) == cyclic
        if o2 is not None:
            o = o2
            kept.append((a, b))
    closure = _floyd(n, kept)
    for i in range(n):
        for j in range(n):
            assert o.before(i, j) == closure[i][j]


@settings(max_examples=200, deadline=None)
@given(edge_lists, st.data())
def test_possibly_between_matches_linearizations(case, data):
    n, edges = case
    o = Ordering.initial()
    for s in range(2, n):
        o = o.add_step(s)
    for a, b in edges:
        o = o.constrain(a, b) or o
    lins = [
        p for p in itertools.permutations(range(n))
        if all(not o.before(p[j], p[i]) for i in range(n) for j in range(i + 1, n))
    ]
    a, c, s = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    if not o.before(a, c):
        return
    link = CausalLink(a, None, c, 0)
    expected = s not in (a, c) and any(p.index(a) < p.index(s) < p.index(c) for p in lins)
    assert possibly_between(o, s, link) == expected
