import pytest

from netbisim import (
    Multiset, NetError, initial_indexed, init_oim, oim_successors,
    reachable_oim,
)
from netbisim.ordered import OrderedIndexedMarking, oim_check


def test_init_oim_is_full_square(fig2_m0):
    k0 = initial_indexed(fig2_m0)
    o = init_oim(k0)
    assert o.tokens == k0
    assert o.order == frozenset((a, b) for a in k0 for b in k0)
    oim_check(o)


def test_init_oim_requires_closed():
    with pytest.raises(NetError):
        init_oim(frozenset({("p", 2)}))


def test_order_update_golden(fig2_net, fig2_m0):
    """Firing t2 deleting (s2,2): pairs touching (s2,2) disappear; every
    old token that preceded (s2,2) now precedes the new (s3,1), and (s3,1)
    is related to itself."""
    k0 = initial_indexed(fig2_m0)
    o0 = init_oim(k0)
    steps = [
        s for s in oim_successors(fig2_net, o0)
        if s.tid == "t2" and s.removed == frozenset({("s2", 2)})
    ]
    assert len(steps) == 1
    target = steps[0].target
    kept = frozenset(
        (a, b) for a, b in o0.order if a != ("s2", 2) and b != ("s2", 2)
    )
    added = frozenset({
        (("s1", 1), ("s3", 1)),
        (("s2", 1), ("s3", 1)),
        (("s2", 3), ("s3", 1)),
        (("s3", 1), ("s3", 1)),
    })
    assert target.order == kept | added
    oim_check(target)


def test_generated_tokens_form_clique(fig2_net, fig2_m0):
    o0 = init_oim(initial_indexed(fig2_m0))
    for step in oim_successors(fig2_net, o0):
        generated = step.generated(o0)
        for a in generated:
            for b in generated:
                assert step.target.leq(a, b)


def test_untouched_pairs_preserved(fig2_net, fig2_m0):
    o0 = init_oim(initial_indexed(fig2_m0))
    for step in oim_successors(fig2_net, o0):
        untouched = step.untouched(o0)
        for a in untouched:
            for b in untouched:
                assert step.target.leq(a, b) == o0.leq(a, b)


def test_clause3_uses_prefiring_order():
    """An untouched token unrelated to any deleted token must not precede
    the generated ones."""
    from netbisim.ordered import _step_order

    a, b, new = ("p", 1), ("p", 2), ("q", 1)
    # pre-firing order: a and b only reflexively related
    old = frozenset({(a, a), (b, b)})
    order = _step_order(old, frozenset({a}), frozenset({new}), frozenset({b}))
    assert (a, new) not in order
    # now a <= b held before the firing: a is promoted below the new token
    old2 = frozenset({(a, a), (b, b), (a, b)})
    order2 = _step_order(old2, frozenset({a}), frozenset({new}), frozenset({b}))
    assert (a, new) in order2


def test_reachable_oim_finite(fig2_net, fig2_m0):
    k0 = initial_indexed(fig2_m0)
    oims = reachable_oim(fig2_net, k0, 8)
    assert init_oim(k0) in oims
    assert all(isinstance(o, OrderedIndexedMarking) for o in oims)
    for o in oims:
        oim_check(o)
