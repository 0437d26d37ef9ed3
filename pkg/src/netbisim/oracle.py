"""Independent oracle: the literal process-based bisimulation games.

The fully-concurrent game is played on triples (pi1, f, pi2) where f is a
label-preserving order isomorphism between the events of the two
processes, extended one event at a time.  The causal-net game is played
on triples (rho1, C, rho2): a single causal net C carrying two foldings,
so the attacker fixes the preset inside C and the defender only chooses
the transition and the folding of the fresh conditions.

States are memoized up to isomorphism via a canonical key (the minimum
over all topological orderings of the paired-event encoding).  The
evaluation is three-valued and depth-bounded: a state is winning for the
defender when every branch closes (deadlocks or hits a winning state),
losing when the attacker forces a failure, unknown past the depth.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Optional

from .nets import Multiset, PTNet
from .engine import BisimVerdict


def _preset_choices(groups: dict[str, list[int]], need: Multiset):
    """All ways to pick need(p) conditions of each place p from groups."""
    pools = []
    for place, n in need.items():
        avail = groups.get(place, [])
        if len(avail) < n:
            return
        pools.append(list(combinations(avail, n)))
    for choice in product(*pools):
        yield frozenset(i for grp in choice for i in grp)


def _all_topo_orders(n: int, anc: tuple) -> list[tuple[int, ...]]:
    """All linearizations of events 0..n-1 respecting the ancestor sets."""
    orders = []

    def rec(placed: tuple[int, ...], remaining: frozenset):
        if not remaining:
            orders.append(placed)
            return
        for e in sorted(remaining):
            if anc[e] - {e} <= set(placed):
                rec(placed + (e,), remaining - {e})

    rec((), frozenset(range(n)))
    return orders


# ---------------------------------------------------------------------------
# fully-concurrent game state: two processes + implicit event pairing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FCState:
    """Conditions are (producer event index | -1, place); event i of one
    process is paired with event i of the other."""

    conds1: tuple  # tuple[(int, str)]
    consumed1: frozenset  # condition indices
    conds2: tuple
    consumed2: frozenset
    # per event: (tid1, preset1 indices, tid2, preset2 indices)
    events: tuple
    anc1: tuple  # per event: frozenset of ancestor event indices (incl. self)
    anc2: tuple


def _fc_init(m1: Multiset, m2: Multiset) -> FCState:
    c1 = tuple((-1, p) for p, n in m1.items() for _ in range(n))
    c2 = tuple((-1, p) for p, n in m2.items() for _ in range(n))
    return FCState(c1, frozenset(), c2, frozenset(), (), (), ())


def _maximal_groups(conds: tuple, consumed: frozenset) -> dict[str, list[int]]:
    groups: dict[str, list[int]] = {}
    for i, (_, place) in enumerate(conds):
        if i not in consumed:
            groups.setdefault(place, []).append(i)
    return groups


def _cond_ancestors(conds: tuple, preset: frozenset, anc: tuple) -> frozenset:
    acc: set[int] = set()
    for i in preset:
        producer = conds[i][0]
        if producer >= 0:
            acc |= anc[producer]
    return frozenset(acc)


def _side_moves(net: PTNet, conds, consumed):
    """(tid, preset) pairs: every transition, every preset choice."""
    groups = _maximal_groups(conds, consumed)
    for t in net.transitions:
        for preset in _preset_choices(groups, t.pre):
            yield t.tid, preset


def _fc_extend(net: PTNet, s: FCState, tid1, preset1, tid2, preset2) -> FCState:
    e = len(s.events)
    t1, t2 = net.transition(tid1), net.transition(tid2)
    a1 = _cond_ancestors(s.conds1, preset1, s.anc1) | {e}
    a2 = _cond_ancestors(s.conds2, preset2, s.anc2) | {e}
    new1 = tuple((e, p) for p, n in t1.post.items() for _ in range(n))
    new2 = tuple((e, p) for p, n in t2.post.items() for _ in range(n))
    return FCState(
        s.conds1 + new1, s.consumed1 | preset1,
        s.conds2 + new2, s.consumed2 | preset2,
        s.events + ((tid1, preset1, tid2, preset2),),
        s.anc1 + (a1,), s.anc2 + (a2,),
    )


def _fc_attacks(net: PTNet, s: FCState):
    """(side, tid, preset) for every attacker option."""
    for tid, preset in _side_moves(net, s.conds1, s.consumed1):
        yield 1, tid, preset
    for tid, preset in _side_moves(net, s.conds2, s.consumed2):
        yield 2, tid, preset


def _fc_responses(net: PTNet, s: FCState, side, tid, preset):
    """Successor states for every admissible defender answer."""
    label = net.transition(tid).label
    if side == 1:
        anc_new = _cond_ancestors(s.conds1, preset, s.anc1)
        for tid2, preset2 in _side_moves(net, s.conds2, s.consumed2):
            if net.transition(tid2).label != label:
                continue
            if _cond_ancestors(s.conds2, preset2, s.anc2) != anc_new:
                continue  # f' would not be an order isomorphism
            yield _fc_extend(net, s, tid, preset, tid2, preset2)
    else:
        anc_new = _cond_ancestors(s.conds2, preset, s.anc2)
        for tid1, preset1 in _side_moves(net, s.conds1, s.consumed1):
            if net.transition(tid1).label != label:
                continue
            if _cond_ancestors(s.conds1, preset1, s.anc1) != anc_new:
                continue
            yield _fc_extend(net, s, tid1, preset1, tid, preset)


def _encode_preset(conds, preset, pos) -> tuple:
    return tuple(sorted(
        (pos[conds[i][0]] if conds[i][0] >= 0 else -1, conds[i][1])
        for i in preset
    ))


def _fc_key(s: FCState):
    n = len(s.events)
    anc = tuple(s.anc1[i] | s.anc2[i] for i in range(n))
    best = None
    for order in _all_topo_orders(n, anc):
        pos = {e: i for i, e in enumerate(order)}
        enc = tuple(
            (
                s.events[e][0], _encode_preset(s.conds1, s.events[e][1], pos),
                s.events[e][2], _encode_preset(s.conds2, s.events[e][3], pos),
            )
            for e in order
        )
        if best is None or enc < best:
            best = enc
    init1 = tuple(sorted(p for prod, p in s.conds1 if prod == -1))
    init2 = tuple(sorted(p for prod, p in s.conds2 if prod == -1))
    return ("fc", init1, init2, best)


# ---------------------------------------------------------------------------
# causal-net game state: one shared causal net, two foldings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CNState:
    conds: tuple  # tuple[(producer event index | -1, place1, place2)]
    consumed: frozenset
    events: tuple  # tuple[(tid1, tid2, preset indices)]
    anc: tuple


def _cn_inits(m1: Multiset, m2: Multiset) -> list[CNState]:
    """One state per distinct pairing multiset of the two initial markings."""
    left = [p for p, n in sorted(m1.items()) for _ in range(n)]
    right = [p for p, n in sorted(m2.items()) for _ in range(n)]
    if len(left) != len(right):
        return []
    pairings = {tuple(sorted(zip(left, perm))) for perm in permutations(right)}
    return [
        CNState(tuple((-1, p1, p2) for p1, p2 in pairing), frozenset(), (), ())
        for pairing in sorted(pairings)
    ]


def _cn_groups(s: CNState, side: int) -> dict[str, list[int]]:
    groups: dict[str, list[int]] = {}
    for i, cond in enumerate(s.conds):
        if i not in s.consumed:
            groups.setdefault(cond[side], []).append(i)
    return groups


def _cn_attacks(net: PTNet, s: CNState):
    for side in (1, 2):
        groups = _cn_groups(s, side)
        for t in net.transitions:
            for preset in _preset_choices(groups, t.pre):
                yield side, t.tid, preset


def _cn_responses(net: PTNet, s: CNState, side, tid, preset):
    """The defender keeps the causal net: same preset, a same-label
    transition consuming the other folding of the preset, and a choice of
    place pairing for the fresh conditions."""
    t_att = net.transition(tid)
    other = 2 if side == 1 else 1
    other_pre = Multiset.of(*(s.conds[i][other] for i in preset))
    att_post = [p for p, n in sorted(t_att.post.items()) for _ in range(n)]
    e = len(s.events)
    for t in net.transitions:
        if t.label != t_att.label or t.pre != other_pre:
            continue
        def_post = [p for p, n in sorted(t.post.items()) for _ in range(n)]
        if len(def_post) != len(att_post):
            continue
        pairings = {tuple(sorted(zip(att_post, perm)))
                    for perm in permutations(def_post)}
        for pairing in sorted(pairings):
            if side == 1:
                new = tuple((e, pa, pd) for pa, pd in pairing)
                tid1, tid2 = tid, t.tid
            else:
                new = tuple((e, pd, pa) for pa, pd in pairing)
                tid1, tid2 = t.tid, tid
            anc_new = frozenset().union(
                *(s.anc[s.conds[i][0]] for i in preset if s.conds[i][0] >= 0)
            ) | {e}
            yield CNState(
                s.conds + new, s.consumed | preset,
                s.events + ((tid1, tid2, preset),), s.anc + (anc_new,),
            )


def _cn_key(s: CNState):
    n = len(s.events)
    best = None
    for order in _all_topo_orders(n, s.anc):
        pos = {e: i for i, e in enumerate(order)}
        enc = tuple(
            (
                s.events[e][0], s.events[e][1],
                tuple(sorted(
                    (pos[s.conds[i][0]] if s.conds[i][0] >= 0 else -1,
                     s.conds[i][1], s.conds[i][2])
                    for i in s.events[e][2]
                )),
            )
            for e in order
        )
        if best is None or enc < best:
            best = enc
    init = tuple(sorted((p1, p2) for prod, p1, p2 in s.conds if prod == -1))
    return ("cn", init, best)


# ---------------------------------------------------------------------------
# three-valued depth-bounded evaluation
# ---------------------------------------------------------------------------


class _Oracle:
    def __init__(self, net: PTNet, flavor: str):
        self.net = net
        self.flavor = flavor
        # key -> (True, winning keys) | (False, None) | stored unknown depth
        self.definitive: dict = {}
        self.unknown_at: dict = {}

    def attacks(self, s):
        if self.flavor == "fc":
            return list(_fc_attacks(self.net, s))
        return list(_cn_attacks(self.net, s))

    def responses(self, s, attack):
        side, tid, preset = attack
        if self.flavor == "fc":
            return list(_fc_responses(self.net, s, side, tid, preset))
        return list(_cn_responses(self.net, s, side, tid, preset))

    def key(self, s):
        return _fc_key(s) if self.flavor == "fc" else _cn_key(s)

    def value(self, s, depth: int):
        """(True, winning key set) | (False, None) | (None, None)."""
        key = self.key(s)
        if key in self.definitive:
            return self.definitive[key]
        if key in self.unknown_at and depth <= self.unknown_at[key]:
            return (None, None)
        attacks = self.attacks(s)
        if not attacks:
            result = (True, frozenset([key]))
            self.definitive[key] = result
            return result
        if depth == 0:
            self.unknown_at[key] = max(self.unknown_at.get(key, 0), depth)
            return (None, None)
        all_true = True
        winning = {key}
        for attack in attacks:
            move_val = False
            move_win = None
            for succ in self.responses(s, attack):
                v, w = self.value(succ, depth - 1)
                if v is True:
                    move_val = True
                    move_win = w
                    break
                if v is None:
                    move_val = None
            if move_val is False:
                result = (False, None)
                self.definitive[key] = result
                return result
            if move_val is None:
                all_true = False
            else:
                winning |= move_win
        if all_true:
            result = (True, frozenset(winning))
            self.definitive[key] = result
            return result
        self.unknown_at[key] = max(self.unknown_at.get(key, 0), depth)
        return (None, None)


def oracle_game(net: PTNet, m1: Multiset, m2: Multiset, flavor: str,
                depth: int) -> BisimVerdict:
    """Play the literal process game to `depth` alternations.

    equivalent  — the game tree closes (every branch deadlocks or repeats
                  up to process isomorphism) within depth;
    not-equivalent — the attacker wins within depth;
    unknown     — the depth ran out first.
    """
    if flavor not in ("fc", "cn"):
        raise ValueError(f"unknown flavor {flavor!r}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    net.check_marking(m1)
    net.check_marking(m2)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 100_000))
    try:
        oracle = _Oracle(net, flavor)
        if flavor == "fc":
            v, w = oracle.value(_fc_init(m1, m2), depth)
            stats = {"states": len(oracle.definitive) + len(oracle.unknown_at)}
            if v is True:
                return BisimVerdict("equivalent", witness=w, stats=stats)
            if v is False:
                return BisimVerdict("not-equivalent", stats=stats)
            return BisimVerdict("unknown", stats=stats)
        # cn: equivalent iff some initial pairing wins; not-equivalent iff
        # every pairing loses (size mismatch means no pairing at all).
        inits = _cn_inits(m1, m2)
        if not inits:
            return BisimVerdict("not-equivalent", stats={"states": 0})
        any_unknown = False
        for s in inits:
            v, w = oracle.value(s, depth)
            if v is True:
                stats = {"states": len(oracle.definitive) + len(oracle.unknown_at)}
                return BisimVerdict("equivalent", witness=w, stats=stats)
            if v is None:
                any_unknown = True
        stats = {"states": len(oracle.definitive) + len(oracle.unknown_at)}
        return BisimVerdict("unknown" if any_unknown else "not-equivalent",
                            stats=stats)
    finally:
        sys.setrecursionlimit(old_limit)
