"""Decision procedures for OIM- (= fully-concurrent) and OIMC-
(= causal-net) bisimilarity, plus an interleaving baseline.

The decision is an on-the-fly coinductive game over triples
(oim1, oim2, beta).  Undecided triples on the search stack are assumed
winning; a refutation is memoized permanently and restarts the pass, so
every pass either adds a permanently-losing triple or completes with a
self-supporting winning set (a bisimulation).
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Literal, Optional

from .nets import Multiset, NetSystem, PTNet, enabled, fire, reachable
from .indexed import Token, initial_indexed
from .ordered import OIMStep, OrderedIndexedMarking, init_oim, oim_successors

Beta = frozenset  # frozenset[tuple[Token, Token]]
Flavor = Literal["fc", "cn"]


@dataclass(frozen=True)
class GameTriple:
    left: OrderedIndexedMarking
    right: OrderedIndexedMarking
    beta: Beta


@dataclass
class Refutation:
    """Why a triple loses: an attacker move all of whose admissible
    defender responses lead to losing triples (possibly none exist)."""

    triple: GameTriple
    reason: str  # "size-gate" | "move"
    side: Optional[str] = None  # "left" | "right"
    attacker: Optional[OIMStep] = None
    responses: tuple = ()  # tuple[(OIMStep, Refutation)]

    def principal_moves(self) -> list[tuple[str, str, frozenset]]:
        """The attacker moves along a deepest defender line."""
        out = []
        node = self
        while node is not None and node.attacker is not None:
            out.append((node.side, node.attacker.tid, node.attacker.removed))
            node = max(
                (sub for _, sub in node.responses),
                key=lambda r: len(r.principal_moves()),
                default=None,
            )
        return out


@dataclass
class BisimVerdict:
    outcome: str  # "equivalent" | "not-equivalent" | "unknown"
    witness: Optional[frozenset] = None  # frozenset[GameTriple] when equivalent
    refutation: Optional[Refutation] = None
    stats: dict = field(default_factory=dict)


@dataclass
class Limits:
    max_triples: int = 2_000_000
    max_seconds: Optional[float] = None


class ResourceLimitReached(Exception):
    pass


def beta_update(untouched1, generated1, untouched2, generated2, beta: Beta) -> Beta:
    """beta' = beta restricted to untouched x untouched, plus all pairs of
    freshly generated tokens."""
    pairs = {(a, b) for a, b in beta if a in untouched1 and b in untouched2}
    pairs.update((a, b) for a in generated1 for b in generated2)
    return frozenset(pairs)


def deleted_condition_fc(
    removed1, removed2, leq1, leq2, beta: Beta,
    symmetric_reading: str = "definition",
) -> bool:
    """Every deleted token must be below some deleted token that is
    beta-related to a token deleted on the other side.

    `symmetric_reading` selects between the two published phrasings of the
    right-to-left clause; resolving the free variable in the second one,
    both collapse to the same predicate.
    """
    for p1 in removed1:
        if not any(
            (p1, q1) in leq1 and (q1, q2) in beta
            for q1 in removed1 for q2 in removed2
        ):
            return False
    for p2 in removed2:
        if not any(
            (p2, q2) in leq2 and (q1, q2) in beta
            for q2 in removed2 for q1 in removed1
        ):
            return False
    return True


def deleted_condition_cn(removed1, removed2, beta: Beta) -> bool:
    """True iff the two removed sets are bijectively related by beta
    (perfect matching over beta-pairs, via augmenting paths)."""
    left = sorted(removed1)
    right = sorted(removed2)
    if len(left) != len(right):
        return False
    adj = {a: [b for b in right if (a, b) in beta] for a in left}
    match: dict[Token, Token] = {}  # right token -> left token

    def augment(a, seen) -> bool:
        for b in adj[a]:
            if b in seen:
                continue
            seen.add(b)
            if b not in match or augment(match[b], seen):
                match[b] = a
                return True
        return False

    return all(augment(a, set()) for a in left)


class _Restart(Exception):
    pass


class _Search:
    def __init__(self, net: PTNet, flavor: Flavor, limits: Limits,
                 symmetric_reading: str):
        self.net = net
        self.flavor = flavor
        self.limits = limits
        self.symmetric_reading = symmetric_reading
        self.moves: dict[OrderedIndexedMarking, list[OIMStep]] = {}
        # triple -> (reason, side, attacker step)
        self.false_memo: dict[GameTriple, tuple] = {}
        self.explored = 0
        self.passes = 0
        self.t0 = time.monotonic()

    def successors(self, o: OrderedIndexedMarking) -> list[OIMStep]:
        if o not in self.moves:
            self.moves[o] = oim_successors(self.net, o)
        return self.moves[o]

    def _tick(self):
        self.explored += 1
        if self.explored > self.limits.max_triples:
            raise ResourceLimitReached
        if (
            self.limits.max_seconds is not None
            and time.monotonic() - self.t0 > self.limits.max_seconds
        ):
            raise ResourceLimitReached

    def defender_ok(self, triple: GameTriple, attack: OIMStep,
                    response: OIMStep, attacker_left: bool) -> bool:
        if attacker_left:
            removed1, removed2 = attack.removed, response.removed
        else:
            removed1, removed2 = response.removed, attack.removed
        if self.flavor == "cn":
            return deleted_condition_cn(removed1, removed2, triple.beta)
        return deleted_condition_fc(
            removed1, removed2, triple.left.order, triple.right.order,
            triple.beta, self.symmetric_reading,
        )

    def successor_triple(self, triple: GameTriple, left_step: OIMStep,
                         right_step: OIMStep) -> GameTriple:
        u1 = triple.left.tokens - left_step.removed
        g1 = left_step.target.tokens - u1
        u2 = triple.right.tokens - right_step.removed
        g2 = right_step.target.tokens - u2
        beta2 = beta_update(u1, g1, u2, g2, triple.beta)
        return GameTriple(left_step.target, right_step.target, beta2)

    def check(self, triple: GameTriple, stack: set, winning: set) -> bool:
        if triple in self.false_memo:
            return False
        if triple in winning or triple in stack:
            return True
        self._tick()
        stack.add(triple)
        try:
            info = self.evaluate(triple, stack, winning)
        finally:
            stack.discard(triple)
        if info is not None:
            self.false_memo[triple] = info
            raise _Restart
        winning.add(triple)
        return True

    def evaluate(self, triple: GameTriple, stack: set, winning: set):
        """None if the triple survives; otherwise the refutation record."""
        if self.flavor == "cn" and len(triple.left.tokens) != len(triple.right.tokens):
            return ("size-gate", None, None)
        left_moves = self.successors(triple.left)
        right_moves = self.successors(triple.right)
        for attacker_left, attacks, responses in (
            (True, left_moves, right_moves),
            (False, right_moves, left_moves),
        ):
            for attack in attacks:
                label = self.net.transition(attack.tid).label
                answered = False
                for resp in responses:
                    if self.net.transition(resp.tid).label != label:
                        continue
                    if not self.defender_ok(triple, attack, resp, attacker_left):
                        continue
                    nxt = (
                        self.successor_triple(triple, attack, resp)
                        if attacker_left
                        else self.successor_triple(triple, resp, attack)
                    )
                    if self.check(nxt, stack, winning):
                        answered = True
                        break
                if not answered:
                    return ("move", "left" if attacker_left else "right", attack)
        return None

    def run(self, root: GameTriple):
        """(True, winning set) or (False, refutation)."""
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old_limit, 100_000))
        try:
            while True:
                self.passes += 1
                winning: set = set()
                try:
                    if self.check(root, set(), winning):
                        return True, frozenset(winning)
                    return False, self.build_refutation(root)
                except _Restart:
                    continue
        finally:
            sys.setrecursionlimit(old_limit)

    def build_refutation(self, triple: GameTriple) -> Refutation:
        reason, side, attack = self.false_memo[triple]
        if reason == "size-gate":
            return Refutation(triple, "size-gate")
        attacker_left = side == "left"
        label = self.net.transition(attack.tid).label
        responses = []
        for resp in self.successors(triple.right if attacker_left else triple.left):
            if self.net.transition(resp.tid).label != label:
                continue
            if not self.defender_ok(triple, attack, resp, attacker_left):
                continue
            nxt = (
                self.successor_triple(triple, attack, resp)
                if attacker_left
                else self.successor_triple(triple, resp, attack)
            )
            responses.append((resp, self.build_refutation(nxt)))
        return Refutation(triple, "move", side, attack, tuple(responses))


def _initial_triple(m1: Multiset, m2: Multiset) -> GameTriple:
    k1 = initial_indexed(m1)
    k2 = initial_indexed(m2)
    return GameTriple(
        init_oim(k1), init_oim(k2), frozenset((a, b) for a in k1 for b in k2)
    )


def _decide_game(net: PTNet, m1: Multiset, m2: Multiset, cap: int,
                 flavor: Flavor, limits: Optional[Limits],
                 symmetric_reading: str) -> BisimVerdict:
    reachable(NetSystem(net, m1), cap)
    reachable(NetSystem(net, m2), cap)
    limits = limits or Limits()
    search = _Search(net, flavor, limits, symmetric_reading)
    t0 = time.monotonic()
    try:
        won, payload = search.run(_initial_triple(m1, m2))
    except ResourceLimitReached:
        return BisimVerdict(
            "unknown",
            stats={"triples": search.explored, "passes": search.passes,
                   "seconds": time.monotonic() - t0},
        )
    stats = {"triples": search.explored, "passes": search.passes,
             "seconds": time.monotonic() - t0}
    if won:
        return BisimVerdict("equivalent", witness=payload, stats=stats)
    return BisimVerdict("not-equivalent", refutation=payload, stats=stats)


def decide_oim(net: PTNet, m1: Multiset, m2: Multiset, cap: int,
               limits: Optional[Limits] = None,
               symmetric_reading: str = "definition") -> BisimVerdict:
    """Decide fully-concurrent bisimilarity of m1 and m2 (via the OIM game)."""
    return _decide_game(net, m1, m2, cap, "fc", limits, symmetric_reading)


def decide_oimc(net: PTNet, m1: Multiset, m2: Multiset, cap: int,
                limits: Optional[Limits] = None) -> BisimVerdict:
    """Decide causal-net bisimilarity of m1 and m2 (via the OIMC game)."""
    return _decide_game(net, m1, m2, cap, "cn", limits, "definition")


def decide_interleaving(net: PTNet, m1: Multiset, m2: Multiset,
                        cap: int) -> BisimVerdict:
    """Label-based strong bisimilarity on the collective reachability
    graphs, via partition refinement."""
    t0 = time.monotonic()
    states = set(reachable(NetSystem(net, m1), cap).markings)
    states |= reachable(NetSystem(net, m2), cap).markings
    succ = {
        m: [(net.transition(tid).label, fire(net, m, tid)) for tid in enabled(net, m)]
        for m in states
    }
    block = {m: 0 for m in states}
    while True:
        sigs = {
            m: (block[m], frozenset((lbl, block[m2]) for lbl, m2 in succ[m]))
            for m in states
        }
        renum = {sig: i for i, sig in enumerate(sorted(set(sigs.values()), key=repr))}
        new_block = {m: renum[sigs[m]] for m in states}
        if new_block == block:
            break
        block = new_block
    outcome = "equivalent" if block[m1] == block[m2] else "not-equivalent"
    return BisimVerdict(outcome, stats={"states": len(states),
                                        "seconds": time.monotonic() - t0})


def validate_witness(net: PTNet, witness: frozenset, root: GameTriple,
                     flavor: Flavor,
                     symmetric_reading: str = "definition") -> bool:
    """Independent closure check: every triple in the witness satisfies both
    transfer directions with successors inside the witness."""
    if root not in witness:
        return False
    helper = _Search(net, flavor, Limits(), symmetric_reading)
    for triple in witness:
        if flavor == "cn" and len(triple.left.tokens) != len(triple.right.tokens):
            return False
        for attacker_left in (True, False):
            attacks = helper.successors(triple.left if attacker_left else triple.right)
            responses = helper.successors(triple.right if attacker_left else triple.left)
            for attack in attacks:
                label = net.transition(attack.tid).label
                ok = False
                for resp in responses:
                    if net.transition(resp.tid).label != label:
                        continue
                    if not helper.defender_ok(triple, attack, resp, attacker_left):
                        continue
                    nxt = (
                        helper.successor_triple(triple, attack, resp)
                        if attacker_left
                        else helper.successor_triple(triple, resp, attack)
                    )
                    if nxt in witness:
                        ok = True
                        break
                if not ok:
                    return False
    return True


def validate_refutation(net: PTNet, ref: Refutation, flavor: Flavor,
                        symmetric_reading: str = "definition") -> bool:
    """Replay a refutation: at every node the attacker move must exist and
    every admissible defender response must itself be refuted."""
    helper = _Search(net, flavor, Limits(), symmetric_reading)
    triple = ref.triple
    if ref.reason == "size-gate":
        return flavor == "cn" and len(triple.left.tokens) != len(triple.right.tokens)
    attacker_left = ref.side == "left"
    attacks = helper.successors(triple.left if attacker_left else triple.right)
    if ref.attacker not in attacks:
        return False
    label = net.transition(ref.attacker.tid).label
    admissible = []
    for resp in helper.successors(triple.right if attacker_left else triple.left):
        if net.transition(resp.tid).label != label:
            continue
        if not helper.defender_ok(triple, ref.attacker, resp, attacker_left):
            continue
        admissible.append(resp)
    recorded = {resp for resp, _ in ref.responses}
    if recorded != set(admissible):
        return False
    for resp, sub in ref.responses:
        nxt = (
            helper.successor_triple(triple, ref.attacker, resp)
            if attacker_left
            else helper.successor_triple(triple, resp, ref.attacker)
        )
        if sub.triple != nxt:
            return False
        if not validate_refutation(net, sub, flavor, symmetric_reading):
            return False
    return True


def _fmt_token(tok: Token) -> str:
    return f"({tok[0]},{tok[1]})"


def _fmt_oim(o: OrderedIndexedMarking) -> str:
    toks = " ".join(_fmt_token(t) for t in sorted(o.tokens))
    pairs = " ".join(
        f"{_fmt_token(a)}<={_fmt_token(b)}" for a, b in sorted(o.order)
    )
    return f"tokens {{{toks}}} order {{{pairs}}}"


def format_triple(t: GameTriple) -> str:
    beta = " ".join(
        f"{_fmt_token(a)}~{_fmt_token(b)}" for a, b in sorted(t.beta)
    )
    return (
        f"left  {_fmt_oim(t.left)}\n"
        f"right {_fmt_oim(t.right)}\n"
        f"beta  {{{beta}}}"
    )


def format_witness(witness: frozenset) -> str:
    """Deterministic text listing of a witness relation."""
    blocks = sorted(format_triple(t) for t in witness)
    out = [f"triples {len(blocks)}"]
    for i, b in enumerate(blocks):
        out.append(f"-- triple {i} --")
        out.append(b)
    return "\n".join(out) + "\n"


def format_refutation(ref: Refutation) -> str:
    lines = [f"refuted: {ref.reason}"]
    for side, tid, removed in ref.principal_moves():
        rem = " ".join(_fmt_token(t) for t in sorted(removed))
        lines.append(f"{side} fires {tid} removing {{{rem}}}")
    return "\n".join(lines) + "\n"
