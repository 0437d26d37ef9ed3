"""Seeded random corpus of small bounded nets for agreement testing."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .nets import (
    BoundExceededError, Multiset, NetSystem, PTNet, Transition, reachable,
)


@dataclass(frozen=True)
class CorpusConfig:
    max_places: int = 4
    max_transitions: int = 4
    bound: int = 2
    max_reachable: int = 40
    labels: tuple[str, ...] = ("a", "b")


def _random_multiset(rng: random.Random, places, size_range=(1, 2),
                     allow_empty=False) -> Multiset:
    low, high = size_range
    if allow_empty:
        low = 0
    size = rng.randint(low, high)
    return Multiset.of(*(rng.choice(places) for _ in range(size)))


def random_instance(rng: random.Random,
                    config: CorpusConfig = CorpusConfig()):
    """One (net, m1, m2) with both markings verified config.bound-bounded
    and a small reachability set.  Retries until a candidate qualifies."""
    while True:
        n_places = rng.randint(2, config.max_places)
        places = [f"p{i}" for i in range(1, n_places + 1)]
        n_trans = rng.randint(1, config.max_transitions)
        try:
            transitions = [
                Transition(
                    f"t{i}",
                    rng.choice(config.labels),
                    _random_multiset(rng, places),
                    _random_multiset(rng, places, allow_empty=True),
                )
                for i in range(1, n_trans + 1)
            ]
            net = PTNet.make(places, transitions, labels=config.labels)
        except ValueError:
            continue
        m1 = _random_multiset(rng, places, size_range=(1, 2))
        m2 = _random_multiset(rng, places, size_range=(1, 2))
        try:
            r1 = reachable(NetSystem(net, m1), config.bound)
            r2 = reachable(NetSystem(net, m2), config.bound)
        except BoundExceededError:
            continue
        if len(r1.markings) + len(r2.markings) > config.max_reachable:
            continue
        return net, m1, m2


def corpus(seed: int, count: int, config: CorpusConfig = CorpusConfig()):
    """A deterministic list of `count` random instances."""
    rng = random.Random(seed)
    return [random_instance(rng, config) for _ in range(count)]
