import pytest

from netbisim import (
    BoundExceededError, Limits, Multiset, beta_update, decide_interleaving,
    decide_oim, decide_oimc, deleted_condition_cn, deleted_condition_fc,
    format_refutation, format_witness, validate_refutation, validate_witness,
)
from netbisim.engine import _initial_triple


def test_beta_update_restricts_and_pairs():
    a1, a2, g1, g2 = ("p", 1), ("p", 2), ("q", 1), ("q", 2)
    beta = frozenset({(a1, a2), (a1, g2)})
    out = beta_update(
        untouched1=frozenset({a1}), generated1=frozenset({g1}),
        untouched2=frozenset({a2}), generated2=frozenset({g2}),
        beta=beta,
    )
    assert out == frozenset({(a1, a2), (g1, g2)})


def test_deleted_condition_fc_basic():
    a, b = ("p", 1), ("p", 2)
    refl = frozenset({(a, a), (b, b)})
    beta = frozenset({(a, b)})
    assert deleted_condition_fc(frozenset({a}), frozenset({b}), refl, refl, beta)
    # no beta pair between the removed sets
    assert not deleted_condition_fc(
        frozenset({a}), frozenset({b}), refl, refl, frozenset()
    )


def test_deleted_condition_fc_uses_order():
    """A removed token may be justified by a bigger removed token that is
    beta-related across."""
    lo, hi, other = ("p", 1), ("p", 2), ("q", 1)
    leq1 = frozenset({(lo, lo), (hi, hi), (lo, hi)})
    leq2 = frozenset({(other, other)})
    beta = frozenset({(hi, other)})
    assert deleted_condition_fc(
        frozenset({lo, hi}), frozenset({other}), leq1, leq2, beta
    )
    # without lo <= hi the token lo has no justification
    leq1_flat = frozenset({(lo, lo), (hi, hi)})
    assert not deleted_condition_fc(
        frozenset({lo, hi}), frozenset({other}), leq1_flat, leq2, beta
    )


def test_deleted_condition_fc_readings_agree():
    tokens = [("p", i) for i in (1, 2)] + [("q", i) for i in (1, 2)]
    import itertools
    for r1 in (frozenset({tokens[0]}), frozenset(tokens[:2])):
        for r2 in (frozenset({tokens[2]}), frozenset(tokens[2:])):
            leq1 = frozenset(itertools.product(tokens[:2], tokens[:2]))
            leq2 = frozenset(itertools.product(tokens[2:], tokens[2:]))
            for beta in (frozenset(), frozenset({(tokens[0], tokens[2])}),
                         frozenset(itertools.product(tokens[:2], tokens[2:]))):
                assert deleted_condition_fc(
                    r1, r2, leq1, leq2, beta, "definition"
                ) == deleted_condition_fc(
                    r1, r2, leq1, leq2, beta, "restatement"
                )


def test_deleted_condition_cn_perfect_matching():
    a, b, c, d = ("p", 1), ("p", 2), ("q", 1), ("q", 2)
    assert deleted_condition_cn(
        frozenset({a, b}), frozenset({c, d}),
        frozenset({(a, c), (b, d)}),
    )
    # both left tokens can only match c: no perfect matching
    assert not deleted_condition_cn(
        frozenset({a, b}), frozenset({c, d}),
        frozenset({(a, c), (b, c)}),
    )
    assert not deleted_condition_cn(frozenset({a, b}), frozenset({c}),
                                    frozenset({(a, c), (b, c)}))


def test_fig1_fc_equivalent(fig1_net):
    v = decide_oim(fig1_net, Multiset.of("s1"), Multiset.of("s3"), 4)
    assert v.outcome == "equivalent"
    assert validate_witness(
        fig1_net, v.witness,
        _initial_triple(Multiset.of("s1"), Multiset.of("s3")), "fc",
    )


def test_fig1_cn_not_equivalent(fig1_net):
    v = decide_oimc(fig1_net, Multiset.of("s1"), Multiset.of("s3"), 4)
    assert v.outcome == "not-equivalent"
    assert validate_refutation(fig1_net, v.refutation, "cn")


def test_fig1_interleaving_equivalent(fig1_net):
    v = decide_interleaving(fig1_net, Multiset.of("s1"), Multiset.of("s3"), 4)
    assert v.outcome == "equivalent"


def test_reflexivity(fig2_net, fig2_m0):
    for decide in (decide_oim, decide_oimc, decide_interleaving):
        assert decide(fig2_net, fig2_m0, fig2_m0, 8).outcome == "equivalent"


def test_parallel_vs_choice(parallel_choice_net):
    m_par = Multiset.of("p1", "p2")
    m_choice = Multiset.of("q0")
    assert decide_interleaving(
        parallel_choice_net, m_par, m_choice, 4
    ).outcome == "equivalent"
    assert decide_oim(
        parallel_choice_net, m_par, m_choice, 4
    ).outcome == "not-equivalent"
    assert decide_oimc(
        parallel_choice_net, m_par, m_choice, 4
    ).outcome == "not-equivalent"


def test_size_gate(fig1_net):
    """Different-size deadlocked markings are cn-distinguished but
    fc-equivalent."""
    m1 = Multiset.of("s2")
    m2 = Multiset.of("s2", "s2")
    assert decide_oimc(fig1_net, m1, m2, 4).outcome == "not-equivalent"
    assert decide_oim(fig1_net, m1, m2, 4).outcome == "equivalent"


def test_symmetry(fig1_net, parallel_choice_net):
    pairs = [
        (fig1_net, Multiset.of("s1"), Multiset.of("s3")),
        (parallel_choice_net, Multiset.of("p1", "p2"), Multiset.of("q0")),
    ]
    for net, m1, m2 in pairs:
        for decide in (decide_oim, decide_oimc, decide_interleaving):
            assert decide(net, m1, m2, 4).outcome == decide(net, m2, m1, 4).outcome


def test_bound_exceeded_propagates(fig2_net, fig2_m0):
    with pytest.raises(BoundExceededError):
        decide_oim(fig2_net, fig2_m0, fig2_m0, 2)


def test_resource_limit_yields_unknown(fig2_net, fig2_m0):
    v = decide_oim(fig2_net, fig2_m0, fig2_m0, 8, Limits(max_triples=3))
    assert v.outcome == "unknown"
    assert v.witness is None and v.refutation is None


def test_witness_serialization_deterministic(fig1_net):
    m1, m2 = Multiset.of("s1"), Multiset.of("s3")
    a = format_witness(decide_oim(fig1_net, m1, m2, 4).witness)
    b = format_witness(decide_oim(fig1_net, m1, m2, 4).witness)
    assert a == b
    assert a.startswith("triples ")
    assert "beta" in a


def test_refutation_serialization(fig1_net):
    v = decide_oimc(fig1_net, Multiset.of("s1"), Multiset.of("s3"), 4)
    text = format_refutation(v.refutation)
    assert text.startswith("refuted:")


def test_tampered_witness_rejected(fig1_net):
    m1, m2 = Multiset.of("s1"), Multiset.of("s3")
    v = decide_oim(fig1_net, m1, m2, 4)
    root = _initial_triple(m1, m2)
    smaller = frozenset(t for t in v.witness if t != root)
    assert not validate_witness(fig1_net, smaller, root, "fc")
    # dropping a non-root triple breaks closure too
    for t in v.witness:
        if t != root:
            assert not validate_witness(
                fig1_net, v.witness - {t}, root, "fc"
            )
