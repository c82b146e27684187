import pytest

from conftest import abcd_oracle, anbmcndm_oracle

from tsalab.mcfg import (
    EXAMPLE_ABCD,
    EXAMPLE_ANBMCNDM,
    McfgError,
    RankMismatch,
    VariableReused,
    is_empty,
    mcfg_enumerate,
    mcfg_member,
    parse_mcfg,
    productive_nonterminals,
    rank,
)
from tsalab.tsa import ParseError


def test_parse_example_abcd():
    g = parse_mcfg(EXAMPLE_ABCD)
    assert dict(g.ranks) == {"T": 2, "S": 1}
    assert len(g.rules) == 3
    assert rank(g) == 2


def test_parse_example_anbmcndm():
    g = parse_mcfg(EXAMPLE_ANBMCNDM)
    assert dict(g.ranks) == {"P": 2, "Q": 2, "S": 1}
    assert rank(g) == 2


def test_rank_of_plain_cfg():
    g = parse_mcfg("mcfg\nstart: S\nrule: S(a x1) <- S(x1)\nrule: S(b) <-\n")
    assert rank(g) == 1


def test_rank_of_trivial_grammar():
    g = parse_mcfg("mcfg\nstart: S\nrule: S() <-\n")
    assert rank(g) == 1
    assert mcfg_enumerate(g, 0) == {""}


def test_variable_reuse_rejected():
    with pytest.raises(VariableReused):
        parse_mcfg("mcfg\nstart: S\nrule: S(x1 x1) <- T(x1)\nrule: T(a) <-\n")


def test_rank_mismatch_rejected():
    with pytest.raises(RankMismatch):
        parse_mcfg("mcfg\nstart: S\nrule: T(a, b) <-\nrule: S(x1) <- T(x1)\n")


def test_start_rank_must_be_one():
    with pytest.raises(RankMismatch):
        parse_mcfg("mcfg\nstart: S\nrule: S(a, b) <-\n")


def test_undeclared_variable_rejected():
    with pytest.raises(McfgError):
        parse_mcfg("mcfg\nstart: S\nrule: S(x2) <- T(x1)\nrule: T(a) <-\n")


def test_enumerate_example_abcd():
    g = parse_mcfg(EXAMPLE_ABCD)
    assert mcfg_enumerate(g, 8) == {"", "abcd", "aabbccdd"}
    for m in range(4):
        w = "a" * m + "b" * m + "c" * m + "d" * m
        assert w in mcfg_enumerate(g, 4 * m)
    words12 = mcfg_enumerate(g, 12)
    assert all(abcd_oracle(w) for w in words12)


def test_enumerate_example_anbmcndm():
    g = parse_mcfg(EXAMPLE_ANBMCNDM)
    got = mcfg_enumerate(g, 6)
    want = {"a" * n + "b" * m + "c" * n + "d" * m
            for n in range(4) for m in range(4) if 2 * n + 2 * m <= 6}
    assert got == want
    assert all(anbmcndm_oracle(w) for w in got)


def test_enumerate_bound_zero():
    g = parse_mcfg(EXAMPLE_ABCD)
    assert mcfg_enumerate(g, 0) == {""}
    g2 = parse_mcfg("mcfg\nstart: S\nrule: S(a) <-\n")
    assert mcfg_enumerate(g2, 0) == set()


def test_enumeration_monotone():
    g = parse_mcfg(EXAMPLE_ANBMCNDM)
    prev = set()
    for bound in range(0, 9, 2):
        cur = mcfg_enumerate(g, bound)
        assert prev <= cur
        prev = cur


def test_member():
    g = parse_mcfg(EXAMPLE_ABCD)
    assert mcfg_member(g, "abcd")
    assert mcfg_member(g, "")
    assert not mcfg_member(g, "abdc")
    assert not mcfg_member(g, "aabbccd")


def test_deleting_rules_allowed():
    # "at most once" permits dropping a body variable entirely
    g = parse_mcfg("mcfg\nstart: S\nrule: T(a, b) <-\nrule: S(x1) <- T(x1, x2)\n")
    assert mcfg_enumerate(g, 3) == {"a"}


def test_productive():
    g = parse_mcfg(EXAMPLE_ABCD)
    assert productive_nonterminals(g) == {"T", "S"}
    g2 = parse_mcfg(EXAMPLE_ANBMCNDM)
    assert productive_nonterminals(g2) == {"P", "Q", "S"}


def test_unproductive_grammar_is_empty():
    g = parse_mcfg("mcfg\nstart: S\nrule: S(x1) <- A(x1)\nrule: A(x1) <- S(x1)\n")
    assert productive_nonterminals(g) == set()
    assert is_empty(g)
    assert not is_empty(parse_mcfg(EXAMPLE_ABCD))


def test_productive_iff_small_enumeration_nonempty():
    # the fixpoint agrees with a short enumeration on all fixtures
    for text in (EXAMPLE_ABCD, EXAMPLE_ANBMCNDM):
        g = parse_mcfg(text)
        shortest = sum(min((sum(len(f) for f in _rule_terminal_fields(r))
                            for r in g.rules if r.head == nt and not r.body), default=0)
                       for nt, _ in g.ranks)
        assert (not is_empty(g)) == bool(mcfg_enumerate(g, shortest))


def _rule_terminal_fields(rule):
    return ["".join(tok for kind, tok in arg if kind == "t") for arg in rule.head_args]


def test_missing_header():
    with pytest.raises(ParseError):
        parse_mcfg("start: S\n")
