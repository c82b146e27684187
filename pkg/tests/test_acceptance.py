"""Acceptance suite: one test per criterion, each printing a pass/fail
line with its runtime.  Expected values come from structural oracles or
were hand-verified against the source tables before being frozen here.

Criterion 8's whole-word rejection claim does not hold for the published
machine (it accepts ttTtTT on a branch its stuck-run table never takes);
that half is asserted as stated and marked xfail.  See the README note.
"""

import random
import time

import pytest

from conftest import abcd_oracle, abcd_word, anbmcndm_oracle, counting_wpz_oracle, words_upto

from tsalab import analysis, convert, langlab, mcfg
from tsalab.fixtures import abcd_tsa, astar_tsa, updown_demo_run, updown_demo_tsa
from tsalab.tsa import (
    SearchOptions,
    accepts,
    is_k_restricted,
    replay,
    step,
    visited_from_below_counts,
)

K2 = SearchOptions(k=2)


class Stopwatch:
    def __init__(self, criterion, limit_s):
        self.criterion = criterion
        self.limit = limit_s

    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.monotonic() - self.t0
        status = "PASS" if exc_type is None else "FAIL"
        print(f"criterion {self.criterion}: {status} ({dt:.2f}s, limit {self.limit}s)")
        self.fast_enough = dt < self.limit
        if exc_type is None:
            assert self.fast_enough, f"criterion {self.criterion} exceeded {self.limit}s"
        return False


def test_criterion_01_abcd_reproduction():
    with Stopwatch(1, 1.0):
        tsa = abcd_tsa()
        for m in range(7):
            res = accepts(tsa, abcd_word(m), K2)
            assert res, m
            assert res.final().ts.pointer == ()
            assert is_k_restricted(res, 2)
        table = accepts(tsa, abcd_word(2), K2)
        assert table.names() == ["s1", "s1", "s2", "s3", "s4", "s4",
                                 "s5", "s6", "s6", "s7", "s8", "s8", "s9"]


def test_criterion_02_rejection_soundness():
    with Stopwatch(2, 120.0):
        tsa = abcd_tsa()
        checked = 0
        for w in words_upto("abcd", 8):
            res = accepts(tsa, w, K2)
            if res:
                assert abcd_oracle(w), w
            else:
                assert res.reason == "exhausted", w  # budgets sized to close
                assert not abcd_oracle(w), w
            checked += 1
        assert checked == sum(4 ** n for n in range(9))


def test_criterion_03_run_analysis_values():
    with Stopwatch(3, 1.0):
        idx, word = updown_demo_run()
        tr = replay(updown_demo_tsa(), word, idx)
        assert analysis.up_down_vector(tr, (1, 1)).flat() == (2, 5, 9, 12)
        f = analysis.nu_factorisation(tr, (1, 1))
        assert (f.w0, f.parts) == ("ab", (("c", "de"), ("f", "gh")))
        h = analysis.history_array(tr, (1, 1))
        assert h.labels == ("c2", "c3", "c3", "c6")
        assert h.states == ("q2", "q5", "q4", "q0")


def test_criterion_04_single_swap_soundness():
    with Stopwatch(4, 60.0):
        tsa = abcd_tsa()
        opts = SearchOptions(k=2, proper_only=True)
        traces = {m: accepts(tsa, abcd_word(m), opts) for m in range(5)}
        pairs = 0
        for t1 in traces.values():
            for t2 in traces.values():
                for v1 in sorted(t1.final().ts.dom):
                    for v2 in sorted(t2.final().ts.dom):
                        if v1 == () or v2 == ():
                            continue
                        if (analysis.history_array(t1, v1)
                                != analysis.history_array(t2, v2)):
                            continue
                        rep = analysis.single_swap(t1, v1, t2, v2)
                        assert rep.accepted and rep.spliced_replay_ok
                        pairs += 1
        assert pairs >= 100  # 100% of matching pairs spliced and accepted


def test_criterion_05_mcfg_fixtures():
    with Stopwatch(5, 5.0):
        g1 = mcfg.parse_mcfg(mcfg.EXAMPLE_ABCD)
        assert mcfg.mcfg_enumerate(g1, 12) == {abcd_word(i) for i in range(4)}
        g2 = mcfg.parse_mcfg(mcfg.EXAMPLE_ANBMCNDM)
        got = mcfg.mcfg_enumerate(g2, 12)
        want = {"a" * n + "b" * m + "c" * n + "d" * m
                for n in range(7) for m in range(7) if 2 * n + 2 * m <= 12}
        assert got == want
        assert all(anbmcndm_oracle(w) for w in got)


def test_criterion_06_pda_round_trip():
    with Stopwatch(6, 120.0):
        pda = convert.fixture_wpz_pda()
        tsa = convert.pda_to_tsa1(pda)
        back = convert.tsa1_to_pda(tsa)
        opts = SearchOptions(accept_mode="any")
        words = 0
        for w in words_upto("tT", 8):
            want = counting_wpz_oracle(w)
            a = convert.pda_accepts(pda, w)
            b = accepts(tsa, w, opts)
            c = convert.pda_accepts(back, w)
            assert bool(a) == bool(b) == bool(c) == want, w
            if b:
                counts = visited_from_below_counts(b)
                assert all(v <= 1 for v in counts.values()), w
            if w:
                words += 1
        assert words == 510


def test_criterion_07_translated_trace_golden():
    with Stopwatch(7, 1.0):
        tsa = convert.fixture_wpz_tsa()
        res = accepts(tsa, "ttTtTT")
        assert res.names() == [
            "s0", "s'1@", "s'2", "s'1t", "s'2", "s''5", "s''7", "s'3t",
            "s'4t", "s'2", "s''5", "s''7", "s''5", "s''6", "s''7", "s'f", "s''f"]


def test_criterion_08_ks_stuck_configuration():
    with Stopwatch("8 (stuck branch)", 1.0):
        tsa = convert.fixture_ks_tsa()
        tr = replay(tsa, "ttTtTT", convert.ks_stuck_prefix(tsa))
        final = tr.final()
        assert (final.state, final.ts.pointer, final.ts.pointer_label, final.pos) == \
            ("S", (1, 2), "t", 3)
        for t in tsa.delta:
            with pytest.raises(Exception):
                step(tsa, "ttTtTT", final, t)


@pytest.mark.xfail(strict=True,
                   reason="does not hold as stated: the published machine "
                          "accepts ttTtTT via a branch its stuck-run table "
                          "never takes (see the README note)")
def test_criterion_08_ks_whole_word_rejection():
    tsa = convert.fixture_ks_tsa()
    res = accepts(tsa, "ttTtTT", SearchOptions(accept_mode="any"))
    print("criterion 8 (whole-word rejection): "
          + ("PASS" if not res else "FAIL (machine accepts: "
             + " ".join(res.names()) + ")"))
    assert not res  # the criterion as stated


def test_criterion_09_f2f2_experiment():
    with Stopwatch(9, 60.0):
        rep = langlab.f2f2_experiment(3, 3)
        assert not rep.mismatches
        assert rep.members == 9
        assert rep.psi_image == rep.psi_expected
        assert rep.psi_expected == {("a" * m + "b" * m) * n
                                    for m in (1, 2, 3) for n in (1, 2, 3)}


def test_criterion_10_gap_families():
    with Stopwatch(10, 1.0):
        rep = langlab.gap_check(langlab.unary_lengths("pow2", 20), 50)
        assert rep.divergent and all(v is not None for v in rep.thresholds.values())
        rep = langlab.gap_check(langlab.unary_lengths("square", 50), 50)
        assert rep.divergent and all(v is not None for v in rep.thresholds.values())
        rep = langlab.gap_check(list(range(3, 300, 3)), 50)
        assert rep.verdict == "inconclusive"


def test_criterion_11_bound_formulas():
    with Stopwatch(11, 1.0):
        assert analysis.substitution_bound(1, 1, 2, 2, 5, 1, 0) == (42, 42)
        rng = random.Random(2024)
        for _ in range(1000):
            args = [rng.randint(0, 40) for _ in range(7)]
            n_lam, n_mu = analysis.substitution_bound(*args)
            if args[1] == args[0]:
                assert n_lam == n_mu
            coord = rng.randrange(7)
            bigger = list(args)
            bigger[coord] += rng.randint(0, 10)
            b_lam, b_mu = analysis.substitution_bound(*bigger)
            assert b_lam >= n_lam and b_mu >= n_mu


def test_criterion_12_pumpability():
    with Stopwatch(12, 5.0):
        ast = astar_tsa()
        tr = accepts(ast, "a" * 5, SearchOptions(accept_mode="any"))
        res = analysis.find_pumpable(tr, 1, SearchOptions(accept_mode="any"))
        assert res is not None
        assert 1 <= len(res.y) <= len(ast.labels) * len(ast.states)
        assert res.verified == {0: True, 2: True, 3: True}
        tsa = abcd_tsa()
        for m in range(1, 4):
            witness = accepts(tsa, abcd_word(m), K2)
            assert analysis.find_pumpable(witness, 1) is None
