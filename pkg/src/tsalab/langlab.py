"""Language laboratory: Parikh vectors, the gap test for semi-linear
Parikh images, structural sample-language oracles, finite automata with
a small regex front end, the TSA x FSA product, inverse-path automata,
the bounded rational-subset membership pipeline, erasing homomorphisms
and the direct-product free-group experiment.

Group alphabets write inverses with a trailing apostrophe (a' for the
inverse of a), so words over them are tokenised rather than indexed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .tsa import (
    ParseError,
    RunTrace,
    SearchOptions,
    Transition,
    Tsa,
    shortest_accepted,
)


class LanglabError(Exception):
    pass


class UnknownLetter(LanglabError):
    pass


class AlphabetMismatch(LanglabError):
    pass


# ---------------------------------------------------------------------------
# tokens

def tokenize(word: str | Sequence[str], alphabet: Sequence[str] | None = None) -> tuple[str, ...]:
    """Split a word into letters; a letter is a character plus an optional
    trailing apostrophe.  Sequences are passed through unchanged."""
    if not isinstance(word, str):
        toks = tuple(word)
    else:
        toks = []
        i = 0
        while i < len(word):
            ch = word[i]
            if i + 1 < len(word) and word[i + 1] == "'":
                toks.append(ch + "'")
                i += 2
            else:
                toks.append(ch)
                i += 1
        toks = tuple(toks)
    if alphabet is not None:
        bad = [t for t in toks if t not in alphabet]
        if bad:
            raise UnknownLetter(f"letters {bad} not in alphabet {list(alphabet)}")
    return toks


# ---------------------------------------------------------------------------
# Parikh vectors and the gap test

@dataclass(frozen=True)
class ParikhVector:
    alphabet: tuple[str, ...]
    counts: tuple[int, ...]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.alphabet, self.counts))

    def __add__(self, other: "ParikhVector") -> "ParikhVector":
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch("cannot add vectors over different alphabets")
        return ParikhVector(self.alphabet, tuple(a + b for a, b in zip(self.counts, other.counts)))


def parikh(word: str | Sequence[str], alphabet: Sequence[str]) -> ParikhVector:
    toks = tokenize(word, alphabet)
    alpha = tuple(alphabet)
    return ParikhVector(alpha, tuple(toks.count(a) for a in alpha))


@dataclass(frozen=True)
class LinearSet:
    """Base vector plus period vectors; a data carrier for reports only."""

    base: tuple[int, ...]
    periods: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if any(x < 0 for x in self.base) or any(x < 0 for v in self.periods for x in v):
            raise ValueError("entries must be non-negative")


@dataclass
class GapReport:
    verdict: str  # "gap-divergent (sample)" | "inconclusive"
    thresholds: dict[int, int | None]  # m -> least sample value past which gaps exceed m

    @property
    def divergent(self) -> bool:
        return self.verdict.startswith("gap-divergent")


def gap_check(lengths: Sequence[int], m_max: int) -> GapReport:
    """Sample-relative instance of the gap criterion: if for every m the
    consecutive gaps eventually exceed m, the Parikh image of the sampled
    language cannot be semi-linear.  The verdict never claims more than
    the sample shows."""
    ls = list(lengths)
    if any(b <= a for a, b in zip(ls, ls[1:])):
        raise ValueError("lengths must be strictly increasing")
    gaps = [b - a for a, b in zip(ls, ls[1:])]
    thresholds: dict[int, int | None] = {}
    for m in range(1, m_max + 1):
        small = [i for i, g in enumerate(gaps) if g <= m]
        if not small:
            thresholds[m] = ls[0]
        elif small[-1] == len(gaps) - 1:
            thresholds[m] = None  # gaps <= m persist to the end of the sample
        else:
            thresholds[m] = ls[small[-1] + 1]
    ok = all(v is not None for v in thresholds.values()) and len(gaps) > 0
    return GapReport("gap-divergent (sample)" if ok else "inconclusive", thresholds)


def unary_lengths(family: str, n_max: int, alpha: float | None = None) -> list[int]:
    """Length samples for the unary gap families."""
    if family == "pow2":
        return [2 ** n for n in range(1, n_max + 1)]
    if family == "square":
        return [n * n for n in range(1, n_max + 1)]
    if family == "alpha":
        if alpha is None or alpha <= 1:
            raise ValueError("alpha family needs alpha > 1")
        vals = sorted({int(n ** alpha) for n in range(1, n_max + 1)})
        return vals
    if family == "nlogn":
        vals = sorted({int(n * math.log(n)) for n in range(2, n_max + 2)})
        return vals
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# group alphabets and free reduction

@dataclass(frozen=True)
class GroupAlphabet:
    letters: tuple[str, ...]
    pairing: tuple[tuple[str, str], ...]  # letter -> inverse letter

    def __post_init__(self):
        pair = dict(self.pairing)
        for x in self.letters:
            if x not in pair or pair[x] not in self.letters:
                raise ValueError(f"pairing not total at {x!r}")
            if pair[x] == x:
                raise ValueError(f"pairing must be fixpoint-free, {x!r} is self-inverse")
            if pair[pair[x]] != x:
                raise ValueError("pairing must be an involution")

    def inverse(self, letter: str) -> str:
        return dict(self.pairing)[letter]

    def inverse_word(self, word: str | Sequence[str]) -> tuple[str, ...]:
        toks = tokenize(word, self.letters)
        return tuple(self.inverse(t) for t in reversed(toks))


def group_alphabet(*pairs: tuple[str, str]) -> GroupAlphabet:
    letters = tuple(x for pair in pairs for x in pair)
    pairing = tuple(pairs) + tuple((b, a) for a, b in pairs)
    return GroupAlphabet(letters, pairing)


WPZ_ALPHABET = group_alphabet(("t", "T"))
F2F2_ALPHABET = group_alphabet(("a", "a'"), ("b", "b'"), ("c", "c'"), ("d", "d'"))


def free_reduce(tokens: Iterable[str], pairing: dict[str, str]) -> tuple[str, ...]:
    stack: list[str] = []
    for tok in tokens:
        if stack and pairing.get(tok) == stack[-1]:
            stack.pop()
        else:
            stack.append(tok)
    return tuple(stack)


# ---------------------------------------------------------------------------
# sample-language oracles

@dataclass(frozen=True)
class WordOracle:
    name: str
    alphabet: tuple[str, ...]
    membership: Callable[[str], bool]

    def __call__(self, word: str) -> bool:
        return bool(self.membership(word))


def _runs(word: str) -> list[tuple[str, int]]:
    return [(ch, sum(1 for _ in grp)) for ch, grp in itertools.groupby(word)]


def _letters(k: int) -> tuple[str, ...]:
    if k > 26:
        raise ValueError("at most 26 indexed letters supported")
    return tuple(chr(ord("a") + i) for i in range(k))


def oracle(name: str, **params) -> WordOracle:
    """Structural pattern oracles for the sample languages.

    Names: s_m(m), ambm_n, ab_m_n, l_k_nonincreasing(k),
    unary(family in pow2|square|alpha|nlogn), wp_z, wp_f2xf2.
    Indexed letters a_1, a_2, ... are written a, b, c, ...
    """
    if name == "s_m":
        m = params["m"]
        letters = _letters(2 * m + 1)

        def member(w: str) -> bool:
            runs = _runs(w)
            if not w:
                return True
            if len(runs) != len(letters):
                return False
            return (tuple(ch for ch, _ in runs) == letters
                    and len({n for _, n in runs}) == 1)

        return WordOracle(name, letters, member)

    if name == "ambm_n":
        def member(w: str) -> bool:
            runs = _runs(w)
            if len(runs) < 2 or len(runs) % 2:
                return False
            if any(ch != "ab"[i % 2] for i, (ch, _) in enumerate(runs)):
                return False
            return len({n for _, n in runs}) == 1

        return WordOracle(name, ("a", "b"), member)

    if name == "ab_m_n":
        def member(w: str) -> bool:
            runs = _runs(w)
            if len(runs) < 2 or len(runs) % 2:
                return False
            if any(ch != "ab"[i % 2] for i, (ch, _) in enumerate(runs)):
                return False
            if any(n != 1 for i, (_, n) in enumerate(runs) if i % 2 == 0):
                return False
            return len({n for i, (_, n) in enumerate(runs) if i % 2}) == 1

        return WordOracle(name, ("a", "b"), member)

    if name == "l_k_nonincreasing":
        k = params["k"]
        letters = _letters(k)

        def member(w: str) -> bool:
            # non-increasing exponents mean the word is a block prefix
            # a^n1 b^n2 ... with n1 >= n2 >= ... >= 1 (zeros only at the end)
            runs = _runs(w)
            if tuple(ch for ch, _ in runs) != letters[: len(runs)]:
                return False
            counts = [n for _, n in runs]
            return all(a >= b for a, b in zip(counts, counts[1:]))

        return WordOracle(name, letters, member)

    if name == "unary":
        family = params["family"]
        alpha = params.get("alpha")

        def member(w: str) -> bool:
            if set(w) - {"a"}:
                return False
            n = len(w)
            if family == "pow2":
                return n >= 1 and (n & (n - 1)) == 0
            if family == "square":
                r = math.isqrt(n)
                return n >= 1 and r * r == n
            if family == "alpha":
                return n in set(unary_lengths("alpha", max(2, 2 * n), alpha=alpha))
            if family == "nlogn":
                return n in set(unary_lengths("nlogn", max(2, 4 * n + 4)))
            raise ValueError(f"unknown family {family!r}")

        return WordOracle(name, ("a",), member)

    if name == "wp_z":
        def member(w: str) -> bool:
            toks = tokenize(w, ("t", "T"))
            return toks.count("t") == toks.count("T")

        return WordOracle(name, ("t", "T"), member)

    if name == "wp_f2xf2":
        return WordOracle(name, F2F2_ALPHABET.letters, wp_f2xf2)

    raise ValueError(f"unknown oracle {name!r}")


def wp_f2xf2(word: str | Sequence[str]) -> bool:
    """Identity test in the direct product of two rank-2 free groups:
    project onto the {a,b} and {c,d} components and freely reduce each."""
    toks = tokenize(word, F2F2_ALPHABET.letters)
    pairing = dict(F2F2_ALPHABET.pairing)
    # letter counts must balance before any reduction can reach the identity
    for x, y in (("a", "a'"), ("b", "b'"), ("c", "c'"), ("d", "d'")):
        if toks.count(x) != toks.count(y):
            return False
    ab = [t for t in toks if t[0] in "ab"]
    cd = [t for t in toks if t[0] in "cd"]
    return not free_reduce(ab, pairing) and not free_reduce(cd, pairing)


def type_p(word: str, p: int, scheme: str = "ambm", zero_bound: int | None = None) -> bool:
    """Word types from the block-language arguments.

    scheme "ambm": type p >= 1 means a factor a b^p a or b a^p b occurs;
    type 0 means the word lies in a*b* or b*a*.  scheme "abm": type p >= 1
    means a factor a b^p a occurs; type 0 means the word is b^s a b^t with
    s, t below zero_bound."""
    if scheme not in ("ambm", "abm"):
        raise ValueError("scheme must be 'ambm' or 'abm'")
    if p >= 1:
        if "a" + "b" * p + "a" in word:
            return True
        if scheme == "ambm" and "b" + "a" * p + "b" in word:
            return True
        return False
    if scheme == "ambm":
        return _is_block(word, "a", "b") or _is_block(word, "b", "a")
    if zero_bound is None:
        raise ValueError("type 0 in the 'abm' scheme needs zero_bound")
    runs = _runs(word)
    if word.count("a") != 1:
        return False
    s = len(word.split("a")[0])
    t = len(word.split("a")[1])
    return set(word) <= {"a", "b"} and s < zero_bound and t < zero_bound


def _is_block(word: str, x: str, y: str) -> bool:
    i = 0
    while i < len(word) and word[i] == x:
        i += 1
    return all(ch == y for ch in word[i:])


# ---------------------------------------------------------------------------
# finite automata

@dataclass(frozen=True)
class Fsa:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: tuple[tuple[str, str | None, str], ...]  # (src, letter or None, dst)
    initial: str
    finals: frozenset[str]

    def __post_init__(self):
        states = set(self.states)
        if self.initial not in states or not self.finals <= states:
            raise ValueError("undeclared initial or final state")
        for src, sym, dst in self.delta:
            if src not in states or dst not in states:
                raise ValueError(f"undeclared endpoint in {(src, sym, dst)}")
            if sym is not None and sym not in self.alphabet:
                raise ValueError(f"letter {sym!r} not in alphabet")

    def has_eps(self) -> bool:
        return any(sym is None for _, sym, _ in self.delta)


def _eps_closure(fsa: Fsa, states: set[str]) -> set[str]:
    out = set(states)
    frontier = list(states)
    while frontier:
        q = frontier.pop()
        for src, sym, dst in fsa.delta:
            if src == q and sym is None and dst not in out:
                out.add(dst)
                frontier.append(dst)
    return out


def fsa_accepts(fsa: Fsa, word: str | Sequence[str]) -> bool:
    toks = tokenize(word)
    current = _eps_closure(fsa, {fsa.initial})
    for tok in toks:
        nxt = {dst for src, sym, dst in fsa.delta if src in current and sym == tok}
        current = _eps_closure(fsa, nxt)
        if not current:
            return False
    return bool(current & fsa.finals)


def eps_free(fsa: Fsa) -> Fsa:
    """Equivalent automaton without eps transitions (standard closure)."""
    closures = {q: _eps_closure(fsa, {q}) for q in fsa.states}
    delta = []
    seen = set()
    for q in fsa.states:
        for mid in sorted(closures[q]):
            for src, sym, dst in fsa.delta:
                if src == mid and sym is not None:
                    edge = (q, sym, dst)
                    if edge not in seen:
                        seen.add(edge)
                        delta.append(edge)
    finals = frozenset(q for q in fsa.states if closures[q] & fsa.finals)
    return Fsa(fsa.states, fsa.alphabet, tuple(delta), fsa.initial, finals)


def fsa_enumerate(fsa: Fsa, max_len: int) -> set[tuple[str, ...]]:
    out = set()
    for n in range(max_len + 1):
        for toks in itertools.product(fsa.alphabet, repeat=n):
            if fsa_accepts(fsa, toks):
                out.add(toks)
    return out


# regex front end: concatenation, |, *, +, grouping; letters may carry '

class _RegexParser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.counter = itertools.count()
        self.states: list[str] = []
        self.delta: list[tuple[str, str | None, str]] = []
        self.letters: list[str] = []

    def fresh(self) -> str:
        q = f"r{next(self.counter)}"
        self.states.append(q)
        return q

    def edge(self, a, sym, b):
        self.delta.append((a, sym, b))

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else None

    def parse(self) -> tuple[str, str]:
        start, end = self.alt()
        if self.i != len(self.text):
            raise ParseError(f"unexpected {self.text[self.i]!r} at {self.i}")
        return start, end

    def alt(self):
        starts_ends = [self.concat()]
        while self.peek() == "|":
            self.i += 1
            starts_ends.append(self.concat())
        if len(starts_ends) == 1:
            return starts_ends[0]
        s, e = self.fresh(), self.fresh()
        for a, b in starts_ends:
            self.edge(s, None, a)
            self.edge(b, None, e)
        return s, e

    def concat(self):
        parts = []
        while True:
            ch = self.peek()
            if ch is None or ch in "|)":
                break
            parts.append(self.repeat())
        if not parts:
            q = self.fresh()
            return q, q
        start, end = parts[0]
        for a, b in parts[1:]:
            self.edge(end, None, a)
            end = b
        return start, end

    def repeat(self):
        start, end = self.atom()
        while self.peek() in ("*", "+"):
            op = self.text[self.i]
            self.i += 1
            s, e = self.fresh(), self.fresh()
            self.edge(s, None, start)
            self.edge(end, None, e)
            self.edge(end, None, start)
            if op == "*":
                self.edge(s, None, e)
            start, end = s, e
        return start, end

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.i += 1
            inner = self.alt()
            if self.peek() != ")":
                raise ParseError("missing ')'")
            self.i += 1
            return inner
        if ch is None or ch in "|*+)":
            raise ParseError(f"unexpected {ch!r} at {self.i}")
        self.i += 1
        tok = ch
        if self.peek() == "'":
            tok += "'"
            self.i += 1
        if tok not in self.letters:
            self.letters.append(tok)
        s, e = self.fresh(), self.fresh()
        self.edge(s, tok, e)
        return s, e


def regex_to_fsa(pattern: str, alphabet: Sequence[str] | None = None) -> Fsa:
    """Thompson construction over apostrophe-aware single-symbol tokens."""
    parser = _RegexParser(pattern.replace(" ", ""))
    start, end = parser.parse()
    alpha = tuple(alphabet) if alphabet is not None else tuple(parser.letters)
    missing = set(parser.letters) - set(alpha)
    if missing:
        raise AlphabetMismatch(f"pattern uses letters {sorted(missing)} outside the alphabet")
    return Fsa(tuple(parser.states), alpha, tuple(parser.delta), start, frozenset({end}))


F2F2_T_PATTERN = "((ca)+(db)+)+(b')+((d'a')+(c'b')+)*(d'a')+(c')+"


def f2f2_T() -> Fsa:
    """The test language over the eight group letters used by the direct
    product experiment."""
    return regex_to_fsa(F2F2_T_PATTERN, F2F2_ALPHABET.letters)


# FSA file format: mirrors the TSA format minus predicates/instructions

def parse_fsa(text: str) -> Fsa:
    states: list[str] = []
    alphabet: list[str] = []
    initial = None
    finals: list[str] = []
    delta: list[tuple[str, str | None, str]] = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if "#" in raw:
            raw = raw.split("#", 1)[0]
        line = raw.strip()
        if not line:
            continue
        if not saw_header:
            if line != "fsa":
                raise ParseError("expected 'fsa' header", lineno)
            saw_header = True
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: ...', got {line!r}", lineno)
        key, rest = line.split(":", 1)
        toks = rest.split()
        key = key.strip()
        if key == "states":
            states.extend(toks)
        elif key == "initial":
            initial = toks[0]
        elif key == "final":
            finals.extend(toks)
        elif key == "alphabet":
            alphabet.extend(toks)
        elif key == "trans":
            if len(toks) != 3:
                raise ParseError("transition needs: src letter dst", lineno)
            src, sym, dst = toks
            delta.append((src, None if sym == "eps" else sym, dst))
        else:
            raise ParseError(f"unknown section {key!r}", lineno)
    if initial is None:
        raise ParseError("missing initial state", 1)
    return Fsa(tuple(states), tuple(alphabet), tuple(delta), initial, frozenset(finals))


# ---------------------------------------------------------------------------
# TSA x FSA product and the rational-subset pipeline

def tsa_fsa_product(tsa: Tsa, fsa: Fsa) -> Tsa:
    """Intersection automaton: FSA tracks the letters the TSA reads.

    The FSA must be eps-free; the tree stack component is untouched, so
    k-restricted witnesses stay k-restricted."""
    if fsa.has_eps():
        raise ValueError("run eps_free() on the FSA first")
    if set(fsa.alphabet) != set(tsa.alphabet):
        raise AlphabetMismatch(f"tsa alphabet {tsa.alphabet} != fsa alphabet {fsa.alphabet}")

    def pair(q, f):
        return f"{q}&{f}"

    states = tuple(pair(q, f) for q in tsa.states for f in fsa.states)
    delta = []
    for t in tsa.delta:
        if t.inp is None:
            for f in fsa.states:
                delta.append(Transition(pair(t.src, f), None, t.pred, t.instr,
                                        pair(t.dst, f), name=t.name))
        else:
            for src, sym, dst in fsa.delta:
                if sym == t.inp:
                    delta.append(Transition(pair(t.src, src), t.inp, t.pred, t.instr,
                                            pair(t.dst, dst), name=t.name))
    finals = frozenset(pair(q, f) for q in tsa.finals for f in fsa.finals)
    return Tsa(states, tsa.labels, tsa.alphabet, pair(tsa.initial, fsa.initial),
               tuple(delta), finals)


def build_Bw(fsa: Fsa, w: str | Sequence[str], pairing: GroupAlphabet) -> Fsa:
    """Attach a path reading the inverse word of w after the accept state:
    L(B_w) = L(B) . w^{-1}.  The automaton is first normalised to a single
    final state via eps edges."""
    states = list(fsa.states)
    delta = list(fsa.delta)

    def fresh(base):
        name = base
        while name in states:
            name += "'"
        states.append(name)
        return name

    if len(fsa.finals) == 1:
        final = next(iter(fsa.finals))
    else:
        final = fresh("F")
        for f in sorted(fsa.finals):
            delta.append((f, None, final))

    cur = final
    for tok in pairing.inverse_word(w):
        nxt = fresh("w")
        delta.append((cur, tok, nxt))
        cur = nxt
    return Fsa(tuple(states), fsa.alphabet, tuple(delta), fsa.initial,
               frozenset({cur}))


@dataclass
class RationalAnswer:
    verdict: str  # "yes" | "unknown"
    witness: str | None = None
    trace: RunTrace | None = None
    reason: str | None = None  # for unknown: "budget" | "exhausted"


def rational_membership(wp_tsa: Tsa, fsa: Fsa, w: str, pairing: GroupAlphabet,
                        max_len: int = 12,
                        opts: SearchOptions | None = None) -> RationalAnswer:
    """Does the group element of w lie in the rational subset the FSA
    describes?  Searches WP x (B . w^{-1}) for any accepted word up to
    max_len: a witness proves yes; otherwise the answer is unknown, since
    the search is a bounded stand-in for a grammar-level emptiness test."""
    bw = eps_free(build_Bw(fsa, w, pairing))
    product = tsa_fsa_product(wp_tsa, bw)
    opts = opts or SearchOptions()
    res = shortest_accepted(product, max_len, opts)
    if res:
        from .tsa import replay_trace

        replay_trace(res)  # a yes answer must come with a replaying witness
        return RationalAnswer("yes", witness=res.word, trace=res)
    return RationalAnswer("unknown", reason=res.reason)


# ---------------------------------------------------------------------------
# erasing homomorphisms and the F2 x F2 experiment

def erasing_hom(word: str | Sequence[str], letter_map: dict[str, str]) -> str:
    toks = tokenize(word)
    missing = [t for t in toks if t not in letter_map]
    if missing:
        raise UnknownLetter(f"letters {missing} missing from the map")
    return "".join(letter_map[t] for t in toks)


F2F2_PSI = {"a": "a", "b": "b",
            "a'": "", "b'": "", "c": "", "c'": "", "d": "", "d'": ""}


@dataclass
class F2F2Report:
    n_max: int
    m_max: int
    total: int
    members: int
    mismatches: list[tuple]  # (params, wp, eqs, all_equal) for any disagreement
    psi_image: set[str]
    psi_expected: set[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.psi_image == self.psi_expected


def _t_word_tokens(xs, ys, ps, qs) -> list[str]:
    """The test word with block exponents xs, ys (positive part) and
    ps, qs (inverse part); ps has one more entry than qs."""
    toks: list[str] = []
    for x, y in zip(xs, ys):
        toks.extend(["c", "a"] * x)
        toks.extend(["d", "b"] * y)
    toks.extend(["b'"] * ps[0])
    for j, q in enumerate(qs):
        toks.extend(["d'", "a'"] * q)
        if j + 1 < len(qs):
            toks.extend(["c'", "b'"] * ps[j + 1])
    toks.extend(["c'"] * ps[-1])
    return toks


def _eqs_hold(xs, ys, ps, qs) -> bool:
    """The two free-group cancellation chains: the first forces the
    inverse exponents to mirror ys, xs in reverse, the second shifts the
    mirror by one; together they force all exponents equal."""
    n, t = len(xs), len(qs)
    if n != t:
        return False
    eq1 = all(ps[i] == ys[n - 1 - i] and qs[i] == xs[n - 1 - i] for i in range(n))
    eq2 = (all(qs[i] == ys[n - 1 - i] for i in range(n))
           and all(ps[i + 1] == xs[n - 1 - i] for i in range(n)))
    return eq1 and eq2


def f2f2_experiment(n_max: int = 3, m_max: int = 3) -> F2F2Report:
    """Enumerate the test words with up to n_max blocks per segment and
    exponents up to m_max; check that word-problem membership coincides
    with the cancellation equations and with all exponents being equal,
    and that erasing everything but a, b maps the members onto the
    two-parameter block language."""
    exps = range(1, m_max + 1)
    total = 0
    members = 0
    mismatches = []
    psi_image: set[str] = set()
    for n in range(1, n_max + 1):
        for t in range(1, n_max + 1):
            for xs in itertools.product(exps, repeat=n):
                for ys in itertools.product(exps, repeat=n):
                    for ps in itertools.product(exps, repeat=t + 1):
                        for qs in itertools.product(exps, repeat=t):
                            total += 1
                            toks = _t_word_tokens(xs, ys, ps, qs)
                            wp = wp_f2xf2(toks)
                            eqs = _eqs_hold(xs, ys, ps, qs)
                            all_equal = len({*xs, *ys, *ps, *qs}) == 1 and n == t
                            if not (wp == eqs == all_equal):
                                mismatches.append(((n, t, xs, ys, ps, qs), wp, eqs, all_equal))
                            if wp:
                                members += 1
                                psi_image.add(erasing_hom(toks, F2F2_PSI))
    expected = {("a" * m + "b" * m) * n for m in range(1, m_max + 1) for n in range(1, n_max + 1)}
    return F2F2Report(n_max, m_max, total, members, mismatches, psi_image, expected)
