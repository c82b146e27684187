"""Tree stack automata: model, step semantics, nondeterministic
acceptance search with k-restriction accounting, standardisation
closure, degree normalisation and root-return normalisation.

The search is breadth-first over configurations with memoisation, so a
given automaton, word and budget always yield the same witness run;
golden-trace tests depend on that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Sequence

from .treestack import (
    ROOT,
    ROOT_LABEL,
    Address,
    Instruction,
    Predicate,
    PRED_TRUE,
    TreeStack,
    instr_applicable,
    instr_down,
    instr_id,
    instr_push,
    instr_set,
    instr_up,
    pred_eq,
    pred_eval,
    ts_apply,
    ts_init,
)


class TsaError(Exception):
    pass


class ParseError(TsaError):
    """Raised on malformed machine files; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownState(ParseError):
    pass


class UnknownLabel(ParseError):
    pass


class BadIndex(ParseError):
    pass


class NotApplicable(TsaError):
    """A transition does not apply to a configuration; .reason says why."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class ReplayMismatch(TsaError):
    def __init__(self, step_index, reason):
        self.step_index = step_index
        super().__init__(f"step {step_index}: {reason}")


class BudgetExceeded(TsaError):
    """Enumeration hit the search budget on at least one word."""

    def __init__(self, words, budget_words):
        self.words = words
        self.budget_words = budget_words
        super().__init__(f"budget hit on {len(budget_words)} word(s)")


@dataclass(frozen=True)
class Transition:
    """(source, input letter or None for eps, predicate, instruction, target)."""

    src: str
    inp: str | None
    pred: Predicate
    instr: Instruction
    dst: str
    name: str | None = None

    def core(self):
        """Identity used for deduplication; ignores the display name."""
        return (self.src, self.inp, self.pred, self.instr, self.dst)

    def is_stationary_eps(self) -> bool:
        """Reads eps and keeps the pointer where it is (id or set)."""
        return self.inp is None and self.instr.kind in ("id", "set")

    def __str__(self):
        inp = self.inp if self.inp is not None else "eps"
        return f"{self.src} {inp} {self.pred} {self.instr} {self.dst}"


@dataclass(frozen=True)
class Tsa:
    states: tuple[str, ...]
    labels: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: str
    delta: tuple[Transition, ...]
    finals: frozenset[str]

    def __post_init__(self):
        states = set(self.states)
        labels = set(self.labels)
        if ROOT_LABEL in labels:
            raise ValueError("@ is reserved for the root and cannot be in C")
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial} not declared")
        if not self.finals <= states:
            raise ValueError("final states must be declared states")
        for t in self.delta:
            if t.src not in states or t.dst not in states:
                raise ValueError(f"transition endpoint not declared: {t}")
            if t.inp is not None and t.inp not in self.alphabet:
                raise ValueError(f"input letter {t.inp!r} not in alphabet")
            if t.pred.kind == "eq" and t.pred.label != ROOT_LABEL and t.pred.label not in labels:
                raise ValueError(f"predicate label {t.pred.label!r} not declared")
            if t.instr.label is not None and t.instr.label not in labels:
                raise ValueError(f"instruction label {t.instr.label!r} not declared")

    def transition_display(self, idx: int) -> str:
        t = self.delta[idx]
        return t.name if t.name else f"#{idx + 1}"

    def outgoing(self) -> dict[str, list[tuple[int, "Transition"]]]:
        """Delta indexed by source state, preserving file order.  Cached:
        the automaton is immutable."""
        cached = self.__dict__.get("_outgoing")
        if cached is None:
            cached = {q: [] for q in self.states}
            for tidx, t in enumerate(self.delta):
                cached[t.src].append((tidx, t))
            object.__setattr__(self, "_outgoing", cached)
        return cached


@dataclass(frozen=True)
class Configuration:
    """Search state: control state, tree stack, input position, and the
    per-vertex count of visits from below (push or up arrivals)."""

    state: str
    ts: TreeStack
    pos: int
    vfb: tuple[tuple[Address, int], ...]

    def vfb_map(self) -> dict[Address, int]:
        return dict(self.vfb)


def initial_configuration(tsa: Tsa) -> Configuration:
    return Configuration(tsa.initial, ts_init(), 0, ())


def _bump_vfb(vfb: tuple, addr: Address) -> tuple:
    d = dict(vfb)
    d[addr] = d.get(addr, 0) + 1
    return tuple(sorted(d.items()))


def step(tsa: Tsa, w: str, cfg: Configuration, t: Transition) -> Configuration:
    """Apply one transition; raises NotApplicable with the failing check."""
    if cfg.state != t.src:
        raise NotApplicable("state mismatch")
    if t.inp is not None:
        if cfg.pos >= len(w) or w[cfg.pos] != t.inp:
            raise NotApplicable("input mismatch")
    if not pred_eval(cfg.ts, t.pred):
        raise NotApplicable("PredicateFails")
    if not instr_applicable(cfg.ts, t.instr):
        raise NotApplicable("InstructionFails")
    ts = ts_apply(cfg.ts, t.instr)
    vfb = cfg.vfb
    if t.instr.kind in ("push", "up"):
        vfb = _bump_vfb(vfb, ts.pointer)
    return Configuration(t.dst, ts, cfg.pos + (0 if t.inp is None else 1), vfb)


@dataclass
class RunTrace:
    """A recorded run: the word, the initial configuration and, per step,
    the delta index applied and the configuration it produced."""

    tsa: Tsa
    word: str
    steps: list[tuple[int, Configuration]]
    initial: Configuration

    def __len__(self):
        return len(self.steps)

    def __bool__(self):
        return True  # an empty accepting run is still a result

    def transitions(self) -> list[Transition]:
        return [self.tsa.delta[i] for i, _ in self.steps]

    def transition_indices(self) -> list[int]:
        return [i for i, _ in self.steps]

    def names(self) -> list[str]:
        return [self.tsa.transition_display(i) for i, _ in self.steps]

    def final(self) -> Configuration:
        return self.steps[-1][1] if self.steps else self.initial

    def configurations(self) -> list[Configuration]:
        """Configurations c_0 .. c_r (initial first)."""
        return [self.initial] + [c for _, c in self.steps]


class NotFound:
    """Failed search; reason is "exhausted" (space closed) or "budget"."""

    def __init__(self, reason: str):
        assert reason in ("exhausted", "budget")
        self.reason = reason

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NotFound({self.reason})"


@dataclass(frozen=True)
class SearchOptions:
    k: int | None = None
    accept_mode: str = "root"  # "root" | "any"
    max_steps: int | None = None
    max_vertices: int | None = None
    proper_only: bool = False

    def __post_init__(self):
        if self.accept_mode not in ("root", "any"):
            raise ValueError("accept_mode must be 'root' or 'any'")


def default_max_steps(tsa: Tsa, word_len: int) -> int:
    return 64 * (word_len + 1) * max(1, len(tsa.states))

def default_max_vertices(word_len: int) -> int:
    return 16 * (word_len + 1)


def _accepting(tsa: Tsa, cfg: Configuration, w_len: int, opts: SearchOptions) -> bool:
    if cfg.pos != w_len or cfg.state not in tsa.finals:
        return False
    return opts.accept_mode == "any" or cfg.ts.pointer == ROOT


def accepts(tsa: Tsa, w: str, opts: SearchOptions = SearchOptions()) -> RunTrace | NotFound:
    """Search for an accepting run of `tsa` on `w`.

    Breadth-first over configurations, children in delta order, with
    memoisation on (state, position, tree stack[, vfb][, properness bit]);
    the witness is therefore the lexicographically least shortest run.
    NotFound("budget") means the search was cut off, NotFound("exhausted")
    that the bounded space was fully explored.
    """
    max_steps = opts.max_steps if opts.max_steps is not None else default_max_steps(tsa, len(w))
    max_vertices = opts.max_vertices if opts.max_vertices is not None else default_max_vertices(len(w))

    init = initial_configuration(tsa)
    if _accepting(tsa, init, len(w), opts):
        return RunTrace(tsa, w, [], init)

    def key(cfg: Configuration, was_stat: bool):
        parts = [cfg.state, cfg.pos, cfg.ts.key()]
        if opts.k is not None:
            parts.append(cfg.vfb)
        if opts.proper_only:
            parts.append(was_stat)
        return tuple(parts)

    # arena of (configuration, parent node index, delta index, stationary flag)
    nodes: list[tuple[Configuration, int, int, bool]] = [(init, -1, -1, False)]
    visited = {key(init, False)}
    frontier = [0]
    depth = 0
    cut = False
    by_src = tsa.outgoing()

    while frontier:
        if depth >= max_steps:
            cut = True
            break
        depth += 1
        next_frontier: list[int] = []
        for node_idx in frontier:
            cfg, _, _, was_stat = nodes[node_idx]
            for tidx, t in by_src[cfg.state]:
                if t.inp is not None and (cfg.pos >= len(w) or w[cfg.pos] != t.inp):
                    continue
                if not pred_eval(cfg.ts, t.pred):
                    continue
                if not instr_applicable(cfg.ts, t.instr):
                    continue
                stat = t.is_stationary_eps()
                if opts.proper_only and was_stat and stat:
                    continue
                ts = ts_apply(cfg.ts, t.instr)
                vfb = cfg.vfb
                if t.instr.kind in ("push", "up"):
                    vfb = _bump_vfb(vfb, ts.pointer)
                    if opts.k is not None and dict(vfb)[ts.pointer] > opts.k:
                        continue
                if len(ts) > max_vertices:
                    cut = True
                    continue
                nxt = Configuration(t.dst, ts, cfg.pos + (0 if t.inp is None else 1), vfb)
                kk = key(nxt, stat)
                if kk in visited:
                    continue
                visited.add(kk)
                nodes.append((nxt, node_idx, tidx, stat))
                me = len(nodes) - 1
                if _accepting(tsa, nxt, len(w), opts):
                    return _trace_from_arena(tsa, w, nodes, me)
                next_frontier.append(me)
        frontier = next_frontier

    return NotFound("budget" if cut else "exhausted")


def _trace_from_arena(tsa, w, nodes, idx) -> RunTrace:
    steps = []
    while idx > 0:
        cfg, parent, tidx, _ = nodes[idx]
        steps.append((tidx, cfg))
        idx = parent
    steps.reverse()
    return RunTrace(tsa, w, steps, nodes[0][0])


def shortest_accepted(tsa: Tsa, max_len: int, opts: SearchOptions = SearchOptions()) -> RunTrace | NotFound:
    """Find an accepting run over *some* word of length <= max_len.

    Same BFS discipline as `accepts`, but reading transitions extend the
    word instead of matching a fixed one.  Used for emptiness-style
    questions (e.g. the rational-subset pipeline).
    """
    max_steps = opts.max_steps if opts.max_steps is not None else default_max_steps(tsa, max_len)
    max_vertices = opts.max_vertices if opts.max_vertices is not None else default_max_vertices(max_len)

    init = initial_configuration(tsa)

    def key(cfg: Configuration, was_stat: bool):
        parts = [cfg.state, cfg.pos, cfg.ts.key()]
        if opts.k is not None:
            parts.append(cfg.vfb)
        if opts.proper_only:
            parts.append(was_stat)
        return tuple(parts)

    def accepting(cfg):
        if cfg.state not in tsa.finals:
            return False
        return opts.accept_mode == "any" or cfg.ts.pointer == ROOT

    if accepting(init):
        return RunTrace(tsa, "", [], init)

    nodes: list[tuple[Configuration, int, int, bool, str]] = [(init, -1, -1, False, "")]
    visited = {key(init, False)}
    frontier = [0]
    depth = 0
    cut = False
    by_src = tsa.outgoing()
    while frontier:
        if depth >= max_steps:
            cut = True
            break
        depth += 1
        next_frontier = []
        for node_idx in frontier:
            cfg, _, _, was_stat, word = nodes[node_idx]
            for tidx, t in by_src[cfg.state]:
                if t.inp is not None and cfg.pos >= max_len:
                    cut = True
                    continue
                if not pred_eval(cfg.ts, t.pred):
                    continue
                if not instr_applicable(cfg.ts, t.instr):
                    continue
                stat = t.is_stationary_eps()
                if opts.proper_only and was_stat and stat:
                    continue
                ts = ts_apply(cfg.ts, t.instr)
                vfb = cfg.vfb
                if t.instr.kind in ("push", "up"):
                    vfb = _bump_vfb(vfb, ts.pointer)
                    if opts.k is not None and dict(vfb)[ts.pointer] > opts.k:
                        continue
                if len(ts) > max_vertices:
                    cut = True
                    continue
                nxt = Configuration(t.dst, ts, cfg.pos + (0 if t.inp is None else 1), vfb)
                kk = key(nxt, stat)
                if kk in visited:
                    continue
                visited.add(kk)
                nw = word if t.inp is None else word + t.inp
                nodes.append((nxt, node_idx, tidx, stat, nw))
                me = len(nodes) - 1
                if accepting(nxt):
                    steps = []
                    idx = me
                    while idx > 0:
                        c, parent, ti, _, _ = nodes[idx]
                        steps.append((ti, c))
                        idx = parent
                    steps.reverse()
                    return RunTrace(tsa, nw, steps, init)
                next_frontier.append(me)
        frontier = next_frontier
    return NotFound("budget" if cut else "exhausted")


def replay(tsa: Tsa, word: str, tidx_seq: Sequence[int]) -> RunTrace:
    """Re-execute a transition index sequence from the initial configuration.

    Raises ReplayMismatch at the first inapplicable step; the final
    configuration is trace.final().
    """
    cfg = initial_configuration(tsa)
    steps = []
    for j, tidx in enumerate(tidx_seq, start=1):
        if not 0 <= tidx < len(tsa.delta):
            raise ReplayMismatch(j, f"no transition #{tidx + 1}")
        try:
            cfg = step(tsa, word, cfg, tsa.delta[tidx])
        except NotApplicable as e:
            raise ReplayMismatch(j, e.reason) from None
        steps.append((tidx, cfg))
    return RunTrace(tsa, word, steps, initial_configuration(tsa))


def replay_trace(trace: RunTrace) -> Configuration:
    """Replay a RunTrace, checking each recorded configuration matches."""
    cfg = initial_configuration(trace.tsa)
    for j, (tidx, recorded) in enumerate(trace.steps, start=1):
        try:
            cfg = step(trace.tsa, trace.word, cfg, trace.tsa.delta[tidx])
        except NotApplicable as e:
            raise ReplayMismatch(j, e.reason) from None
        if cfg != recorded:
            raise ReplayMismatch(j, "recorded configuration differs")
    if cfg.pos != len(trace.word):
        raise ReplayMismatch(len(trace.steps), "word not fully consumed")
    return cfg


def enumerate_words(tsa: Tsa, max_len: int, opts: SearchOptions = SearchOptions()) -> set[str]:
    """All words of length <= max_len accepted within the budgets, by
    per-word search.  Raises BudgetExceeded (carrying the partial result)
    if any per-word search was cut off rather than exhausted.
    """
    found = set()
    budget_words = []
    for n in range(max_len + 1):
        for tup in itertools.product(tsa.alphabet, repeat=n):
            w = "".join(tup)
            res = accepts(tsa, w, opts)
            if res:
                found.add(w)
            elif res.reason == "budget":
                budget_words.append(w)
    if budget_words:
        raise BudgetExceeded(found, budget_words)
    return found


def visited_from_below_counts(trace: RunTrace) -> dict[Address, int]:
    """How many times each address was entered from its parent (push/up)."""
    counts: dict[Address, int] = {}
    for tidx, cfg in trace.steps:
        if trace.tsa.delta[tidx].instr.kind in ("push", "up"):
            addr = cfg.ts.pointer
            counts[addr] = counts.get(addr, 0) + 1
    return counts


def is_k_restricted(trace: RunTrace, k: int) -> bool:
    counts = visited_from_below_counts(trace)
    return all(c <= k for c in counts.values())


@dataclass(frozen=True)
class Degree:
    delta_set: frozenset[int]
    value: int


def degree(tsa: Tsa) -> Degree:
    """Distinct child indices used by push instructions; D bounds out-degree."""
    idx = frozenset(t.instr.n for t in tsa.delta if t.instr.kind == "push")
    return Degree(idx, len(idx))


def normalize_child_indices(tsa: Tsa) -> Tsa:
    """Remap push/up indices order-preservingly onto [1, D] so that the
    largest index used equals the degree.  The language is unchanged."""
    deg = degree(tsa)
    mapping = {old: rank for rank, old in enumerate(sorted(deg.delta_set), start=1)}
    new_delta = []
    for t in tsa.delta:
        if t.instr.kind in ("push", "up") and t.instr.n in mapping:
            new_delta.append(replace(t, instr=replace(t.instr, n=mapping[t.instr.n])))
        else:
            new_delta.append(t)
    return replace(tsa, delta=tuple(new_delta))


def _compose_stationary(t1: Transition, t2: Transition) -> Transition | None:
    """The composite transition required by the standardisation table for a
    composable pair of stationary eps-transitions, or None if no row matches.
    """
    p1, f1 = t1.pred, t1.instr
    p2, f2 = t2.pred, t2.instr

    def mk(pred, instr):
        return Transition(t1.src, None, pred, instr, t2.dst)

    if p1.kind == "true" and p2.kind == "true":
        f3 = f1 if f2.kind == "id" else f2
        return mk(p2, f3)
    if p1.kind == "true" and p2.kind == "eq":
        c = p2.label
        if f1.kind == "id" and f2.kind == "id":
            return mk(p2, f1)
        if f1.kind == "set" and f1.label == c and f2.kind == "id":
            return mk(p1, f1)
        if f1.kind == "id" and f2.kind != "id":
            return mk(p2, f2)
        if f1.kind == "set" and f1.label == c and f2.kind != "id":
            return mk(p1, f2)
        return None
    if p1.kind == "eq" and p2.kind == "true":
        if f2.kind == "id":
            return mk(p1, f1)
        return None
    # both eq
    c, d = p1.label, p2.label
    if c == d:
        # the table's duplicated rows collapse to: f1 preserves the label
        if f1.kind == "id" or (f1.kind == "set" and f1.label == c):
            return mk(p1, f2)
        return None
    if f1.kind == "set" and f1.label == d:
        return mk(p1, f1 if f2.kind == "id" else f2)
    return None


def standardise(tsa: Tsa) -> Tsa:
    """Close delta under composition of stationary eps-transition pairs.

    Only adds transitions (in deterministic discovery order), so the
    language is unchanged; idempotent by construction.
    """
    delta = list(tsa.delta)
    have = {t.core() for t in delta}
    changed = True
    while changed:
        changed = False
        for t1 in list(delta):
            if not t1.is_stationary_eps():
                continue
            for t2 in list(delta):
                if not t2.is_stationary_eps() or t1.dst != t2.src:
                    continue
                t3 = _compose_stationary(t1, t2)
                if t3 is not None and t3.core() not in have:
                    delta.append(t3)
                    have.add(t3.core())
                    changed = True
    return replace(tsa, delta=tuple(delta))


def is_standardised(tsa: Tsa) -> bool:
    have = {t.core() for t in tsa.delta}
    for t1 in tsa.delta:
        if not t1.is_stationary_eps():
            continue
        for t2 in tsa.delta:
            if not t2.is_stationary_eps() or t1.dst != t2.src:
                continue
            t3 = _compose_stationary(t1, t2)
            if t3 is not None and t3.core() not in have:
                return False
    return True


def is_proper(trace: RunTrace) -> bool:
    """No two consecutive steps may both be stationary eps-transitions."""
    prev = False
    for tidx, _ in trace.steps:
        stat = trace.tsa.delta[tidx].is_stationary_eps()
        if stat and prev:
            return False
        prev = stat
    return True


def make_root_accepting(tsa: Tsa) -> Tsa:
    """Append drain states so acceptance requires the pointer at the root.

    For each final f: f -eps-> f_dn, f_dn -eps,down-> f_dn,
    f_dn -eps,eq(@)-> f_ok; the new finals are the f_ok states.  Only
    down/id transitions are added, so visit-from-below counts are unchanged
    and the root-mode language equals the old any-mode language.
    """
    states = list(tsa.states)
    taken = set(states)

    def fresh(base):
        name = base
        while name in taken:
            name += "'"
        taken.add(name)
        states.append(name)
        return name

    delta = list(tsa.delta)
    new_finals = []
    for f in sorted(tsa.finals):
        dn = fresh(f + "_dn")
        ok = fresh(f + "_ok")
        delta.append(Transition(f, None, PRED_TRUE, instr_id(), dn))
        delta.append(Transition(dn, None, PRED_TRUE, instr_down(), dn))
        delta.append(Transition(dn, None, pred_eq(ROOT_LABEL), instr_id(), ok))
        new_finals.append(ok)
    return Tsa(tuple(states), tsa.labels, tsa.alphabet, tsa.initial,
               tuple(delta), frozenset(new_finals))


# ---------------------------------------------------------------------------
# file format


def _parse_instruction(tokens: list[str], labels: set[str], line: int) -> Instruction:
    kind = tokens[0]
    if kind == "id" and len(tokens) == 1:
        return instr_id()
    if kind == "down" and len(tokens) == 1:
        return instr_down()
    if kind == "up" and len(tokens) == 2:
        n = _parse_index(tokens[1], line)
        return instr_up(n)
    if kind == "push" and len(tokens) == 3:
        n = _parse_index(tokens[1], line)
        if tokens[2] not in labels:
            raise UnknownLabel(f"unknown label {tokens[2]!r}", line)
        return instr_push(n, tokens[2])
    if kind == "set" and len(tokens) == 2:
        if tokens[1] not in labels:
            raise UnknownLabel(f"unknown label {tokens[1]!r}", line)
        return instr_set(tokens[1])
    raise ParseError(f"bad instruction {' '.join(tokens)!r}", line)


def _parse_index(tok: str, line: int) -> int:
    try:
        n = int(tok)
    except ValueError:
        raise BadIndex(f"bad index {tok!r}", line) from None
    if n < 1:
        raise BadIndex(f"index must be >= 1, got {n}", line)
    return n


def parse_tsa(text: str) -> Tsa:
    """Parse the line-based TSA file format (see the README); '#' starts a
    comment, and a trailing comment on a trans line names the transition."""
    states: list[str] = []
    labels: list[str] = []
    alphabet: list[str] = []
    initial = None
    finals: list[str] = []
    raw_trans: list[tuple[int, list[str], str | None]] = []
    saw_header = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        comment = None
        if "#" in raw:
            raw, comment = raw.split("#", 1)
            comment = comment.strip() or None
        line = raw.strip()
        if not line:
            continue
        if not saw_header:
            if line != "tsa":
                raise ParseError("expected 'tsa' header", lineno)
            saw_header = True
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: ...', got {line!r}", lineno)
        key, rest = line.split(":", 1)
        key = key.strip()
        toks = rest.split()
        if key == "states":
            states.extend(toks)
        elif key == "initial":
            if len(toks) != 1:
                raise ParseError("initial takes one state", lineno)
            initial = toks[0]
        elif key == "final":
            finals.extend(toks)
        elif key == "labels":
            labels.extend(toks)
        elif key == "alphabet":
            for tok in toks:
                if len(tok) != 1:
                    raise ParseError(f"alphabet letters must be single characters, got {tok!r}", lineno)
            alphabet.extend(toks)
        elif key == "trans":
            raw_trans.append((lineno, toks, comment))
        else:
            raise ParseError(f"unknown section {key!r}", lineno)

    if not saw_header:
        raise ParseError("missing 'tsa' header", 1)
    if initial is None:
        raise ParseError("missing initial state", 1)

    state_set = set(states)
    label_set = set(labels)
    delta = []
    for lineno, toks, name in raw_trans:
        if len(toks) < 4:
            raise ParseError("transition needs: src input pred instr dst", lineno)
        src, inp_tok = toks[0], toks[1]
        dst = toks[-1]
        if src not in state_set:
            raise UnknownState(f"unknown state {src!r}", lineno)
        if dst not in state_set:
            raise UnknownState(f"unknown state {dst!r}", lineno)
        inp = None if inp_tok == "eps" else inp_tok
        if inp is not None and inp not in alphabet:
            raise ParseError(f"input letter {inp!r} not in alphabet", lineno)
        mid = toks[2:-1]
        if mid[0] == "true":
            pred = PRED_TRUE
            instr_toks = mid[1:]
        elif mid[0] == "eq" and len(mid) >= 2:
            lab = mid[1]
            if lab != ROOT_LABEL and lab not in label_set:
                raise UnknownLabel(f"unknown label {lab!r}", lineno)
            pred = pred_eq(lab)
            instr_toks = mid[2:]
        else:
            raise ParseError(f"bad predicate {mid[0]!r}", lineno)
        if not instr_toks:
            raise ParseError("missing instruction", lineno)
        instr = _parse_instruction(instr_toks, label_set, lineno)
        delta.append(Transition(src, inp, pred, instr, dst, name=name))

    return Tsa(tuple(states), tuple(labels), tuple(alphabet), initial,
               tuple(delta), frozenset(finals))


def render_tsa(tsa: Tsa) -> str:
    """Serialise a Tsa in the file format; parse_tsa(render_tsa(a)) == a."""
    lines = ["tsa"]
    lines.append("states: " + " ".join(tsa.states))
    lines.append("initial: " + tsa.initial)
    lines.append("final: " + " ".join(sorted(tsa.finals)))
    lines.append("labels: " + " ".join(tsa.labels))
    lines.append("alphabet: " + " ".join(tsa.alphabet))
    for t in tsa.delta:
        inp = t.inp if t.inp is not None else "eps"
        line = f"trans: {t.src} {inp} {t.pred} {t.instr} {t.dst}"
        if t.name:
            line += f"  # {t.name}"
        lines.append(line)
    return "\n".join(lines) + "\n"
