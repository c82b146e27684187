"""Run analysis for tree stack automata: up-down vectors, vertex
factorisations, history arrays, empirical up-sets, the single-swap
splice, pumpability extraction, per-vertex letter-count bounds, the
substitution-bound formulas, switchability checking, weak-pumping
verification and the root-edge (level-1) variants.

All operations work on proper accepting runs whose pointer ends at the
root; that is the setting in which the definitions make sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .treestack import ROOT, Address, format_address
from .tsa import (
    RunTrace,
    SearchOptions,
    accepts,
    degree,
    is_proper,
    replay,
    visited_from_below_counts,
)


class AnalysisError(Exception):
    pass


class TraceNotProper(AnalysisError):
    pass


class TraceNotAtRoot(AnalysisError):
    pass


class VertexNotInFinalTree(AnalysisError):
    pass


class HistoryMismatch(AnalysisError):
    pass


class EmptyLevel1(AnalysisError):
    pass


class ArityMismatch(AnalysisError):
    pass


class ZeroPumpVolume(AnalysisError):
    pass


class StrongConditionViolated(AnalysisError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"stationary factor too long at {format_address(vertex)}")


def _check_trace(trace: RunTrace):
    if not is_proper(trace):
        raise TraceNotProper("analysis needs a proper run")
    if trace.final().ts.pointer != ROOT:
        raise TraceNotAtRoot("analysis needs the run to finish at the root")


def _pointers(trace: RunTrace) -> list[Address]:
    """rho_0 .. rho_r."""
    return [c.ts.pointer for c in trace.configurations()]


def _positions(trace: RunTrace) -> list[int]:
    """Input positions after 0 .. r steps."""
    return [c.pos for c in trace.configurations()]


@dataclass(frozen=True)
class UpDownVector:
    """Alternating 1-based indices (l_1, m_1, ..., l_s, m_s): step l_j moves
    the pointer up across the parent edge, step m_j + 1 moves it back down."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def s(self) -> int:
        return len(self.pairs)

    def flat(self) -> tuple[int, ...]:
        return tuple(x for pair in self.pairs for x in pair)


def up_down_vector(trace: RunTrace, nu: Address) -> UpDownVector:
    """Indices of the transitions crossing the edge (parent(nu), nu)."""
    _check_trace(trace)
    if nu == ROOT or nu not in trace.final().ts.dom:
        raise VertexNotInFinalTree(format_address(nu))
    parent = nu[:-1]
    rho = _pointers(trace)
    ups = [j for j in range(1, len(rho)) if rho[j - 1] == parent and rho[j] == nu]
    downs = [j for j in range(1, len(rho)) if rho[j - 1] == nu and rho[j] == parent]
    if len(ups) != len(downs):
        raise TraceNotAtRoot("unbalanced edge crossings; run did not return")
    pairs = []
    for l, m_next in zip(ups, downs):
        m = m_next - 1
        if not l <= m:
            raise AnalysisError("crossing order violated")
        pairs.append((l, m))
    for (l1, m1), (l2, _) in zip(pairs, pairs[1:]):
        if not m1 < l2:
            raise AnalysisError("crossing order violated")
    if pairs and pairs[-1][1] >= len(trace.steps):
        raise AnalysisError("last down must not be the final step")
    return UpDownVector(tuple(pairs))


@dataclass(frozen=True)
class NuFactorisation:
    """w = w0 u1 w1 ... us ws; the u parts are read with the pointer at or
    above the vertex, the w parts at or below its parent."""

    w0: str
    parts: tuple[tuple[str, str], ...]  # (u_j, w_j) for j = 1..s

    @property
    def s(self) -> int:
        return len(self.parts)

    def word(self) -> str:
        return self.w0 + "".join(u + w for u, w in self.parts)

    def u_tuple(self) -> tuple[str, ...]:
        return tuple(u for u, _ in self.parts)

    def substitute(self, us: Sequence[str]) -> str:
        if len(us) != self.s:
            raise ArityMismatch(f"expected {self.s} factors, got {len(us)}")
        return self.w0 + "".join(u + w for u, (_, w) in zip(us, self.parts))


def _factorise(trace: RunTrace, pairs: Sequence[tuple[int, int]]) -> NuFactorisation:
    pos = _positions(trace)
    w = trace.word
    s = len(pairs)
    w0 = w[: pos[pairs[0][0]]]
    parts = []
    for j, (l, m) in enumerate(pairs):
        u = w[pos[l]: pos[m]]
        nxt = pos[pairs[j + 1][0]] if j + 1 < s else len(w)
        wj = w[pos[m]: nxt]
        parts.append((u, wj))
    return NuFactorisation(w0, tuple(parts))


def nu_factorisation(trace: RunTrace, nu: Address) -> NuFactorisation:
    udv = up_down_vector(trace, nu)
    return _factorise(trace, udv.pairs)


@dataclass(frozen=True)
class HistoryArray:
    """2 x 2s array: labels and states of the vertex at each arrival from
    below and just before each return below."""

    labels: tuple[str, ...]
    states: tuple[str, ...]

    @property
    def s(self) -> int:
        return len(self.labels) // 2

    def columns(self):
        return list(zip(self.labels, self.states))

    def __str__(self):
        return "(" + " ".join(self.labels) + " | " + " ".join(self.states) + ")"


def _history_from_pairs(trace: RunTrace, nu: Address,
                        pairs: Sequence[tuple[int, int]]) -> HistoryArray:
    configs = trace.configurations()
    labels = []
    states = []
    for l, m in pairs:
        labels.append(configs[l].ts.label_at(nu))
        labels.append(configs[m].ts.label_at(nu))
        states.append(configs[l].state)
        states.append(configs[m].state)
    # interleave as (c1u, c1d, ..., csu, csd)
    out_labels = []
    out_states = []
    for j in range(len(pairs)):
        out_labels.extend(labels[2 * j: 2 * j + 2])
        out_states.extend(states[2 * j: 2 * j + 2])
    return HistoryArray(tuple(out_labels), tuple(out_states))


def history_array(trace: RunTrace, nu: Address) -> HistoryArray:
    udv = up_down_vector(trace, nu)
    return _history_from_pairs(trace, nu, udv.pairs)


@dataclass
class SwapReport:
    word: str
    history: HistoryArray
    accepted: bool
    search_reason: str | None  # None if accepted, else "budget"/"exhausted"
    spliced_replay_ok: bool


def single_swap(trace_w: RunTrace, nu: Address,
                trace_w2: RunTrace, nu2: Address,
                opts: SearchOptions | None = None,
                verify: bool = True) -> SwapReport:
    """Swap the u-factors of trace_w at nu for those of trace_w2 at nu2.

    Requires equal history arrays; returns the spliced word together with
    an acceptance check and an explicit spliced-run replay, both of which
    must succeed when the arrays match.
    """
    if trace_w.tsa is not trace_w2.tsa and trace_w.tsa != trace_w2.tsa:
        raise AnalysisError("runs must come from the same automaton")
    h1 = history_array(trace_w, nu)
    h2 = history_array(trace_w2, nu2)
    if h1 != h2:
        raise HistoryMismatch(f"{h1} != {h2}")
    f1 = nu_factorisation(trace_w, nu)
    f2 = nu_factorisation(trace_w2, nu2)
    word = f1.substitute(f2.u_tuple())

    # explicit splice: follow R up to each arrival, then R' strictly above
    v1 = up_down_vector(trace_w, nu).pairs
    v2 = up_down_vector(trace_w2, nu2).pairs
    idx1 = trace_w.transition_indices()
    idx2 = trace_w2.transition_indices()
    spliced: list[int] = []
    prev = 0
    for (l, m), (l2, m2) in zip(v1, v2):
        spliced.extend(idx1[prev:l])        # ... up to and including the arrival
        spliced.extend(idx2[l2:m2])         # the other run's stretch above
        prev = m
    spliced.extend(idx1[prev:])
    try:
        final = replay(trace_w.tsa, word, spliced).final()
        replay_ok = (final.pos == len(word)
                     and final.state in trace_w.tsa.finals
                     and final.ts.pointer == ROOT)
    except Exception:
        replay_ok = False

    accepted = True
    reason = None
    if verify:
        opts = opts or SearchOptions()
        res = accepts(trace_w.tsa, word, opts)
        accepted = bool(res)
        reason = None if res else res.reason
    return SwapReport(word, h1, accepted, reason, replay_ok)


@dataclass(frozen=True)
class MarkedWord:
    """A word with a set of distinguished positions (0-based internally,
    shown 1-based in reports)."""

    word: str
    marks: frozenset[int]

    def __post_init__(self):
        if not all(0 <= i < len(self.word) for i in self.marks):
            raise ValueError("marks must index into the word")

    @property
    def marked_count(self) -> int:
        return len(self.marks)

    def render_marks(self) -> str:
        return " ".join(str(i + 1) for i in sorted(self.marks))


def mark_all(word: str) -> MarkedWord:
    return MarkedWord(word, frozenset(range(len(word))))


@dataclass
class EmpiricalUpSet:
    """Observed map history array -> set of u-tuples, with provenance.

    The true up-sets quantify over the whole language; this records only
    what the supplied sample exhibited, so per-array maxima are estimates
    a caller may feed into substitution_bound as M_est, never exact."""

    entries: dict[HistoryArray, set[tuple[str, ...]]] = field(default_factory=dict)
    provenance: dict[tuple[HistoryArray, tuple[str, ...]], list[tuple[str, Address]]] = field(default_factory=dict)
    traces: dict[str, RunTrace] = field(default_factory=dict)
    budget_failures: list[str] = field(default_factory=list)

    def insert(self, h: HistoryArray, us: tuple[str, ...], word: str, nu: Address):
        self.entries.setdefault(h, set()).add(us)
        self.provenance.setdefault((h, us), []).append((word, nu))

    def max_total_lengths(self) -> dict[HistoryArray, int]:
        return {
            h: max(sum(len(u) for u in t) for t in ts)
            for h, ts in self.entries.items()
        }


def collect_upsets(tsa, words: Iterable[str], opts: SearchOptions | None = None) -> EmpiricalUpSet:
    """Run every word, then file each non-root vertex's u-tuple under its
    history array.  Witness runs are proper (the definitions require it)."""
    base = opts or SearchOptions()
    opts = SearchOptions(k=base.k, accept_mode="root", max_steps=base.max_steps,
                         max_vertices=base.max_vertices, proper_only=True)
    out = EmpiricalUpSet()
    for w in words:
        res = accepts(tsa, w, opts)
        if not res:
            out.budget_failures.append(w)
            continue
        out.traces[w] = res
        tree = res.final().ts
        for nu in sorted(tree.dom):
            if nu == ROOT:
                continue
            h = history_array(res, nu)
            us = nu_factorisation(res, nu).u_tuple()
            out.insert(h, us, w, nu)
    return out


@dataclass
class PumpResult:
    x: str
    y: str
    z: str
    vertex: Address
    verified: dict[int, bool]  # exponent -> accepted within budgets

    def word(self, n: int) -> str:
        return self.x + self.y * n + self.z


def _stationary_segments(trace: RunTrace):
    """Maximal runs of consecutive steps whose instruction keeps the
    pointer in place, as (first step, last step, vertex)."""
    segs = []
    start = None
    rho = _pointers(trace)
    for j, (tidx, _) in enumerate(trace.steps, start=1):
        stat = trace.tsa.delta[tidx].instr.kind in ("id", "set")
        if stat and start is None:
            start = j
        elif not stat and start is not None:
            segs.append((start, j - 1, rho[start - 1]))
            start = None
    if start is not None:
        segs.append((start, len(trace.steps), rho[start - 1]))
    return segs


def find_pumpable(trace: RunTrace, m: int,
                  opts: SearchOptions | None = None,
                  verify_exponents: Sequence[int] = (0, 2, 3)) -> PumpResult | None:
    """Extract a pumpable factor from a long stationary stretch.

    If the pointer rests at one vertex for more than m*|C|*|Q| consecutive
    transitions, a (label, state) pair repeats m+1 times inside the first
    m*|C|*|Q|+1 of them; the input read between the first and last repeat
    is the pump.  Returns None when no stretch is long enough.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_trace(trace)
    tsa = trace.tsa
    threshold = m * len(tsa.labels) * len(tsa.states)
    configs = trace.configurations()
    pos = _positions(trace)
    for a, b, nu in _stationary_segments(trace):
        if b - a + 1 <= threshold:
            continue
        window = range(a, a + threshold + 1)
        seen: dict[tuple[str, str], list[int]] = {}
        hit = None
        for j in window:
            pair = (configs[j].ts.label_at(nu), configs[j].state)
            seen.setdefault(pair, []).append(j)
            if len(seen[pair]) == m + 1:
                hit = seen[pair]
                break
        if hit is None:
            continue  # non-root vertices cannot reach here by pigeonhole
        j1, jm = hit[0], hit[-1]
        x = trace.word[: pos[j1]]
        y = trace.word[pos[j1]: pos[jm]]
        z = trace.word[pos[jm]:]
        verified = {}
        opts = opts or SearchOptions(accept_mode="any")
        for n in verify_exponents:
            w = x + y * n + z
            local = SearchOptions(k=opts.k, accept_mode=opts.accept_mode,
                                  proper_only=opts.proper_only)
            verified[n] = bool(accepts(tsa, w, local))
        return PumpResult(x, y, z, nu, verified)
    return None


@dataclass
class VertexBound:
    vertex: Address
    kind: str  # "root" | "leaf" | "interior"
    letters: int
    bound: int
    ok: bool


@dataclass
class AtvBoundsReport:
    k: int
    mu: int
    vertices: list[VertexBound]
    all_ok: bool
    lambda_singular: list[Address] | None = None


def _letters_at_vertices(trace: RunTrace) -> dict[Address, int]:
    """Letters read by stationary transitions, attributed to the vertex
    the pointer rested at."""
    counts: dict[Address, int] = {}
    rho = _pointers(trace)
    for j, (tidx, _) in enumerate(trace.steps, start=1):
        t = trace.tsa.delta[tidx]
        if t.inp is not None and t.instr.kind in ("id", "set"):
            counts[rho[j - 1]] = counts.get(rho[j - 1], 0) + 1
    return counts


def check_atv_bounds(trace: RunTrace, mu: int,
                     marks: "set[int] | MarkedWord | None" = None,
                     lam: int | None = None) -> AtvBoundsReport:
    """Per-vertex letter-count bounds for runs satisfying the strong
    condition (no stationary factor reads more than mu*|C|*|Q| letters).

    Interior vertices are bounded by mu*k*|C|*|Q|*(D+1), the root by
    mu*k*D*|Q|, leaves by mu*k*|C|*|Q|, where k is the maximum
    visit-from-below count of this run.  With `marks` and `lam` given, the
    report also lists the lambda-singular vertices (those outside whose
    subtree fewer than lam marked letters are read).
    """
    _check_trace(trace)
    tsa = trace.tsa
    D = degree(tsa).value
    if D == 0:
        raise ValueError("bounds assume positive degree (at least one push)")
    C, Q = len(tsa.labels), len(tsa.states)
    pos = _positions(trace)

    # strong condition first
    seg_threshold = mu * C * Q
    for a, b, nu in _stationary_segments(trace):
        letters = pos[b] - pos[a - 1]
        if letters > seg_threshold:
            raise StrongConditionViolated(nu)

    counts = visited_from_below_counts(trace)
    k = max(counts.values(), default=0)
    tree = trace.final().ts
    children: dict[Address, int] = {a: 0 for a in tree.dom}
    for a in tree.dom:
        if a != ROOT:
            children[a[:-1]] += 1
    letters_at = _letters_at_vertices(trace)

    rows = []
    for nu in sorted(tree.dom):
        if nu == ROOT:
            kind, bound = "root", mu * k * D * Q
        elif children[nu] == 0:
            kind, bound = "leaf", mu * k * C * Q
        else:
            kind, bound = "interior", mu * k * C * Q * (D + 1)
        n = letters_at.get(nu, 0)
        rows.append(VertexBound(nu, kind, n, bound, n <= bound))

    singular = None
    if marks is not None and lam is not None:
        if isinstance(marks, MarkedWord):
            marks = set(marks.marks)
        rho = _pointers(trace)
        singular = []
        for nu in sorted(tree.dom):
            if nu == ROOT:
                outside = 0  # every letter is read inside T_root
            else:
                depth = len(nu)
                outside = 0
                for j, (tidx, _) in enumerate(trace.steps, start=1):
                    t = trace.tsa.delta[tidx]
                    if t.inp is None:
                        continue
                    if pos[j] - 1 not in marks:
                        continue
                    inside = rho[j - 1][:depth] == nu and rho[j][:depth] == nu
                    if not inside:
                        outside += 1
            if outside < lam:
                singular.append(nu)

    return AtvBoundsReport(k, mu, rows, all(r.ok for r in rows), singular)


def substitution_bound(mu: int, lam: int, k: int, C_size: int, Q_size: int,
                       D: int, M_est: int) -> tuple[int, int]:
    """(N_lambda, N_mu) = ((D+1)(mu k |C| |Q| + lam) + D M, same with lam=mu).

    M_est is the caller's estimate of the largest finite up-set weight;
    it is never computed here (finiteness is not observable from samples).
    """
    if min(mu, lam, k, C_size, Q_size, D, M_est) < 0:
        raise ValueError("arguments must be non-negative")
    n_lambda = (D + 1) * (mu * k * C_size * Q_size + lam) + D * M_est
    n_mu = (D + 1) * (mu * k * C_size * Q_size + mu) + D * M_est
    return n_lambda, n_mu


@dataclass
class SwitchReport:
    results: list[tuple[tuple[str, ...], str, bool]]  # (tuple, word, in language)

    @property
    def all_ok(self) -> bool:
        return all(ok for _, _, ok in self.results)

    @property
    def failures(self):
        return [(t, w) for t, w, ok in self.results if not ok]


def check_U_switchable(oracle: Callable[[str], bool],
                       factorisation: NuFactorisation,
                       U_sample: Iterable[tuple[str, ...]]) -> SwitchReport:
    """Substitute every tuple of U_sample into the factorisation's u-slots
    and test the results against the oracle; failures are recorded, not
    raised."""
    results = []
    for tup in U_sample:
        if len(tup) != factorisation.s:
            raise ArityMismatch(f"tuple arity {len(tup)} != {factorisation.s}")
        w = factorisation.substitute(tup)
        results.append((tuple(tup), w, bool(oracle(w))))
    return SwitchReport(results)


@dataclass
class WeakPumpReport:
    results: list[tuple[int, str, bool]]  # (i, word, in language)

    @property
    def all_ok(self) -> bool:
        return all(ok for _, _, ok in self.results)

    def first_failure(self) -> int | None:
        for i, _, ok in self.results:
            if not ok:
                return i
        return None


def weak_pump_verify(oracle: Callable[[str], bool],
                     u: Sequence[str], v: Sequence[str], w: Sequence[str],
                     s: Sequence[str], i_max: int) -> WeakPumpReport:
    """Check u1 v1^i w1 s1^i u2 ... uk vk^i wk sk^i u_{k+1} against the
    oracle for i in [0, i_max]; the pumped volume must be positive."""
    k = len(v)
    if not (len(w) == len(s) == k and len(u) == k + 1):
        raise ArityMismatch("need k+1 u parts and k each of v, w, s")
    if sum(len(v[j]) + len(s[j]) for j in range(k)) == 0:
        raise ZeroPumpVolume("nothing to pump")
    results = []
    for i in range(i_max + 1):
        word = "".join(u[j] + v[j] * i + w[j] + s[j] * i for j in range(k)) + u[k]
        results.append((i, word, bool(oracle(word))))
    return WeakPumpReport(results)


@dataclass(frozen=True)
class Level1Arrays:
    """Root-edge variant of the vertex analysis: the 3 x s up-down array
    (rows l, m and root child), the induced factorisation, and the 3 x 2s
    history array carrying the child index under each column pair."""

    ls: tuple[int, ...]
    ms: tuple[int, ...]
    ns: tuple[int, ...]
    factorisation: NuFactorisation
    history_labels: tuple[str, ...]
    history_states: tuple[str, ...]
    history_children: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.ls)

    def restricted_to_child(self, n: int) -> tuple[tuple[int, int], ...]:
        """Columns whose third row is n, as (l, m) pairs; equals the
        up-down vector of the run at the root child n."""
        return tuple((l, m) for l, m, c in zip(self.ls, self.ms, self.ns) if c == n)


def level1_arrays(trace: RunTrace) -> Level1Arrays:
    _check_trace(trace)
    rho = _pointers(trace)
    ls = []
    ms = []
    ns = []
    j = 1
    r = len(trace.steps)
    while j <= r:
        if rho[j - 1] == ROOT and rho[j] != ROOT:
            l = j
            child = rho[j][0]
            y = j
            while y < r and rho[y + 1] != ROOT:
                y += 1
            # rho[y+1] == ROOT (runs end at the root, so every excursion returns)
            ls.append(l)
            ms.append(y)
            ns.append(child)
            j = y + 2
        else:
            j += 1
    if not ls:
        raise EmptyLevel1("the run never leaves the root")
    pairs = list(zip(ls, ms))
    fact = _factorise(trace, pairs)
    configs = trace.configurations()
    labels = []
    states = []
    children = []
    for l, m, n in zip(ls, ms, ns):
        labels.extend((configs[l].ts.label_at((n,)), configs[m].ts.label_at((n,))))
        states.extend((configs[l].state, configs[m].state))
        children.extend((n, n))
    return Level1Arrays(tuple(ls), tuple(ms), tuple(ns), fact,
                        tuple(labels), tuple(states), tuple(children))
