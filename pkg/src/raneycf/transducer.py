"""Raney transducers T_n: states DB_n, edges from the factorization MV = WN.

Transduction is implemented online: absorb input letters on the right,
peel output letters off the left whenever the remainder stays balanced.
Long runs are handled in O(#states) time by jumping over repeated loop
states, so partial quotients in the thousands cost nothing.  The explicit
edge table (build_transducer) exists for display and for the exhaustive
lemma checks; the two implementations cross-validate in the test suite.
"""
from __future__ import annotations

import csv
import io
import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .matrices import (
    J_MAT,
    Mat2,
    content_gcd,
    det,
    enumerate_DB,
    in_DB,
    is_LE,
    is_RE,
    nu_L,
    nu_R,
)
from .surds import PeriodicCF, per
from .words import (
    L,
    LRWord,
    R,
    format_word,
    primitive_root,
    rotate,
    star,
)

# ---------------------------------------------------------------------------
# low-level engine on raw (a, b, c, d) tuples


def _mul(t, letter, k):
    a, b, c, d = t
    if letter == L:
        return (a + b * k, b, c + d * k, d)
    return (a, a * k + b, c, c * k + d)


def _balanced(t):
    # row balance a > c, d > b: the "still inside an edge" condition
    return t[0] > t[2] and t[3] > t[1]


def _escape(t, letter):
    """Least k >= 1 with t * letter^k unbalanced (t must be balanced)."""
    a, b, c, d = t
    if letter == L:
        return -((a - c) // -(d - b))
    return -((d - b) // -(a - c))


class _Out:
    """Run-merging output accumulator with per-letter totals."""

    __slots__ = ("runs", "totL", "totR")

    def __init__(self):
        self.runs: list[list] = []
        self.totL = 0
        self.totR = 0

    def emit(self, letter, k):
        if k <= 0:
            return
        if self.runs and self.runs[-1][0] == letter:
            self.runs[-1][1] += k
        else:
            self.runs.append([letter, k])
        if letter == L:
            self.totL += k
        else:
            self.totR += k

    def word(self) -> LRWord:
        return LRWord.from_runs((l, e) for l, e in self.runs)


def _peel(t, out):
    """Peel maximal L/R runs off the left until the remainder is balanced.

    Requires det(t) > 0 and nonnegative entries; exactly one peel applies
    at every unbalanced step, so this terminates in the balanced region.
    """
    a, b, c, d = t
    while not (a > c and d > b):
        if c >= a and d >= b:
            k = c // a if b == 0 else min(c // a, d // b)
            if out is not None:
                out.emit(L, k)
            c -= k * a
            d -= k * b
        elif a >= c and b >= d:
            k = b // d if c == 0 else min(a // c, b // d)
            if out is not None:
                out.emit(R, k)
            a -= k * c
            b -= k * d
        else:
            raise AssertionError(f"no peel applies to {(a, b, c, d)}")
    return (a, b, c, d)


def _check_db(t, n):
    a, b, c, d = t
    if not (a > c and d > b and a > b and d > c and gcd(a, b, c, d) == 1):
        raise RuntimeError(
            f"factorization left {(a, b, c, d)} balanced but not doubly "
            f"balanced for n={n}; the edge construction contract is violated"
        )


def _feed_run(n, t, letter, count, out):
    """Consume `count` copies of `letter`; t must be balanced and stays so.

    Repeated states inside a single run form a closed single-letter loop,
    whose output is a power of the same letter — detected and fast-forwarded.
    """
    seen = {}
    while count > 0:
        k0 = _escape(t, letter)
        if k0 > count:
            return _mul(t, letter, count)
        t = _peel(_mul(t, letter, k0), out)
        _check_db(t, n)
        count -= k0
        snap = seen.get(t)
        if snap is None:
            if out is None:
                seen[t] = (count, 0, 0)
            else:
                seen[t] = (count, out.totL, out.totR)
            continue
        prev_count, pl, pr = snap
        cyc = prev_count - count
        q = count // cyc
        if q:
            if out is not None:
                dl, dr = out.totL - pl, out.totR - pr
                if dl and dr:  # cannot happen: single-letter loops emit one letter
                    raise AssertionError("mixed emission on a single-letter loop")
                out.emit(L if dl else R, q * (dl or dr))
            count -= q * cyc
        seen = {}
    return t


def _feed_word(n, t, runs, out):
    for letter, e in runs:
        t = _feed_run(n, t, letter, e, out)
    return t


# ---------------------------------------------------------------------------
# transducer construction and serialization


@dataclass(frozen=True)
class TransducerEdge:
    src: Mat2
    input: LRWord
    output: LRWord
    dst: Mat2


@dataclass(frozen=True)
class Transducer:
    n: int
    states: frozenset[Mat2]
    edges: tuple[TransducerEdge, ...]


def factorize_to_DB(p: Mat2, n: int) -> tuple[LRWord, Mat2]:
    """Unique factorization p = mu(w) * k with w nonempty and k in DB_n."""
    if det(p) != n or min(p.entries) < 0 or content_gcd(p) != 1:
        raise ValueError(f"{p!r} is not in D_{n}")
    if _balanced(p.entries):
        raise ValueError(f"{p!r} is row balanced; the peeled word would be empty")
    out = _Out()
    t = _peel(p.entries, out)
    _check_db(t, n)
    return out.word(), Mat2(*t)


def build_transducer(n: int) -> Transducer:
    if n < 1:
        raise ValueError("n must be >= 1")
    states = sorted(enumerate_DB(n), key=lambda m: m.entries)
    edges = []
    for m in states:
        stack = [((), m.entries)]
        while stack:
            runs, t = stack.pop()
            for letter in (L, R):
                t2 = _mul(t, letter, 1)
                if runs and runs[-1][0] == letter:
                    runs2 = runs[:-1] + ((letter, runs[-1][1] + 1),)
                else:
                    runs2 = runs + ((letter, 1),)
                if _balanced(t2):
                    stack.append((runs2, t2))
                else:
                    out = _Out()
                    t3 = _peel(t2, out)
                    _check_db(t3, n)
                    edges.append(
                        TransducerEdge(m, LRWord(runs2), out.word(), Mat2(*t3))
                    )
    edges.sort(key=lambda e: (e.src.entries, e.input.runs))
    return Transducer(n, frozenset(states), tuple(edges))


def _state_label(m: Mat2) -> str:
    return f"{m.a},{m.b},{m.c},{m.d}"


def to_dot(t: Transducer) -> str:
    lines = [f"digraph T_{t.n} {{", "  rankdir=LR;"]
    for s in sorted(t.states, key=lambda m: m.entries):
        lines.append(f'  "{_state_label(s)}";')
    for e in t.edges:
        label = f"{format_word(e.input)}|{format_word(e.output)}"
        lines.append(f'  "{_state_label(e.src)}" -> "{_state_label(e.dst)}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(t: Transducer) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["from", "input", "output", "to"])
    for e in t.edges:
        w.writerow([_state_label(e.src), format_word(e.input), format_word(e.output), _state_label(e.dst)])
    return buf.getvalue()


def to_json(t: Transducer) -> str:
    doc = {
        "n": t.n,
        "states": [list(s.entries) for s in sorted(t.states, key=lambda m: m.entries)],
        "edges": [
            {
                "from": list(e.src.entries),
                "input": format_word(e.input),
                "output": format_word(e.output),
                "to": list(e.dst.entries),
            }
            for e in t.edges
        ],
    }
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# transduction of periodic input


@dataclass(frozen=True)
class ClosedWalk:
    start: Mat2
    input: LRWord
    output: LRWord
    gamma: int


def _transducer_n(t) -> int:
    return t.n if isinstance(t, Transducer) else int(t)


def transduce_cycle(t, start: Mat2, repetend: LRWord) -> ClosedWalk:
    """Feed the repetend cyclically from `start` until a boundary state repeats."""
    n = _transducer_n(t)
    if not in_DB(start, n):
        raise ValueError(f"{start!r} is not a state of T_{n}")
    if len({l for l, _ in repetend.runs}) < 2:
        raise ValueError("repetend must contain both letters")
    boundary = {start.entries: 0}
    outputs: list[LRWord] = []
    states = [start.entries]
    cur = start.entries
    while True:
        out = _Out()
        cur = _feed_word(n, cur, repetend.runs, out)
        outputs.append(out.word())
        states.append(cur)
        idx = boundary.get(cur)
        if idx is not None:
            gamma = len(states) - 1 - idx
            output = LRWord(())
            for w in outputs[idx:]:
                output = output + w
            return ClosedWalk(Mat2(*states[idx]), repetend**gamma, output, gamma)
        boundary[cur] = len(states) - 1


def lr_cycle_to_period(cycle: LRWord) -> int:
    """Period of the number whose LR tail repeats `cycle`.

    After reducing to the primitive root: sigma/2 when some conjugate with
    distinct first/last letters splits as V1 * star(V1), else sigma.  Works
    directly on the run encoding; conjugates with distinct end letters share
    their run count (the cyclic run count, always even).
    """
    letters = {l for l, _ in cycle.runs}
    if len(letters) < 2:
        raise ValueError("cycle must contain both letters")
    root, _ = primitive_root(cycle)
    rs = root.runs
    k = len(rs)
    if k % 2 == 0:
        # end letters already differ at every run-boundary cut, and the
        # V1*star(V1) pairing {i, i+k/2} is invariant under those cuts
        half = k // 2
        if all(
            rs[i + half][1] == rs[i][1] and rs[i + half][0] != rs[i][0]
            for i in range(half)
        ):
            return half
        return k
    # odd run count: first and last letters agree, so each usable cut
    # merges the wrap-around pair into one run of k-1 runs total
    half = (k - 1) // 2
    for j in range(1, k):
        rot = rs[j:] + rs[:j]
        m = k - 1 - j
        merged = rot[:m] + ((rot[m][0], rot[m][1] + rot[m + 1][1]),) + rot[m + 2 :]
        if all(
            merged[i + half][1] == merged[i][1] and merged[i + half][0] != merged[i][0]
            for i in range(half)
        ):
            return half
    return k - 1


def lr_repetend(cf: PeriodicCF) -> LRWord:
    """LR word of one period of the tail y = [; repetend] (doubled when odd)."""
    rep = cf.repetend
    if len(rep) % 2:
        rep = rep + rep
    runs = []
    for i, q in enumerate(rep):
        runs.append((R if i % 2 == 0 else L, q))
    return LRWord.from_runs(runs)


def reduce_to_DB(m: Mat2, x: PeriodicCF, max_letters: int | None = None):
    """Absorb the preperiod of x into m, then alternately absorb repetend
    letters and emit balanced output until the state lands in some DB_n.

    Returns (state, tail, emitted_preperiod): state is in DB_n for
    n = det(state); tail is the rotation of the periodic LR input stream
    aligned with the state; emitted_preperiod is the LR output produced
    on the way (the preperiod of the image's LR representation, up to the
    part already inside m).
    """
    d0 = det(m)
    if d0 == 0:
        raise ValueError("matrix must be nonsingular")
    g = content_gcd(m)
    if g > 1:
        m = Mat2(m.a // g, m.b // g, m.c // g, m.d // g)
    for q in x.preperiod:
        m = m * Mat2(q, 1, 1, 0)
    word = lr_repetend(x)
    if det(m) < 0:
        m = m * J_MAT  # h_m(y) = h_{mJ}(1/y); inverting y swaps L and R
        word = star(word)
    g = content_gcd(m)
    if g > 1:
        m = Mat2(m.a // g, m.b // g, m.c // g, m.d // g)
    n = det(m)
    letters = []
    for letter, e in word.runs:
        letters.extend([letter] * e)
    total = len(letters)
    if max_letters is None:
        max_letters = 1000 * n * (per(x) + len(x.preperiod) + 1)
    out = _Out()
    t = m.entries
    pos = 0
    absorbed = 0
    while True:
        a, b, c, d = t
        if min(t) < 0:
            # Signed entries occur while the preperiod is being digested.
            # Absorption drives both rows to constant signs; flip a globally
            # negative matrix, and when only the top row stays negative the
            # image value is below zero — shift it by an integer (R^k on the
            # left), which never changes the repetend.
            if c <= 0 and d <= 0:
                t = (-a, -b, -c, -d)
                a, b, c, d = t
            if c > 0 and d > 0 and (a < 0 or b < 0):
                k = max(-(a // c) if a < 0 else 0, -(b // d) if b < 0 else 0)
                t = (a + k * c, b + k * d, c, d)
        if min(t) >= 0:
            while True:
                a, b, c, d = t
                if c >= a and d >= b and a >= 1:
                    k = c // a if b == 0 else min(c // a, d // b)
                    if k < 1:
                        break
                    out.emit(L, k)
                    t = (a, b, c - k * a, d - k * b)
                elif a >= c and b >= d and d >= 1:
                    k = b // d if c == 0 else min(a // c, b // d)
                    if k < 1:
                        break
                    out.emit(R, k)
                    t = (a - k * c, b - k * d, c, d)
                else:
                    break
            g = gcd(*t)
            if g > 1:
                t = (t[0] // g, t[1] // g, t[2] // g, t[3] // g)
                n = n // (g * g)
            if in_DB(Mat2(*t), n):
                break
        if absorbed >= max_letters:
            raise RuntimeError(
                f"reduction did not reach a doubly balanced state within "
                f"{max_letters} absorbed letters"
            )
        t = _mul(t, letters[pos], 1)
        pos = (pos + 1) % total
        absorbed += 1
    tail = rotate(word, pos)
    return Mat2(*t), tail, out.word()


def image_period(m: Mat2, x: PeriodicCF) -> int:
    """per(h_m(x)) computed entirely through the transducer machinery."""
    state, tail, _ = reduce_to_DB(m, x)
    n = det(state)
    walk = transduce_cycle(n, state, tail)
    return lr_cycle_to_period(walk.output)


# ---------------------------------------------------------------------------
# LE walks (the L^i R^j probes behind the bound's transducer-side sum)


def walk_LE(t, m: Mat2, i: int):
    """Simulate L^i then R's from m in LE_n; stop at the unique recurring RE
    state N with j in {3n - nu_R(N) + 1, ..., 3n}.  Returns (N, j, w)."""
    n = _transducer_n(t)
    if det(m) != n or not is_LE(m):
        raise ValueError(f"{m!r} is not in LE_{n}")
    nu = nu_L(m)
    if not nu <= i <= 2 * nu - 1:
        raise ValueError(f"i={i} outside [{nu}, {2 * nu - 1}]")
    out = _Out()
    cur = m.entries

    def step(cur, letter):
        cur = _mul(cur, letter, 1)
        if _balanced(cur):
            return cur, False
        cur = _peel(cur, out)
        _check_db(cur, n)
        return cur, True

    for _ in range(i):
        cur, _ = step(cur, L)
    completions = []  # (j, state, runs_len, last_run_count)
    for j in range(1, 3 * n + 1):
        cur, at_state = step(cur, R)
        if at_state:
            snap = (len(out.runs), out.runs[-1][1] if out.runs else 0)
            completions.append((j, Mat2(*cur), snap))
    re_states = {s for _, s, _ in completions if is_RE(s)}
    if len(re_states) != 1:
        raise RuntimeError(f"expected a unique recurring RE state, saw {re_states}")
    target = re_states.pop()
    vr = nu_R(target)
    hits = [
        (j, snap)
        for j, s, snap in completions
        if s == target and 3 * n - vr + 1 <= j <= 3 * n
    ]
    if len(hits) != 1:
        raise RuntimeError(f"expected one window hit for {target!r}, got {hits}")
    j, (nruns, last) = hits[0]
    runs = [tuple(r) for r in out.runs[: nruns - 1]]
    if nruns:
        runs.append((out.runs[nruns - 1][0], last))
    w = LRWord.from_runs(runs)
    return target, j, w


# ---------------------------------------------------------------------------
# sharpness search


class _RunCache:
    """Memoized single-letter run feeding, shared across rotations.

    For each (letter, post-escape state) the full escape chain is stored
    with cumulative consumption, per-step emissions, and its terminal
    cycle, so feeding letter^k from any balanced state costs one escape
    plus a bisect, independent of k.
    """

    __slots__ = ("chains",)

    def __init__(self):
        self.chains = {L: {}, R: {}}

    def _chain(self, letter, s):
        ch = self.chains[letter].get(s)
        if ch is not None:
            return ch
        states = [s]
        cums = [0]
        emits = [()]  # emits[i]: output runs produced stepping into states[i]
        index = {s: 0}
        cur = s
        consumed = 0
        while True:
            k0 = _escape(cur, letter)
            step_out = _Out()
            cur = _peel(_mul(cur, letter, k0), step_out)
            consumed += k0
            es = tuple((l, e) for l, e in step_out.runs)
            hit = index.get(cur)
            if hit is not None:
                cyc_i, cyc_c = hit, consumed - cums[hit]
                block = _Out()
                for runs in emits[hit + 1 :]:
                    for l, e in runs:
                        block.emit(l, e)
                for l, e in es:
                    block.emit(l, e)
                # a closed loop on one input letter emits one output letter
                if block.totL and block.totR:
                    raise AssertionError("mixed emission on a single-letter loop")
                cyc_letter = L if block.totL else R
                cyc_count = block.totL or block.totR
                ch = (states, cums, emits, cyc_i, cyc_c, cyc_letter, cyc_count)
                break
            index[cur] = len(states)
            states.append(cur)
            cums.append(consumed)
            emits.append(es)
        self.chains[letter][s] = ch
        return ch

    def feed(self, t, letter, k, out=None):
        k0 = _escape(t, letter)
        if k0 > k:
            return _mul(t, letter, k)
        t = _peel(_mul(t, letter, k0), out)
        k -= k0
        states, cums, emits, cyc_i, cyc_c, cyc_letter, cyc_count = self._chain(letter, t)
        q = 0
        if k > cums[-1]:
            q, k = divmod(k - cums[cyc_i], cyc_c)
            k += cums[cyc_i]
        i = bisect_right(cums, k) - 1
        if out is not None:
            stop = cyc_i if q else i
            for runs in emits[1 : stop + 1]:
                for l, e in runs:
                    out.emit(l, e)
            if q:
                out.emit(cyc_letter, q * cyc_count)
                for runs in emits[cyc_i + 1 : i + 1]:
                    for l, e in runs:
                        out.emit(l, e)
        rest = k - cums[i]
        return _mul(states[i], letter, rest) if rest else states[i]


def search_max_ratio(n: int, cf: PeriodicCF):
    """Max of per(output)/per(input) over all DB_n start states and all
    letter rotations of the input repetend's LR word.

    Reading a rotation repeatedly is a bi-infinite walk over the cyclic
    word, so every limit cycle is a periodic orbit of the run-by-run map
    on (next run index, state) nodes — and its output period is rotation
    invariant.  Each (state, offset) pair therefore costs one partial-run
    feed plus memoized orbit lookups.  Returns (best_ratio, witness_state,
    witness_offset).
    """
    word = lr_repetend(cf)
    runs = word.runs
    nr = len(runs)
    per_x = per(cf)
    seeds = sorted(enumerate_DB(n), key=lambda m: m.entries)
    cache = _RunCache()
    step_memo: dict = {}
    orbit_of: dict = {}  # node -> canonical node of its terminal orbit
    ratio_of: dict = {}  # canonical orbit node -> Fraction

    def step(node):
        nxt = step_memo.get(node)
        if nxt is None:
            r, t = node
            letter, e = runs[r]
            nxt = ((r + 1) % nr, cache.feed(t, letter, e))
            step_memo[node] = nxt
        return nxt

    def resolve(node):
        path = []
        index = {}
        cur = node
        while True:
            key = orbit_of.get(cur)
            if key is not None:
                break
            if cur in index:
                cycle = path[index[cur] :]
                key = min(cycle)
                if key not in ratio_of:
                    out = _Out()
                    r, t = key
                    for i in range(len(cycle)):
                        letter, e = runs[(r + i) % nr]
                        t = cache.feed(t, letter, e, out)
                    ratio_of[key] = Fraction(lr_cycle_to_period(out.word()), per_x)
                break
            index[cur] = len(path)
            path.append(cur)
            cur = step(cur)
        for p in path:
            orbit_of[p] = key
        return key

    starts = []
    pos = 0
    for letter, e in runs:
        starts.append(pos)
        pos += e
    best = None
    for off in range(len(word)):
        r = bisect_right(starts, off) - 1
        within = off - starts[r]
        letter, e = runs[r]
        for seed in seeds:
            if within:
                node = ((r + 1) % nr, cache.feed(seed.entries, letter, e - within))
            else:
                node = (r, seed.entries)
            ratio = ratio_of[resolve(node)]
            if best is None or ratio > best[0]:
                best = (ratio, seed, off)
    assert best is not None
    return best
