"""A free group of rank 2 inside the binary-tree automorphisms.

The squares of the two matrices [[1,0],[2,1]] and [[1,2],[0,1]] generate a
free group of rank 2 (the classical Sanov subgroup of SL(2, Z)).  Their
machines live over the 4-letter alphabet; identifying each 4-ary letter with
a 2-block of binary letters rewrites them as automorphisms `a` and `d` of the
binary rooted tree, nine states each.

This module builds `a` and `d`, evaluates reduced words in them, sweeps all
reduced words up to a length bound for relations, and cross-checks the
block-code conjugacy between the coarse and fine machines on all vertices up
to a depth bound.  It also carries a hand-made transcription of the two
published 9-state Moore diagrams for `a` and `d`; `figure_diff()` compares
the transcription against the construction edge by edge, because the drawn
diagrams are not to be trusted blindly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import AlphabetMismatch, NotReduced, ParseError
from .glnz import generator_automorphism
from .mealy import (
    RefinementMap,
    TreeAutomorphism,
    _composition_is_identity,
    _refine_table,
    identity_automorphism,
)

# coarse letter -> binary 2-block; letter 1 = (0,0), 2 = (1,1), 3 = (1,0), 4 = (0,1)
_BLOCK_TABLE = ((0, 0), (1, 1), (1, 0), (0, 1))


def block_code():
    """The vertex bijection between the 4-ary and binary trees used to
    rewrite the coarse machines over the binary alphabet."""
    return RefinementMap(2, _BLOCK_TABLE)


@lru_cache(maxsize=None)
def _coarse():
    """Generators and their pairwise products over the 4-letter alphabet.
    s1 and s2 are the swap-conjugates of t1 and t2."""
    t1 = generator_automorphism("t1", 2)
    t2 = generator_automorphism("t2", 2)
    s12 = generator_automorphism("s", 2, 1, 2)
    s1 = s12.compose(t1).compose(s12).minimize()
    s2 = s12.compose(t2).compose(s12).minimize()

    def prod(g, h):
        return g.compose(h).minimize()

    return {
        "t1": t1,
        "t2": t2,
        "s1": s1,
        "s2": s2,
        "t1t1": prod(t1, t1),
        "t1t2": prod(t1, t2),
        "t2t1": prod(t2, t1),
        "t2t2": prod(t2, t2),
        "s1s1": prod(s1, s1),
        "s1s2": prod(s1, s2),
        "s2s1": prod(s2, s1),
        "s2s2": prod(s2, s2),
    }


def coarse_machines():
    """Read-only access to the coarse generators and products (keys "t1",
    "t2", "s1", "s2" and the six products "t1t1", ..., "s2s2")."""
    return dict(_coarse())


def sanov_generators():
    """The squared machines (t1^2, s1^2) over the 4-letter alphabet."""
    c = _coarse()
    return c["t1t1"], c["s1s1"]


@lru_cache(maxsize=None)
def _binary():
    code = block_code()
    c = _coarse()
    return c["t1t1"].refine(code), c["s1s1"].refine(code)


def binary_generators():
    """The free generators a, d over the binary alphabet, as the nine-state
    machines the refinement yields (3 coarse sections x 3 buffer positions).

    `a` is minimal as returned; `d` is not: its minimal form has 7 states,
    because in two of the coarse sections the two buffered half-letter
    states act identically (the pairs straddling the first and third
    sections each collapse).  Callers wanting canonical forms should
    minimize()."""
    return _binary()


# ----------------------------------------------------------------------
# conjugacy between the coarse and refined machines

_CONJUGACY_KEYS = ("t1t1", "t1t2", "t2t2", "s1s1", "s1s2", "s2s2")


@lru_cache(maxsize=None)
def _conjugate_pairs():
    code = block_code()
    c = _coarse()
    return tuple((c[key], c[key].refine(code).minimize()) for key in _CONJUGACY_KEYS)


def depth_conjugacy_check(depth, code=None):
    """Verify encode(v^g) == encode(v)^g-hat for every coarse vertex v up to
    `depth` and every machine pair (g over 4 letters, g-hat its binary
    refinement).  `code` is the encoding under test; the refined machines
    always come from the standard block code, so passing a perturbed code
    makes the check fail, as it should."""
    if not isinstance(depth, int) or isinstance(depth, bool) or depth < 0:
        raise ValueError(f"depth must be a nonnegative integer, got {depth!r}")
    enc = block_code() if code is None else code
    pairs = _conjugate_pairs()
    for length in range(depth + 1):
        for v in itertools.product(range(4), repeat=length):
            encoded = enc.encode(v)
            for coarse, fine in pairs:
                if enc.encode(coarse.act(v)) != fine.act(encoded):
                    return False
    return True


# ----------------------------------------------------------------------
# reduced words and the freeness sweep

_SYMBOLS = {"a": ("a", 1), "A": ("a", -1), "d": ("d", 1), "D": ("d", -1)}
_LETTER_ORDER = (("a", 1), ("a", -1), ("d", 1), ("d", -1))
_RANK = {syl: pos for pos, syl in enumerate(_LETTER_ORDER)}


class GroupWord:
    """Reduced word over two abstract generators, written "a"/"d" with
    capitals for inverses (so "adAD" is a d a^-1 d^-1)."""

    __slots__ = ("syllables",)

    def __init__(self, syllables):
        syls = tuple(syllables)
        for syl in syls:
            if syl not in _LETTER_ORDER:
                raise ValueError(f"bad syllable {syl!r}: expected (symbol, +-1)")
        for left, right in zip(syls, syls[1:]):
            if left[0] == right[0] and left[1] == -right[1]:
                raise NotReduced(f"cancelling pair at {left} {right}")
        self.syllables = syls

    @classmethod
    def parse(cls, text):
        try:
            return cls(_SYMBOLS[ch] for ch in text)
        except KeyError as exc:
            raise ParseError(f"bad word character {exc.args[0]!r}: use a, A, d, D") from exc

    def __str__(self):
        return "".join(
            sym if exp == 1 else sym.upper() for sym, exp in self.syllables
        )

    def __len__(self):
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    def __eq__(self, other):
        if not isinstance(other, GroupWord):
            return NotImplemented
        return self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __repr__(self):
        return f"GroupWord.parse({str(self)!r})"


def evaluate_group_word(word, gen_a, gen_d):
    """Machine of a reduced word in the generators, minimized."""
    if not isinstance(word, GroupWord):
        word = GroupWord(word)
    if gen_a.n != gen_d.n:
        raise AlphabetMismatch(f"alphabets differ: {gen_a.n} vs {gen_d.n}")
    machines = {
        ("a", 1): gen_a,
        ("a", -1): gen_a.inverse(),
        ("d", 1): gen_d,
        ("d", -1): gen_d.inverse(),
    }
    acc = identity_automorphism(gen_a.n)
    for syl in word:
        acc = acc.compose(machines[syl]).minimize()
    return acc


@dataclass(frozen=True)
class FreenessReport:
    """Outcome of a bounded relation sweep.  `counterexample` is None when no
    nonempty reduced word up to the bound evaluates to the identity,
    otherwise the (length, lexicographically) first such word."""

    max_length: int
    words_checked: int
    counterexample: GroupWord | None

    def to_json(self):
        return {
            "max_length": self.max_length,
            "words_checked": self.words_checked,
            "counterexample": None if self.counterexample is None else str(self.counterexample),
        }


def freeness_check(max_length, gen_a=None, gen_d=None):
    """Evaluate every nonempty reduced word of length <= max_length over the
    given generators (default: the binary pair a, d) and report the first
    identity word found, if any.

    Depth-first over the prefix tree in letter order a < A < d < D; interior
    prefixes keep a minimized machine, full-length words use a fused
    product-triviality test so the deepest (and widest) level never
    materializes a product machine."""
    if not isinstance(max_length, int) or isinstance(max_length, bool) or max_length < 1:
        raise ValueError(f"max_length must be a positive integer, got {max_length!r}")
    if gen_a is None and gen_d is None:
        gen_a, gen_d = binary_generators()
    elif gen_a is None or gen_d is None:
        raise ValueError("pass both generators or neither")
    if gen_a.n != gen_d.n:
        raise AlphabetMismatch(f"alphabets differ: {gen_a.n} vs {gen_d.n}")
    machines = {
        ("a", 1): gen_a.minimize(),
        ("a", -1): gen_a.inverse().minimize(),
        ("d", 1): gen_d.minimize(),
        ("d", -1): gen_d.inverse().minimize(),
    }
    hits = []
    checked = 0

    def walk(prefix_machine, word, length):
        nonlocal checked
        for syl in _LETTER_ORDER:
            last = word[-1] if word else None
            if last is not None and last[0] == syl[0] and last[1] == -syl[1]:
                continue
            extended = word + (syl,)
            checked += 1
            if length + 1 == max_length:
                if _composition_is_identity(prefix_machine, machines[syl]):
                    hits.append(extended)
            else:
                nxt = prefix_machine.compose(machines[syl]).minimize()
                if nxt.is_identity():
                    hits.append(extended)
                walk(nxt, extended, length + 1)

    walk(identity_automorphism(gen_a.n), (), 0)
    counterexample = None
    if hits:
        best = min(hits, key=lambda w: (len(w), tuple(_RANK[s] for s in w)))
        counterexample = GroupWord(best)
    return FreenessReport(max_length, checked, counterexample)


# ----------------------------------------------------------------------
# reference diagrams

# Hand-made transcription of the published 9-state Moore diagrams for a and
# d, edge format (source, input, output, target).  State rows: a/b/c are the
# automorphism's sections at block boundaries (a itself, then the two others
# in breadth-first order), suffix 0/1 the buffered first binary letter.
# Kept verbatim, including any drawing mistakes; see figure_diff().
FIGURE_A_EDGES = (
    ("a", 0, 0, "a0"), ("a0", 0, 0, "a"), ("a", 1, 1, "a1"), ("a1", 1, 1, "a"),
    ("a0", 1, 1, "b"), ("a1", 0, 0, "b"),
    ("b", 0, 1, "b0"), ("b0", 0, 1, "b"), ("b", 1, 0, "b1"), ("b1", 0, 1, "b"),
    ("b0", 1, 0, "c"), ("b1", 1, 0, "a"),
    ("c", 0, 0, "c0"), ("c0", 1, 1, "c"), ("c", 1, 1, "c1"), ("c1", 0, 0, "c"),
    ("c0", 1, 0, "b"), ("c1", 1, 1, "b"),
)
FIGURE_D_EDGES = (
    ("d", 0, 0, "d0"), ("d0", 0, 0, "d"), ("d", 1, 1, "d1"), ("d1", 0, 0, "d"),
    ("d0", 1, 1, "b"), ("d1", 1, 1, "e"),
    ("e", 0, 1, "e0"), ("e0", 0, 0, "e"), ("e", 1, 0, "e1"), ("e1", 1, 1, "e"),
    ("e0", 1, 1, "f"), ("e1", 0, 0, "d"),
    ("f", 0, 0, "f0"), ("f0", 1, 1, "f"), ("f", 1, 1, "f1"), ("f1", 1, 1, "f"),
    ("f0", 0, 0, "e"), ("f1", 0, 0, "b"),
)

_FIGURE_ROWS = {"a": ("a", "b", "c"), "d": ("d", "e", "f")}


def constructed_edges(which):
    """Edge list of the freshly constructed binary machine for generator
    "a" or "d", named with the same state labels the reference diagrams use
    (row letter by coarse section, suffix by buffered binary letter)."""
    if which not in _FIGURE_ROWS:
        raise ValueError(f"expected 'a' or 'd', got {which!r}")
    coarse = _coarse()["t1t1" if which == "a" else "s1s1"]
    outs, trans, names = _refine_table(coarse, block_code())
    rows = _FIGURE_ROWS[which]
    labels = [
        rows[cid] + "".join(str(b) for b in prefix) for cid, prefix in names
    ]
    edges = []
    for s, (orow, trow) in enumerate(zip(outs, trans)):
        for x in (0, 1):
            edges.append((labels[s], x, orow[x], labels[trow[x]]))
    return tuple(sorted(edges))


def figure_diff():
    """Symmetric difference between the constructed machines and the
    transcribed reference diagrams, per generator: edges only the
    construction has, and edges only the drawing has."""
    diff = {}
    for which, figure in (("a", FIGURE_A_EDGES), ("d", FIGURE_D_EDGES)):
        built = set(constructed_edges(which))
        drawn = set(figure)
        diff[which] = {
            "constructed_only": sorted(built - drawn),
            "figure_only": sorted(drawn - built),
        }
    return diff
