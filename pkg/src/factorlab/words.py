"""Truncated factorial sets of words and their extension statistics.

Words are plain Python strings over single-character letters.  A FactorSet
holds every member word of length at most ``depth``; whether it is an exact
truncation of the (usually infinite) mathematical set it samples is recorded
in the ``complete`` certificate, set only by generators that can guarantee it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class DepthExceededError(Exception):
    """An operation needed words longer than the set's truncation depth."""


class NotAMemberError(Exception):
    pass


class IncompleteSetError(Exception):
    """The operation is only sound on a certified-complete truncation."""


def factors(w: str, max_len: int | None = None) -> set[str]:
    """All factors of w (including the empty word) of length <= max_len."""
    n = len(w)
    top = n if max_len is None else min(n, max_len)
    out = {""}
    for length in range(1, top + 1):
        for i in range(n - length + 1):
            out.add(w[i : i + length])
    return out


@dataclass(frozen=True)
class FactorSet:
    """A factorial language truncated at ``depth``.

    ``complete`` certifies that ``words`` equals S ∩ A^{<=depth} for the
    mathematical set S being truncated.  ``source`` is a free-form
    provenance label (morphic / iet / explicit / derived / decoded).
    """

    alphabet: str
    depth: int
    words: frozenset[str]
    complete: bool = True
    source: str = "explicit"
    _by_length: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        by_len: dict[int, set[str]] = {}
        for w in self.words:
            by_len.setdefault(len(w), set()).add(w)
        object.__setattr__(self, "_by_length", by_len)

    @staticmethod
    def from_words(alphabet: str, depth: int, words: Iterable[str],
                   complete: bool = True, source: str = "explicit") -> "FactorSet":
        ws = set(words)
        ws.add("")
        closed = set()
        for w in ws:
            closed |= factors(w, depth)
        return FactorSet(alphabet, depth, frozenset(closed), complete, source)

    @staticmethod
    def from_text(alphabet: str, text: str, depth: int,
                  complete: bool = False, source: str = "explicit") -> "FactorSet":
        """Factors of a single finite word, truncated at depth."""
        return FactorSet(alphabet, depth, frozenset(factors(text, depth)),
                         complete, source)

    def __contains__(self, w: str) -> bool:
        return w in self.words

    def __len__(self) -> int:
        return len(self.words)

    def of_length(self, n: int) -> set[str]:
        if n > self.depth:
            raise DepthExceededError(f"requested length {n} > depth {self.depth}")
        return set(self._by_length.get(n, set()))

    def complexity(self, n: int) -> int:
        if n > self.depth:
            raise DepthExceededError(f"requested length {n} > depth {self.depth}")
        if not self.complete:
            raise IncompleteSetError("complexity is only meaningful on a "
                                     "certified-complete truncation")
        return len(self._by_length.get(n, set()))

    def letters_present(self) -> str:
        return "".join(a for a in self.alphabet if a in self.words)

    def check_factorial(self) -> bool:
        return all(w[1:] in self.words and w[:-1] in self.words
                   for w in self.words if w)

    def to_json_dict(self) -> dict:
        return {
            "alphabet": self.alphabet,
            "depth": self.depth,
            "complete": self.complete,
            "source": self.source,
            "words": sorted(self.words, key=lambda w: (len(w), w)),
        }


@dataclass(frozen=True)
class ExtensionRecord:
    word: str
    left: frozenset[str]
    right: frozenset[str]
    pairs: frozenset[tuple[str, str]]

    @property
    def l_count(self) -> int:
        return len(self.left)

    @property
    def r_count(self) -> int:
        return len(self.right)

    @property
    def e_count(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class ExtensionGraph:
    """Bipartite graph: left vertices extend on the left, right on the right.

    Vertices may be letters (ordinary extension graph) or words (generalized
    form); the two sides are kept as disjoint copies.
    """

    left: frozenset[str]
    right: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def is_connected(self) -> bool:
        verts = [("L", v) for v in self.left] + [("R", v) for v in self.right]
        if not verts:
            return True
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for l, r in self.edges:
            a, b = find(("L", l)), find(("R", r))
            if a != b:
                parent[a] = b
        roots = {find(v) for v in verts}
        return len(roots) <= 1

    def is_acyclic(self) -> bool:
        # for a bipartite (multi-free) graph: acyclic iff edges <= vertices - components
        verts = [("L", v) for v in self.left] + [("R", v) for v in self.right]
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        components = len(verts)
        for l, r in self.edges:
            a, b = find(("L", l)), find(("R", r))
            if a == b:
                return False
            parent[a] = b
            components -= 1
        return True

    def is_tree(self) -> bool:
        return self.is_connected() and self.is_acyclic()

    def to_dot(self) -> str:
        lines = ["graph extension {"]
        for v in sorted(self.left):
            lines.append(f'  "L:{v}" [label="{v}"];')
        for v in sorted(self.right):
            lines.append(f'  "R:{v}" [label="{v}"];')
        for l, r in sorted(self.edges):
            lines.append(f'  "L:{l}" -- "R:{r}";')
        lines.append("}")
        return "\n".join(lines)


def extensions(s: FactorSet, w: str) -> ExtensionRecord:
    """Left/right extending letters of w and the two-sided extension pairs.

    Pairs need |w| <= depth - 2 to be trustworthy; single-sided extensions
    only need one spare letter of depth.
    """
    if w not in s:
        raise NotAMemberError(w)
    if len(w) > s.depth - 1:
        raise DepthExceededError(f"|{w}| too close to depth {s.depth}")
    left = frozenset(a for a in s.alphabet if a + w in s)
    right = frozenset(b for b in s.alphabet if w + b in s)
    if len(w) > s.depth - 2:
        raise DepthExceededError(f"pairs of {w!r} not computable at depth {s.depth}")
    pairs = frozenset((a, b) for a in s.alphabet for b in s.alphabet
                      if a + w + b in s)
    return ExtensionRecord(w, left, right, pairs)


def is_special(s: FactorSet, w: str) -> str:
    """One of 'bispecial', 'right-special', 'left-special', 'none'."""
    rec = extensions(s, w)
    right = rec.r_count >= 2
    left = rec.l_count >= 2
    if left and right:
        return "bispecial"
    if right:
        return "right-special"
    if left:
        return "left-special"
    return "none"


def extension_graph(s: FactorSet, w: str) -> ExtensionGraph:
    rec = extensions(s, w)
    return ExtensionGraph(rec.left, rec.right, rec.pairs)


def generalized_extension_graph(s: FactorSet, w: str,
                                U: Iterable[str], V: Iterable[str]) -> ExtensionGraph:
    """Extension graph of w with left vertices drawn from U, right from V.

    The caller is responsible for U being an S-maximal suffix code and V an
    S-maximal prefix code when the tree property of the result is relied on.
    """
    U, V = set(U), set(V)
    need = len(w) + max((len(u) for u in U), default=0) + max((len(v) for v in V), default=0)
    if need > s.depth:
        raise DepthExceededError(f"need depth {need}, have {s.depth}")
    uw = frozenset(u for u in U if u + w in s)
    wv = frozenset(v for v in V if w + v in s)
    edges = frozenset((u, v) for u in uw for v in wv if u + w + v in s)
    return ExtensionGraph(uw, wv, edges)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a bounded structural check, with a witness on failure."""

    ok: bool
    bound: int
    witness: str | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_acyclic_set(s: FactorSet, up_to: int) -> Verdict:
    if up_to > s.depth - 2:
        raise DepthExceededError(f"up_to {up_to} > depth-2 = {s.depth - 2}")
    for n in range(up_to + 1):
        for w in sorted(s.of_length(n)):
            if not extension_graph(s, w).is_acyclic():
                return Verdict(False, up_to, w, "cycle in extension graph")
    return Verdict(True, up_to)


def is_tree_set(s: FactorSet, up_to: int) -> Verdict:
    if up_to > s.depth - 2:
        raise DepthExceededError(f"up_to {up_to} > depth-2 = {s.depth - 2}")
    for n in range(up_to + 1):
        for w in sorted(s.of_length(n)):
            g = extension_graph(s, w)
            if not g.is_acyclic():
                return Verdict(False, up_to, w, "cycle in extension graph")
            if not g.is_connected():
                return Verdict(False, up_to, w, "extension graph disconnected")
    return Verdict(True, up_to)


def is_recurrent_desk(s: FactorSet, up_to: int) -> Verdict:
    """Bounded recurrence check: for every u, w of length <= up_to, search a
    connector v with uvw in the set.  A failed search refutes recurrence only
    when the set is certified complete; the verdict says so either way.
    """
    if up_to > s.depth:
        raise DepthExceededError(f"up_to {up_to} > depth {s.depth}")
    small = [w for n in range(up_to + 1) for w in sorted(s.of_length(n))]
    for u in small:
        for w in small:
            budget = s.depth - len(u) - len(w)
            if budget < 0:
                continue
            if not _connects(s, u, w, budget):
                reason = ("no connector within depth"
                          if s.complete else "no connector within depth (set not certified)")
                return Verdict(False, up_to, f"({u!r},{w!r})", reason)
    return Verdict(True, up_to)


def _connects(s: FactorSet, u: str, w: str, budget: int) -> bool:
    # any successful connector v makes uvw a member, so v itself is a member
    for m in range(budget + 1):
        for v in s.of_length(m):
            if u + v + w in s:
                return True
    return False
