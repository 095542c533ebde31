"""Free-group machinery: folded subgroup graphs, basis tests and tame
decompositions into positive elementary automorphisms.

Signed words are plain strings: a lowercase letter is a generator, the
corresponding uppercase letter its inverse.  All graph computations work on
folded graphs, so membership, rank and index are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .morphisms import Morphism, compose
from .words import FactorSet


class NotAGeneratorError(Exception):
    pass


def inverse_word(w: str) -> str:
    return w[::-1].swapcase()


def reduce_word(w: str) -> str:
    """Free reduction: cancel adjacent x·x^{-1} pairs until none remain."""
    out: list[str] = []
    for c in w:
        if out and out[-1] != c and out[-1].lower() == c.lower():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def is_reduced(w: str) -> bool:
    return reduce_word(w) == w


@dataclass(frozen=True)
class FoldedGraph:
    """A folded, connected, base-pointed graph over a positive alphabet.

    ``edges`` holds the positive edges only: edges[(v, a)] = u means an
    a-labelled edge from v to u; its inverse traversal is recovered from
    ``redges``.  After folding both maps are deterministic.
    """

    alphabet: str
    n_vertices: int
    edges: tuple[tuple[int, str, int], ...]
    base: int = 0

    def _maps(self):
        fwd = {(v, a): u for v, a, u in self.edges}
        rev = {(u, a): v for v, a, u in self.edges}
        return fwd, rev

    def trace(self, w: str, start: int | None = None) -> int | None:
        """Endpoint of the path reading the signed word w, or None."""
        fwd, rev = self._maps()
        v = self.base if start is None else start
        for c in reduce_word(w):
            if c.islower():
                v = fwd.get((v, c))
            else:
                v = rev.get((v, c.lower()))
            if v is None:
                return None
        return v

    def contains(self, w: str) -> bool:
        """Membership of w in the subgroup (valid as stated for finite-index /
        complete graphs; in general certifies membership one way)."""
        return self.trace(w) == self.base

    @property
    def rank(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    @property
    def complete(self) -> bool:
        fwd, rev = self._maps()
        return all((v, a) in fwd and (v, a) in rev
                   for v in range(self.n_vertices) for a in self.alphabet)

    @property
    def index(self) -> int | None:
        """Subgroup index, finite exactly when the graph is complete."""
        return self.n_vertices if self.complete else None

    def is_rose(self) -> bool:
        return (self.n_vertices == 1
                and sorted(a for _, a, _ in self.edges) == sorted(self.alphabet))

    def spanning_tree_words(self) -> dict[int, str]:
        """Shortest signed word from the base to each vertex (BFS tree)."""
        fwd, rev = self._maps()
        words = {self.base: ""}
        frontier = [self.base]
        while frontier:
            nxt = []
            for v in frontier:
                for a in self.alphabet:
                    u = fwd.get((v, a))
                    if u is not None and u not in words:
                        words[u] = words[v] + a
                        nxt.append(u)
                    u = rev.get((v, a))
                    if u is not None and u not in words:
                        words[u] = words[v] + a.upper()
                        nxt.append(u)
            frontier = nxt
        return words

    def schreier_generators(self) -> list[str]:
        """One reduced generator per edge outside the BFS spanning tree."""
        tree = self.spanning_tree_words()
        tree_edges = set()
        for v, w in tree.items():
            if w:
                prev = self.trace(w[:-1])
                c = w[-1]
                if c.islower():
                    tree_edges.add((prev, c, v))
                else:
                    tree_edges.add((v, c.lower(), prev))
        gens = []
        for v, a, u in self.edges:
            if (v, a, u) not in tree_edges:
                g = reduce_word(tree[v] + a + inverse_word(tree[u]))
                if g:
                    gens.append(g)
        return gens

    def to_dot(self) -> str:
        lines = ["digraph folded {", "  rankdir=LR;",
                 f'  {self.base} [shape=doublecircle];']
        for v, a, u in sorted(self.edges):
            lines.append(f'  {v} -> {u} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines)


def fold(words, alphabet: str | None = None) -> FoldedGraph:
    """Folded graph of the subgroup generated by the given signed words."""
    words = sorted(words)
    if alphabet is None:
        alphabet = "".join(sorted({c.lower() for w in words for c in w}))
    for w in words:
        for c in w:
            if c.lower() not in alphabet:
                raise NotAGeneratorError(c)
    # bouquet of word-paths from the base
    edges: list[list[int]] = []   # [v, letter-index, u], mutable for merging
    letters = {a: i for i, a in enumerate(alphabet)}
    n = 1
    for w in words:
        v = 0
        red = reduce_word(w)
        for k, c in enumerate(red):
            u = 0 if k == len(red) - 1 else n
            if u != 0:
                n += 1
            if c.islower():
                edges.append([v, letters[c], u])
            else:
                edges.append([u, letters[c.lower()], v])
            v = u
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    changed = True
    while changed:
        changed = False
        fwd: dict[tuple[int, int], int] = {}
        rev: dict[tuple[int, int], int] = {}
        for v, a, u in edges:
            v, u = find(v), find(u)
            if (v, a) in fwd and fwd[(v, a)] != u:
                union(fwd[(v, a)], u)
                changed = True
            fwd[(v, a)] = find(u)
            if (u, a) in rev and rev[(u, a)] != v:
                union(rev[(u, a)], v)
                changed = True
            rev[(u, a)] = find(v)
    roots = sorted({find(v) for v in range(n)})
    renum = {r: i for i, r in enumerate(roots)}
    base = renum[find(0)]
    if base != 0:  # keep the base at 0
        swap = {base: 0, 0: base}
        renum = {r: swap.get(i, i) for r, i in renum.items()}
    final = {(renum[find(v)], alphabet[a], renum[find(u)]) for v, a, u in edges}
    return FoldedGraph(alphabet, len(roots), tuple(sorted(final)))


def is_basis(words, alphabet: str) -> bool:
    """True iff the words freely generate the whole free group: as many words
    as letters and the folded graph is the one-vertex rose."""
    words = list(words)
    if len(words) != len(alphabet):
        return False
    g = fold(words, alphabet)
    return g.is_rose() and g.rank == len(alphabet)


def elementary_automorphism(a: str, b: str, alphabet: str,
                            side: str = "right") -> Morphism:
    """The positive automorphism sending a to ab (side='right') or ba
    (side='left'), fixing every other letter."""
    if a == b or a not in alphabet or b not in alphabet:
        raise ValueError(f"need two distinct letters of {alphabet!r}")
    images = tuple((a + b if side == "right" else b + a) if c == a else c
                   for c in alphabet)
    return Morphism(alphabet, alphabet, images)


@dataclass(frozen=True)
class TameDecomposition:
    """Outcome of the greedy peeling of an assignment letter -> positive word.

    steps are recorded innermost-first: the original morphism equals
    permutation ∘ steps[-1] ∘ ... ∘ steps[0].
    """

    verdict: str                       # "tame" | "not-tame" | "undetermined"
    steps: tuple[tuple[str, str, str], ...]   # (side, a, b) meaning a -> ab/ba
    permutation: Morphism | None
    alphabet: str
    stuck_at: tuple[str, ...] | None = None

    def replay(self) -> Morphism | None:
        """Recompose permutation ∘ α_k ∘ ... ∘ α_1; None unless tame."""
        if self.verdict != "tame":
            return None
        out = self.permutation
        for side, a, b in reversed(self.steps):
            out = out.then(elementary_automorphism(a, b, self.alphabet, side))
        return out


def tame_decompose(words, alphabet: str, max_steps: int = 10_000) -> TameDecomposition:
    """Greedy decomposition of a positive basis into elementary automorphisms.

    Repeatedly peels: when one image is a proper prefix (resp. suffix) of
    another, strip it and record the corresponding elementary automorphism.
    Terminates at a letter permutation (tame), or stuck.  A stuck bifix code
    basis admits no decomposition at all ("not-tame"); for a stuck non-bifix
    set the greedy is inconclusive ("undetermined").
    """
    words = sorted(words)
    if len(words) != len(alphabet):
        return TameDecomposition("not-tame", (), None, alphabet, tuple(words))
    assign = dict(zip(alphabet, words))
    steps: list[tuple[str, str, str]] = []
    for _ in range(max_steps):
        if all(len(v) == 1 for v in assign.values()):
            if sorted(assign.values()) != sorted(alphabet):
                break
            perm = Morphism(alphabet, alphabet,
                            tuple(assign[c] for c in alphabet))
            return TameDecomposition("tame", tuple(steps), perm, alphabet)
        peeled = False
        for i in alphabet:
            for j in alphabet:
                if i == j:
                    continue
                u, w = assign[i], assign[j]
                if len(u) < len(w) and w.startswith(u):
                    # w = u·v: replacing j's image by v composes with j -> ij
                    assign[j] = w[len(u):]
                    steps.append(("left", j, i))
                    peeled = True
                elif len(u) < len(w) and w.endswith(u):
                    assign[j] = w[: len(w) - len(u)]
                    steps.append(("right", j, i))
                    peeled = True
                if peeled:
                    break
            if peeled:
                break
        if not peeled:
            break
    stuck = tuple(sorted(assign.values()))
    from .codes import is_bifix_code
    if is_bifix_code(set(words)) and is_basis(words, alphabet):
        return TameDecomposition("not-tame", tuple(steps), None, alphabet, stuck)
    return TameDecomposition("undetermined", tuple(steps), None, alphabet, stuck)


def saturation_check(x, s: FactorSet) -> bool:
    """A code is saturating when, inside the truncated set, subgroup
    membership (via the folded graph) coincides with free-monoid membership
    over the code."""
    from .codes import in_star
    g = fold(x, s.alphabet)
    xs = set(x)
    return all(g.contains(w) == in_star(w, xs) for w in s.words)


def random_permutation_graph(alphabet: str, n: int, rng) -> FoldedGraph:
    """Complete folded graph from one random permutation of n points per
    letter: the point-0 stabilizer of the generated permutation group."""
    edges = []
    for a in alphabet:
        perm = list(range(n))
        rng.shuffle(perm)
        for v in range(n):
            edges.append((v, a, perm[v]))
    g = FoldedGraph(alphabet, n, tuple(sorted(edges)))
    # keep only the connected component of the base
    reach = {0}
    frontier = [0]
    fwd, rev = g._maps()
    while frontier:
        nxt = []
        for v in frontier:
            for a in alphabet:
                for u in (fwd.get((v, a)), rev.get((v, a))):
                    if u is not None and u not in reach:
                        reach.add(u)
                        nxt.append(u)
        frontier = nxt
    renum = {v: i for i, v in enumerate(sorted(reach))}
    kept = tuple(sorted((renum[v], a, renum[u]) for v, a, u in edges
                        if v in reach))
    return FoldedGraph(alphabet, len(reach), kept)
