"""Finite codes: prefix/suffix/bifix predicates, parses and degrees,
S-maximality, minimal automata, group codes and composition."""

from __future__ import annotations

from dataclasses import dataclass

from .morphisms import Morphism
from .words import DepthExceededError, FactorSet


class NotBifixError(Exception):
    pass


class EmptyWordError(Exception):
    pass


class InsufficientDepthError(Exception):
    pass


def _check_nonempty(X):
    if "" in X:
        raise EmptyWordError("codes contain nonempty words only")


def is_prefix_code(X) -> bool:
    _check_nonempty(X)
    X = set(X)
    return not any(x != y and y.startswith(x) for x in X for y in X)


def is_suffix_code(X) -> bool:
    _check_nonempty(X)
    X = set(X)
    return not any(x != y and y.endswith(x) for x in X for y in X)


def is_bifix_code(X) -> bool:
    return is_prefix_code(X) and is_suffix_code(X)


def is_code(X) -> bool:
    """Sardinas-Patterson test for an arbitrary finite set of nonempty words."""
    _check_nonempty(X)
    X = set(X)

    def residuals(U, V):
        out = set()
        for u in U:
            for v in V:
                if v.startswith(u) and v != u:
                    out.add(v[len(u):])
                if u.startswith(v) and u != v:
                    out.add(u[len(v):])
        return out

    seen = set()
    cur = residuals(X, X)
    while cur:
        if "" in cur:
            return False
        key = frozenset(cur)
        if key in seen:
            return True
        seen.add(key)
        cur = residuals(cur, X) | residuals(X, cur)
    return True


def star_memberships(X, max_len: int) -> set[str]:
    """All words of X^* of length <= max_len (X finite)."""
    out = {""}
    frontier = [""]
    while frontier:
        nxt = []
        for w in frontier:
            for x in X:
                wx = w + x
                if len(wx) <= max_len and wx not in out:
                    out.add(wx)
                    nxt.append(wx)
        frontier = nxt
    return out


def in_star(w: str, X) -> bool:
    """Membership of w in X^* by dynamic programming (X need not be prefix)."""
    n = len(w)
    ok = [False] * (n + 1)
    ok[0] = True
    for i in range(1, n + 1):
        for x in X:
            if len(x) <= i and ok[i - len(x)] and w.endswith(x, 0, i):
                ok[i] = True
                break
    return ok[n]


def parses(X, w: str) -> list[tuple[str, str, str]]:
    """All triples (v, x, u) with w = vxu, v without suffix in X, u without
    prefix in X and x in X^*.  Requires X bifix; the triple count is
    cross-checked against the suffix-counting rule.
    """
    if not is_bifix_code(X):
        raise NotBifixError("parses are defined here for bifix codes only")
    X = set(X)
    out = []
    n = len(w)
    no_suffix = [not any(w[:i].endswith(x) for x in X) for i in range(n + 1)]
    no_prefix = [not any(w[j:].startswith(x) for x in X) for j in range(n + 1)]
    for i in range(n + 1):
        if not no_suffix[i]:
            continue
        for j in range(i, n + 1):
            if no_prefix[j] and in_star(w[i:j], X):
                out.append((w[:i], w[i:j], w[j:]))
    count = sum(1 for j in range(n + 1) if no_prefix[j])
    if len(out) != count:
        raise AssertionError(
            f"parse enumeration ({len(out)}) disagrees with suffix rule ({count})")
    return out


def parse_count(X, w: str) -> int:
    return len(parses(X, w))


def is_s_maximal_prefix(X, s: FactorSet, margin: int | None = None) -> bool:
    """X prefix code, all members in s: maximality tested on every word of s
    short enough that comparability is decidable within the truncation.

    The default margin (longest codeword) avoids false negatives at the
    truncation boundary; pass margin=0 when s is the whole finite set.
    """
    if not is_prefix_code(X):
        raise ValueError("X is not a prefix code")
    X = set(X)
    if not all(x in s for x in X):
        raise ValueError("X is not contained in the set")
    if margin is None:
        margin = max(len(x) for x in X)
    if s.depth < margin:
        raise InsufficientDepthError("truncation shallower than the code")
    for n in range(s.depth - margin + 1):
        for w in s.of_length(n):
            if not any(w.startswith(x) or x.startswith(w) for x in X):
                return False
    return True


def is_s_maximal_suffix(X, s: FactorSet, margin: int | None = None) -> bool:
    rev = {x[::-1] for x in X}
    rwords = frozenset(w[::-1] for w in s.words)
    rs = FactorSet(s.alphabet, s.depth, rwords, s.complete, s.source)
    return is_s_maximal_prefix(rev, rs, margin)


def is_s_maximal_bifix(X, s: FactorSet, assume_recurrent: bool = True,
                       margin: int | None = None) -> bool:
    """For recurrent s, bifix S-maximality coincides with prefix S-maximality;
    without the recurrence assumption both sides are tested."""
    if not is_bifix_code(X):
        return False
    if assume_recurrent:
        return is_s_maximal_prefix(X, s, margin)
    return (is_s_maximal_prefix(X, s, margin)
            and is_s_maximal_suffix(X, s, margin))


def s_degree(X, s: FactorSet) -> int:
    """Max parse count over the truncation; sound when the set holds a word
    longer than three times the longest codeword."""
    X = set(X)
    max_x = max(len(x) for x in X)
    if s.depth <= 3 * max_x:
        raise InsufficientDepthError(
            f"need depth > {3 * max_x} to certify the degree, have {s.depth}")
    best = 0
    for w in s.of_length(s.depth):
        best = max(best, parse_count(X, w))
    if best == 0:  # no word of full length: fall back to scanning everything
        for w in sorted(s.words, key=len, reverse=True):
            best = max(best, parse_count(X, w))
    return best


def internal_factors(X, s: FactorSet) -> set[str]:
    """I(X) = members of s with fewer parses than the S-degree."""
    d = s_degree(X, s)
    return {w for w in s.words if parse_count(X, w) < d}


def kernel(X, s: FactorSet) -> set[str]:
    """K(X) = I(X) ∩ X: codewords that are internal factors of the code."""
    return internal_factors(X, s) & set(X)


def kernel_direct(X) -> set[str]:
    """Kernel computed straight from the definition (internal factor of X)."""
    X = set(X)
    out = set()
    for w in X:
        for x in X:
            # w occurs in x with nonempty material on both sides
            if any(x[i : i + len(w)] == w
                   for i in range(1, len(x) - len(w))):
                out.add(w)
                break
    return out


# ---------------------------------------------------------------------------
# deterministic automata


@dataclass(frozen=True)
class Automaton:
    """Deterministic partial automaton; states are ints, 0 is initial."""

    n_states: int
    alphabet: str
    transitions: tuple  # tuple of dicts letter -> state
    terminals: frozenset[int]

    def step(self, state: int, w: str) -> int | None:
        for c in w:
            nxt = self.transitions[state].get(c)
            if nxt is None:
                return None
            state = nxt
        return state

    def accepts(self, w: str) -> bool:
        return self.step(0, w) in self.terminals

    def is_group_automaton(self) -> bool:
        if self.terminals != frozenset({0}):
            return False
        for a in self.alphabet:
            seen = set()
            for q in range(self.n_states):
                nxt = self.transitions[q].get(a)
                if nxt is None or nxt in seen:
                    return False
                seen.add(nxt)
        return True

    def to_dot(self) -> str:
        lines = ["digraph automaton {", "  rankdir=LR;",
                 '  0 [shape=doublecircle];']
        for q in sorted(self.terminals - {0}):
            lines.append(f"  {q} [shape=doublecircle, peripheries=3];")
        for q in range(self.n_states):
            for a in sorted(self.transitions[q]):
                lines.append(f'  {q} -> {self.transitions[q][a]} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines)


def minimal_automaton_of_star(X) -> Automaton:
    """Minimal simple automaton of X^* for a finite prefix code X.

    Built on the proper prefixes of X (residual states), then merged by
    Moore partition refinement.
    """
    if not is_prefix_code(X):
        raise ValueError("X is not a prefix code")
    X = set(X)
    alphabet = "".join(sorted({c for x in X for c in x}))
    prefixes = sorted({x[:i] for x in X for i in range(len(x))},
                      key=lambda p: (len(p), p))
    index = {p: i for i, p in enumerate(prefixes)}
    trans = []
    for p in prefixes:
        row = {}
        for a in alphabet:
            pa = p + a
            if pa in X:
                row[a] = index[""]
            elif pa in index:
                row[a] = index[pa]
        trans.append(row)
    # Moore refinement (all states here are "accepting-as-initial" only at "")
    n = len(prefixes)
    part = [0 if p == "" else 1 for p in prefixes]
    if n == 1:
        part = [0]
    while True:
        sig = [(part[q], tuple((a, part[trans[q][a]]) if a in trans[q] else (a, -1)
                               for a in alphabet)) for q in range(n)]
        mapping: dict = {}
        new_part = []
        for v in sig:
            if v not in mapping:
                mapping[v] = len(mapping)
            new_part.append(mapping[v])
        if new_part == part:
            break
        part = new_part
    classes = sorted(set(part), key=lambda c: part.index(c))
    renum = {c: i for i, c in enumerate(classes)}
    # keep class of "" as state 0
    root = renum[part[index[""]]]
    if root != 0:
        swap = {root: 0, 0: root}
        renum = {c: swap.get(i, i) for c, i in renum.items()}
    m = len(classes)
    new_trans: list[dict] = [{} for _ in range(m)]
    for q in range(n):
        for a, t in trans[q].items():
            new_trans[renum[part[q]]][a] = renum[part[t]]
    return Automaton(m, alphabet, tuple(new_trans), frozenset({0}))


# ---------------------------------------------------------------------------
# group codes


def perm_compose(p: tuple, q: tuple) -> tuple:
    """(p then q) acting on the right: result[i] = q[p[i]]."""
    return tuple(q[i] for i in p)


def perm_identity(n: int) -> tuple:
    return tuple(range(n))


def cycle_perm(n: int) -> tuple:
    """The n-cycle sending i to i+1 mod n (models Z/nZ by translation)."""
    return tuple((i + 1) % n for i in range(n))


@dataclass(frozen=True)
class GroupMorphism:
    """Morphism from words to a permutation group, letter by letter."""

    alphabet: str
    images: tuple  # parallel permutations, all of the same size

    @property
    def degree(self) -> int:
        return len(self.images[0])

    def __call__(self, w: str) -> tuple:
        g = perm_identity(self.degree)
        idx = {a: i for i, a in enumerate(self.alphabet)}
        for c in w:
            g = perm_compose(g, self.images[idx[c]])
        return g

    def group_elements(self) -> set[tuple]:
        """The subgroup generated by the letter images (closure)."""
        gens = set(self.images)
        out = {perm_identity(self.degree)}
        frontier = list(out)
        while frontier:
            g = frontier.pop()
            for h in gens:
                gh = perm_compose(g, h)
                if gh not in out:
                    out.add(gh)
                    frontier.append(gh)
        return out

    def regular(self) -> "GroupMorphism":
        """Same letter images, acting on the generated group by right
        multiplication; the point-0 stabilizer becomes trivial, so the
        resulting automaton recognizes the kernel of the morphism."""
        elements = sorted(self.group_elements())
        index = {g: i for i, g in enumerate(elements)}
        new_images = []
        for img in self.images:
            new_images.append(tuple(index[perm_compose(g, img)]
                                    for g in elements))
        return GroupMorphism(self.alphabet, tuple(new_images))

    def group_automaton(self) -> Automaton:
        """Automaton on the orbit of 0 under the letter permutations; the
        accepted submonoid is the stabilizer of point 0."""
        states = {0: 0}
        order = [0]
        trans: list[dict] = [{}]
        idx = 0
        while idx < len(order):
            pt = order[idx]
            for a, perm in zip(self.alphabet, self.images):
                npt = perm[pt]
                if npt not in states:
                    states[npt] = len(order)
                    order.append(npt)
                    trans.append({})
                trans[states[pt]][a] = states[npt]
            idx += 1
        return Automaton(len(order), self.alphabet,
                         tuple(trans), frozenset({0}))


def group_code_intersection(phi: GroupMorphism, s: FactorSet):
    """X = Z ∩ S where Z is the group code of first returns to the initial
    state of phi's point-stabilizer automaton.

    Returns (X, certified): certification holds when every maximal-length
    member of s has a prefix in X, so no codeword escapes the truncation.
    """
    aut = phi.group_automaton()
    X = set()
    frontier = [("", 0)]
    while frontier:
        nxt = []
        for w, q in frontier:
            for a in s.alphabet:
                wa = w + a
                if wa not in s:
                    continue
                qa = aut.transitions[q].get(a)
                if qa is None:
                    continue
                if qa == 0:
                    X.add(wa)
                elif len(wa) < s.depth:
                    nxt.append((wa, qa))
        frontier = nxt
    certified = all(any(w.startswith(x) for x in X)
                    for w in s.of_length(s.depth))
    return X, certified


# ---------------------------------------------------------------------------
# composition


FRESH_POOL = "uvwxyzabcdefghijklmnopqrst"


def compose_codes(Y, f: Morphism) -> set[str]:
    """X = f(Y): replace each letter of every word of Y by its codeword."""
    return {f(y) for y in Y}


def z_factorize(w: str, Z) -> list[str] | None:
    """One factorization of w over the code Z (unique when it exists)."""
    n = len(w)
    back: list[int | None] = [None] * (n + 1)
    reach = [False] * (n + 1)
    reach[0] = True
    for i in range(1, n + 1):
        for z in Z:
            if len(z) <= i and reach[i - len(z)] and w.endswith(z, 0, i):
                reach[i] = True
                back[i] = len(z)
                break
    if not reach[n]:
        return None
    out = []
    i = n
    while i > 0:
        k = back[i]
        out.append(w[i - k : i])
        i -= k
    return out[::-1]


def decompose_over(X, Z):
    """Find Y and a coding morphism f with X = f(Y), f bijective onto Z.

    Returns (Y, f) or (None, reason).  Fresh letters are assigned to the
    members of Z in length-then-lex order.
    """
    X, Z = set(X), set(Z)
    facts = {}
    used = set()
    for x in X:
        fac = z_factorize(x, Z)
        if fac is None:
            return None, f"{x!r} is not in Z*"
        facts[x] = fac
        used.update(fac)
    if used != Z:
        missing = sorted(Z - used)
        return None, f"alp_Z(X) != Z (unused: {missing})"
    ordered = sorted(Z, key=lambda z: (len(z), z))
    if len(ordered) > len(FRESH_POOL):
        raise ValueError("fresh alphabet pool exhausted")
    letter = {z: FRESH_POOL[i] for i, z in enumerate(ordered)}
    B = "".join(letter[z] for z in ordered)
    f = Morphism(B, "".join(sorted({c for z in Z for c in z})),
                 tuple(ordered))
    Y = {"".join(letter[z] for z in facts[x]) for x in X}
    return Y, f


def maximality_transfer_check(Y, f: Morphism, s: FactorSet,
                              t: FactorSet) -> dict:
    """Evaluate the prefix-maximality transfer between X = f(Y), Z = f(B)
    and Y on the truncations s (over A) and t (over B, the decoding of s)."""
    Z = set(f.images)
    X = compose_codes(Y, f)
    report = {
        "X_s_maximal_prefix": is_s_maximal_prefix(X, s),
        "Z_s_maximal_prefix": is_s_maximal_prefix(Z, s),
        "Y_t_maximal_prefix": is_s_maximal_prefix(set(Y), t),
    }
    report["forward_consistent"] = (not report["X_s_maximal_prefix"]) or (
        report["Z_s_maximal_prefix"] and report["Y_t_maximal_prefix"])
    report["converse_holds"] = (not (report["Z_s_maximal_prefix"]
                                     and report["Y_t_maximal_prefix"])
                                ) or report["X_s_maximal_prefix"]
    return report
