"""Maximal bifix decodings and adic representations of factor sets.

A decoding recodes a factor set through a coding morphism for a finite
maximal bifix code; an adic representation peels a uniformly recurrent set
into a sequence of return-word codings, each of which should be a tame basis
of the free group when the set satisfies the tree condition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import (FRESH_POOL, decompose_over, is_bifix_code,
                    is_s_maximal_bifix, s_degree)
from .freegroup import is_basis, tame_decompose
from .morphisms import Morphism, compose
from .returns import derived_set, return_words, uniform_recurrence_check
from .words import FactorSet, Verdict, factors, is_tree_set


class NotMaximalBifixError(Exception):
    pass


class ReturnsNotLetterCountError(Exception):
    """Raised when the number of first returns differs from the alphabet size
    (as it must for sets failing the tree condition)."""


def truncate(s: FactorSet, depth: int) -> FactorSet:
    if depth > s.depth:
        raise ValueError("cannot deepen a factor set by truncation")
    return FactorSet(s.alphabet, depth,
                     frozenset(w for w in s.words if len(w) <= depth),
                     complete=s.complete, source=s.source)


@dataclass(frozen=True)
class DecodedSet:
    coding: Morphism            # fresh letter -> codeword
    factor_set: FactorSet       # preimage set over the fresh alphabet


def coding_morphism_for(code, alphabet: str | None = None) -> Morphism:
    """Bijective coding morphism: fresh letters in order onto the codewords
    in length-then-lex order."""
    ordered = sorted(code, key=lambda x: (len(x), x))
    if alphabet is None:
        alphabet = FRESH_POOL[: len(ordered)]
    if len(alphabet) != len(ordered):
        raise ValueError("alphabet size must match the code size")
    target = "".join(sorted({c for x in ordered for c in x}))
    return Morphism(alphabet, target, tuple(ordered))


def max_bifix_decode(s: FactorSet, code,
                     coding: Morphism | None = None,
                     require_maximal: bool = True) -> DecodedSet:
    """Preimage of s under a coding morphism for the given bifix code.

    The decoded words w are exactly those with image inside s; the result is
    complete to depth // max-codeword-length whenever s is complete.
    """
    code = set(code)
    if not is_bifix_code(code):
        raise NotMaximalBifixError("the code is not bifix")
    if require_maximal and not is_s_maximal_bifix(code, s):
        raise NotMaximalBifixError("the code is not maximal inside the set")
    if coding is None:
        coding = coding_morphism_for(code)
    if set(coding.images) != code:
        raise ValueError("coding morphism must enumerate the code")
    m = s.depth // max(len(x) for x in code)
    members = {""}
    frontier = [""]
    for _ in range(m):
        nxt = []
        for w in frontier:
            for b in coding.source:
                wb = w + b
                if coding(wb) in s:
                    members.add(wb)
                    nxt.append(wb)
        frontier = nxt
    fs = FactorSet(coding.source, m, frozenset(members),
                   complete=s.complete, source="decoded")
    return DecodedSet(coding, fs)


def verify_decoding_closure(s: FactorSet, code,
                            tree_up_to: int | None = None,
                            recurrence_up_to: int | None = None) -> dict:
    """Decode and check that the tree and uniform-recurrence properties
    survive.  Returns the decoded set together with both verdicts."""
    dec = max_bifix_decode(s, code)
    t = dec.factor_set
    if tree_up_to is None:
        tree_up_to = max(t.depth - 2, 0)
    if recurrence_up_to is None:
        recurrence_up_to = max(t.depth // 4, 1)
    return {
        "decoded": dec,
        "tree": is_tree_set(t, tree_up_to),
        "uniform_recurrence": uniform_recurrence_check(t, recurrence_up_to),
    }


def degree_multiplicativity(s: FactorSet, x, z) -> dict:
    """Check the degree formula through a code composition.

    Decomposes x over z (x = y composed with the coding for z), decodes s by
    z, and compares the degree of x with the product of the degrees of y (in
    the decoded set) and z (in s).
    """
    x, z = set(x), set(z)
    d_x = s_degree(x, s)
    d_z = s_degree(z, s)
    y, f = decompose_over(x, z)
    if y is None:
        return {"decomposes": False, "reason": f, "d_x": d_x, "d_z": d_z}
    dec = max_bifix_decode(s, z, coding=f)
    d_y = s_degree(y, dec.factor_set)
    return {
        "decomposes": True,
        "y": frozenset(y),
        "coding": f,
        "decoded": dec,
        "d_x": d_x,
        "d_y": d_y,
        "d_z": d_z,
        "multiplicative": d_x == d_y * d_z,
    }


class SetSource:
    """A factor set regenerable at any depth (with caching)."""

    def __init__(self, make, alphabet: str, name: str = "source"):
        self._make = make
        self.alphabet = alphabet
        self.name = name
        self._cache: dict[int, FactorSet] = {}

    def at(self, depth: int) -> FactorSet:
        if depth not in self._cache:
            fs = self._make(depth)
            if fs.depth != depth:
                fs = truncate(fs, depth)
            self._cache[depth] = fs
        return self._cache[depth]


def derived_source(src: SetSource, letter: str, coding: Morphism,
                   max_return: int) -> SetSource:
    def make(depth: int) -> FactorSet:
        base = src.at(depth * max_return + len(letter))
        fs = derived_set(base, letter, coding=coding).factor_set
        return truncate(fs, depth)
    return SetSource(make, coding.source, f"{src.name}/derived({letter})")


@dataclass(frozen=True)
class AdicStep:
    letter: str
    coding: Morphism            # sigma_n, an endomorphism-shaped coding
    basis: bool
    tame: bool


@dataclass(frozen=True)
class AdicRepresentation:
    steps: tuple[AdicStep, ...]
    inner: SetSource            # the set left after peeling all steps

    @property
    def morphisms(self) -> tuple[Morphism, ...]:
        return tuple(st.coding for st in self.steps)

    def composed(self) -> Morphism:
        return compose(*self.morphisms)


def sadic_extract(src: SetSource, n_steps: int,
                  start_depth: int = 16) -> AdicRepresentation:
    """Peel n_steps return-word codings off a uniformly recurrent set.

    At each step the lexicographically least letter is chosen, the set of
    first return words to it is computed at a depth large enough for its
    completeness certificate, and the set is replaced by its derived set.
    Each coding is checked for being a (tame) basis of the free group.
    """
    steps: list[AdicStep] = []
    for _ in range(n_steps):
        depth = start_depth
        while True:
            s = src.at(depth)
            letter = min(s.letters_present())
            rd = return_words(s, letter)
            if rd.complete and (s.depth - 1) // max(
                    len(r) for r in rd.first_returns) >= 4:
                break
            depth *= 2
            if depth > 4096:
                raise RuntimeError("no completeness certificate within bounds")
        if len(rd.first_returns) != len(s.alphabet):
            raise ReturnsNotLetterCountError(
                f"{len(rd.first_returns)} returns over {len(s.alphabet)} letters")
        coding = rd.coding_morphism(alphabet=s.alphabet)
        max_r = max(len(r) for r in rd.first_returns)
        basis = is_basis(coding.images, s.alphabet)
        tame = tame_decompose(coding.images, s.alphabet).verdict == "tame"
        steps.append(AdicStep(letter, coding, basis, tame))
        src = derived_source(src, letter, coding, max_r)
    return AdicRepresentation(tuple(steps), src)


def sadic_replay(rep: AdicRepresentation, depth: int) -> FactorSet:
    """Regenerate a truncated factor set from the representation alone:
    factors of the composed images of short words of the innermost set."""
    sigma = rep.composed()
    min_img = min(len(img) for img in sigma.images)
    k = depth // min_img + 2
    inner = rep.inner.at(k)
    words: set[str] = set()
    for u in inner.words:
        words |= factors(sigma(u), depth)
    return FactorSet(sigma.target, depth, frozenset(words),
                     complete=inner.complete, source="sadic")


def sequence_primitivity(rep: AdicRepresentation) -> Verdict:
    """For every start index r, some window sigma_r ... sigma_{s-1} within
    the extracted prefix must have every letter in every image."""
    sigmas = rep.morphisms
    n = len(sigmas)
    for r in range(n - 1):
        found = None
        acc = sigmas[r]
        for s_idx in range(r + 1, n):
            if all(set(acc.source) <= set(img) for img in acc.images):
                found = s_idx
                break
            acc = acc.then(sigmas[s_idx])
        else:
            if all(set(acc.source) <= set(img) for img in acc.images):
                found = n
        if found is None:
            return Verdict(False, n, str(r),
                           "no primitive window inside the extracted prefix")
    return Verdict(True, n)
