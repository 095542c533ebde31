"""Return words, derived sets and derived words on truncated factor sets.

Every result carries explicit depth accounting: a set of first returns is
certified complete only when some length K within the truncation forces an
occurrence of the base word in every member of that length.
"""

from __future__ import annotations

from dataclasses import dataclass

from .morphisms import Morphism
from .words import FactorSet, NotAMemberError, Verdict


class IncompleteReturnsError(Exception):
    pass


@dataclass(frozen=True)
class ReturnData:
    word: str
    gamma: frozenset[str]        # right return words found within depth
    first_returns: frozenset[str]
    gamma_left: frozenset[str]
    first_left: frozenset[str]
    complete: bool
    forcing_length: int | None   # K with every length-K member containing word

    def coding_morphism(self, alphabet: str | None = None) -> Morphism:
        """Deterministic bijection onto the first returns: fresh letters in
        alphabet order bound to codewords in length-then-lex order."""
        ordered = sorted(self.first_returns, key=lambda x: (len(x), x))
        if alphabet is None:
            alphabet = "abcdefghijklmnopqrstuvwxyz"[: len(ordered)]
        if len(alphabet) != len(ordered):
            raise ValueError("alphabet size must match the number of returns")
        target = "".join(sorted({c for x in ordered for c in x}))
        return Morphism(alphabet, target, tuple(ordered))


def return_words(s: FactorSet, w: str) -> ReturnData:
    """Right/left return words to w, with a completeness certificate.

    gamma = {x : wx in s and wx ends with w, x nonempty}; the first returns
    are its members with no proper prefix in gamma.
    """
    if w not in s:
        raise NotAMemberError(w)
    gamma = set()
    for n in range(1, s.depth - len(w) + 1):
        for u in s.of_length(n + len(w)):
            if u.startswith(w) and u.endswith(w):
                gamma.add(u[len(w):])
    first = {x for x in gamma
             if not any(x != y and x.startswith(y) for y in gamma)}
    gamma_left = {u[: len(u) - len(w)] for n in range(1, s.depth - len(w) + 1)
                  for u in s.of_length(n + len(w))
                  if u.startswith(w) and u.endswith(w)}
    first_left = {x for x in gamma_left
                  if not any(x != y and x.endswith(y) for y in gamma_left)}
    forcing = _forcing_length(s, w)
    complete = forcing is not None and len(w) + forcing <= s.depth
    return ReturnData(w, frozenset(gamma), frozenset(first),
                      frozenset(gamma_left), frozenset(first_left),
                      complete, forcing)


def _forcing_length(s: FactorSet, w: str) -> int | None:
    """Smallest K <= depth such that every member of length K contains w."""
    for K in range(len(w), s.depth + 1):
        if all(w in u for u in s.of_length(K)):
            return K
    return None


def left_right_conjugation(rd: ReturnData) -> dict[str, str]:
    """Verify w·R(w) = R'(w)·w and return the induced bijection R -> R'."""
    if not rd.complete:
        raise IncompleteReturnsError(rd.word)
    w = rd.word
    lhs = {w + x for x in rd.first_returns}
    rhs = {y + w for y in rd.first_left}
    if lhs != rhs:
        raise AssertionError(f"conjugation identity fails for {w!r}")
    out = {}
    for x in rd.first_returns:
        y = (w + x)[: len(x)]
        assert y + w == w + x
        out[x] = y
    return out


@dataclass(frozen=True)
class DerivedSet:
    coding: Morphism            # fresh letter -> first return word
    base_word: str
    factor_set: FactorSet       # over the fresh alphabet


def derived_set(s: FactorSet, w: str,
                coding: Morphism | None = None) -> DerivedSet:
    """Recode the returns to w over a fresh alphabet.

    The result is complete to (depth - |w|) // max-return-length, the
    conservative bound under which every preimage test stays inside s.
    """
    rd = return_words(s, w)
    if not rd.complete:
        raise IncompleteReturnsError(w)
    if coding is None:
        coding = rd.coding_morphism()
    if set(coding.images) != set(rd.first_returns):
        raise ValueError("coding morphism must enumerate the first returns")
    max_r = max(len(x) for x in rd.first_returns)
    m = (s.depth - len(w)) // max_r
    members = {""}
    frontier = [""]
    gamma_or_empty = set(rd.gamma) | {""}
    for _ in range(m):
        nxt = []
        for z in frontier:
            for b in coding.source:
                zb = z + b
                if coding(zb) in gamma_or_empty:
                    members.add(zb)
                    nxt.append(zb)
        frontier = nxt
    fs = FactorSet(coding.source, m, frozenset(members),
                   complete=s.complete, source="derived")
    return DerivedSet(coding, w, fs)


def derived_word(prefix: str, w: str, coding: Morphism) -> str:
    """Decode the return structure of a finite prefix of a recurrent word.

    Finds the first occurrence of w, then greedily factors the tail over the
    (prefix-code) return words; returns the decoded word for as many complete
    return blocks as the prefix supports.
    """
    start = prefix.find(w)
    if start < 0:
        raise ValueError(f"{w!r} does not occur in the given prefix")
    pos = start + len(w)
    returns = {img: b for b, img in zip(coding.source, coding.images)}
    by_pref = sorted(returns, key=len)
    out = []
    while True:
        matched = None
        for x in by_pref:
            if prefix.startswith(x, pos) and len(prefix) >= pos + len(x) + len(w):
                # confirm this really is the return block: w must follow
                if prefix.startswith(w, pos + len(x)):
                    matched = x
                    break
        if matched is None:
            break
        out.append(returns[matched])
        pos += len(matched)
    return "".join(out)


def uniform_recurrence_check(s: FactorSet, up_to: int) -> Verdict:
    """Every word of length <= up_to must have a certified-complete set of
    first returns; the first failure is reported with its blocking reason."""
    for n in range(up_to + 1):
        for w in sorted(s.of_length(n)):
            rd = return_words(s, w)
            if not rd.complete:
                reason = ("no length within depth forces an occurrence"
                          if rd.forcing_length is None
                          else "forcing length leaves no room inside the depth")
                return Verdict(False, up_to, w, reason)
    return Verdict(True, up_to)
