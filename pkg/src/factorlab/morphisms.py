"""Substitutions on words, fixed points and certified factor-set generation."""

from __future__ import annotations

from dataclasses import dataclass

from .words import FactorSet, factors


class AlphabetMismatchError(Exception):
    pass


class NonGrowingSeedError(Exception):
    pass


@dataclass(frozen=True)
class Morphism:
    """A letter-to-word substitution; images must be nonempty (nonerasing)."""

    source: str
    target: str
    images: tuple[str, ...]  # indexed parallel to source

    def __post_init__(self):
        if len(self.images) != len(self.source):
            raise ValueError("one image per source letter required")
        for img in self.images:
            if not img:
                raise ValueError("erasing morphisms are not supported")
            if any(c not in self.target for c in img):
                raise AlphabetMismatchError(f"image {img!r} not over {self.target!r}")

    @staticmethod
    def from_rules(rules: dict[str, str], source: str | None = None,
                   target: str | None = None) -> "Morphism":
        src = source if source is not None else "".join(sorted(rules))
        tgt = target if target is not None else "".join(
            sorted({c for img in rules.values() for c in img}))
        return Morphism(src, tgt, tuple(rules[a] for a in src))

    @staticmethod
    def parse(text: str, source: str | None = None,
              target: str | None = None) -> "Morphism":
        """Parse the 'a->ab; b->a' rule format (whitespace-insensitive)."""
        rules = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            lhs, _, rhs = chunk.partition("->")
            lhs, rhs = lhs.strip(), rhs.strip()
            if len(lhs) != 1 or not rhs:
                raise ValueError(f"bad rule {chunk!r}")
            rules[lhs] = rhs
        return Morphism.from_rules(rules, source, target)

    @staticmethod
    def identity(alphabet: str) -> "Morphism":
        return Morphism(alphabet, alphabet, tuple(alphabet))

    def rules(self) -> dict[str, str]:
        return dict(zip(self.source, self.images))

    def __call__(self, w: str) -> str:
        idx = {a: i for i, a in enumerate(self.source)}
        try:
            return "".join(self.images[idx[c]] for c in w)
        except KeyError as exc:
            raise AlphabetMismatchError(f"{w!r} not over {self.source!r}") from exc

    def then(self, inner: "Morphism") -> "Morphism":
        """Composition self ∘ inner: first inner, then self."""
        if inner.target != self.source:
            raise AlphabetMismatchError(
                f"cannot compose: inner target {inner.target!r} != source {self.source!r}")
        return Morphism(inner.source, self.target,
                        tuple(self(img) for img in inner.images))

    def format_rules(self) -> str:
        return "; ".join(f"{a}->{img}" for a, img in zip(self.source, self.images))


def compose(*ms: Morphism) -> Morphism:
    """compose(f, g, h) = f ∘ g ∘ h (rightmost applied first)."""
    out = ms[0]
    for m in ms[1:]:
        out = out.then(m)
    return out


def is_primitive(m: Morphism, k_max: int = 20) -> int | None:
    """Least k <= k_max with every letter occurring in every f^k(a), else None.

    Works on the boolean occurrence matrix, not counts.
    """
    if m.source != m.target:
        raise AlphabetMismatchError("primitivity needs an endomorphism")
    n = len(m.source)
    idx = {a: i for i, a in enumerate(m.source)}
    base = [[False] * n for _ in range(n)]
    for i, img in enumerate(m.images):
        for c in img:
            base[i][idx[c]] = True
    reach = base
    for k in range(1, k_max + 1):
        if all(all(row) for row in reach):
            return k
        reach = [[any(reach[i][j] and base[j][l] for j in range(n))
                  for l in range(n)] for i in range(n)]
    return None


@dataclass(frozen=True)
class FixedPointSpec:
    """An endomorphism with a seed letter whose image starts with the seed."""

    morphism: Morphism
    seed: str

    def __post_init__(self):
        m = self.morphism
        if m.source != m.target:
            raise ValueError("fixed points need an endomorphism")
        if not m(self.seed).startswith(self.seed):
            raise ValueError("image of the seed must begin with the seed")

    def prefix(self, n: int) -> str:
        """Length-n prefix of the one-sided fixed point from the seed."""
        m = self.morphism
        w = self.seed
        while len(w) < n:
            nxt = m(w)
            if len(nxt) <= len(w):
                raise NonGrowingSeedError(
                    f"iterates of {self.seed!r} do not grow under {m.format_rules()}")
            w = nxt
        return w[:n]


STABILIZATION_FACTOR = 4  # expand to at least this multiple of the depth


def factor_set_of_fixed_point(spec: FixedPointSpec, depth: int,
                              primitivity_bound: int = 20) -> FactorSet:
    """Truncated factor set of the fixed point, with a completeness certificate.

    The prefix is expanded until it is at least STABILIZATION_FACTOR * depth
    long and the per-length factor counts are identical across two successive
    expansions.  For a primitive morphism every factor of the fixed point
    occurs in some iterate of the seed, so stabilization certifies exactness;
    without primitivity the set is returned uncertified.
    """
    m = spec.morphism
    primitive = is_primitive(m, primitivity_bound) is not None
    w = spec.seed
    prev: frozenset[str] | None = None
    while True:
        nxt = m(w)
        if len(nxt) <= len(w):
            raise NonGrowingSeedError("seed iterates do not grow")
        w = nxt
        if len(w) < STABILIZATION_FACTOR * max(depth, 1):
            continue
        cur = frozenset(factors(w, depth))
        if prev is not None and cur == prev:
            break
        prev = cur
    return FactorSet(m.source, depth, cur,
                     complete=primitive, source="morphic")


def episturmian_morphism(a: str, alphabet: str) -> Morphism:
    """The substitution fixing a and prefixing a to every other letter."""
    if a not in alphabet:
        raise ValueError(f"{a!r} not in {alphabet!r}")
    return Morphism(alphabet, alphabet,
                    tuple(c if c == a else a + c for c in alphabet))
