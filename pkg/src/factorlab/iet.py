"""Exact interval exchange transformations over a quadratic field Q(sqrt(d)).

All arithmetic is rational: a value is p + q*sqrt(d) with p, q fractions and a
single square-free radicand d shared by the whole transformation.  Comparisons
are decided by sign computations on rationals, never floating point, so
interval emptiness and orbit collisions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .words import FactorSet


class OutOfDomainError(Exception):
    pass


@dataclass(frozen=True)
class Quad:
    """p + q*sqrt(d) with exact rational p, q; d a fixed nonnegative integer."""

    p: Fraction
    q: Fraction
    d: int

    @staticmethod
    def rational(x, d: int = 0) -> "Quad":
        return Quad(Fraction(x), Fraction(0), d)

    @staticmethod
    def make(p, q, d: int) -> "Quad":
        return Quad(Fraction(p), Fraction(q), d)

    def _coerce(self, other) -> "Quad":
        if isinstance(other, Quad):
            if other.d != self.d and other.q != 0 and self.q != 0:
                raise ValueError(f"mixed radicands {self.d} and {other.d}")
            return other
        return Quad(Fraction(other), Fraction(0), self.d)

    def __add__(self, other) -> "Quad":
        o = self._coerce(other)
        return Quad(self.p + o.p, self.q + o.q, max(self.d, o.d))

    __radd__ = __add__

    def __sub__(self, other) -> "Quad":
        o = self._coerce(other)
        return Quad(self.p - o.p, self.q - o.q, max(self.d, o.d))

    def __rsub__(self, other) -> "Quad":
        return self._coerce(other) - self

    def __neg__(self) -> "Quad":
        return Quad(-self.p, -self.q, self.d)

    def __mul__(self, other) -> "Quad":
        o = self._coerce(other)
        d = max(self.d, o.d)
        return Quad(self.p * o.p + self.q * o.q * d,
                    self.p * o.q + self.q * o.p, d)

    __rmul__ = __mul__

    def sign(self) -> int:
        """Sign of p + q*sqrt(d), decided on rationals only."""
        p, q, d = self.p, self.q, self.d
        if q == 0 or d == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return (q > 0) - (q < 0)
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p^2 with q^2 d; sign follows the larger term
        lhs, rhs = p * p, q * q * d
        if lhs == rhs:
            return 0
        big_is_p = lhs > rhs
        return (1 if p > 0 else -1) if big_is_p else (1 if q > 0 else -1)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        return (self - o).sign() == 0

    def __lt__(self, other) -> bool:
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - self._coerce(other)).sign() >= 0

    def __hash__(self) -> int:
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * self.d ** 0.5

    def __repr__(self) -> str:
        if self.q == 0:
            return str(self.p)
        return f"{self.p}+{self.q}*sqrt({self.d})"


@dataclass(frozen=True)
class SemiInterval:
    """[lo, hi); empty when hi <= lo."""

    lo: Quad
    hi: Quad

    @property
    def empty(self) -> bool:
        return self.hi <= self.lo

    @property
    def length(self) -> Quad:
        if self.empty:
            return Quad.rational(0, self.lo.d)
        return self.hi - self.lo

    def __contains__(self, z: Quad) -> bool:
        return self.lo <= z < self.hi

    def intersect(self, other: "SemiInterval") -> "SemiInterval":
        lo = self.lo if self.lo >= other.lo else other.lo
        hi = self.hi if self.hi <= other.hi else other.hi
        return SemiInterval(lo, hi)

    def shift(self, t: Quad) -> "SemiInterval":
        return SemiInterval(self.lo + t, self.hi + t)


class IntervalExchange:
    """Piecewise translation of [0,1) permuting an ordered partition.

    ``lengths`` maps each letter to a positive Quad; the alphabet order is the
    first order, ``order2`` (a string listing all letters) is the second.
    ``minimal`` asserts minimality (e.g. irrational rotation angle); it feeds
    the completeness certificate of generated factor sets and is not verified
    beyond the bounded regularity evidence.
    """

    def __init__(self, alphabet: str, lengths: dict[str, Quad], order2: str,
                 minimal: bool = False):
        if sorted(order2) != sorted(alphabet):
            raise ValueError("order2 must list exactly the alphabet letters")
        total = None
        for a in alphabet:
            lam = lengths[a]
            if lam.sign() <= 0:
                raise ValueError(f"length of {a!r} not positive")
            total = lam if total is None else total + lam
        if total != 1:
            raise ValueError("lengths must sum to 1")
        self.alphabet = alphabet
        self.order2 = order2
        self.lengths = dict(lengths)
        self.minimal = minimal
        d = max(lengths[a].d for a in alphabet)
        zero = Quad.rational(0, d)
        self.mu: dict[str, Quad] = {}
        self.gamma: dict[str, Quad] = {}
        acc = zero
        for a in alphabet:
            self.gamma[a] = acc
            acc = acc + lengths[a]
            self.mu[a] = acc
        self.nu: dict[str, Quad] = {}
        self.delta: dict[str, Quad] = {}
        acc = zero
        for a in order2:
            self.delta[a] = acc
            acc = acc + lengths[a]
            self.nu[a] = acc
        self.translation = {a: self.nu[a] - self.mu[a] for a in alphabet}

    def domain_interval(self, a: str) -> SemiInterval:
        return SemiInterval(self.gamma[a], self.mu[a])

    def range_interval(self, a: str) -> SemiInterval:
        return SemiInterval(self.delta[a], self.nu[a])

    def letter_at(self, z: Quad) -> str:
        for a in self.alphabet:
            if z in self.domain_interval(a):
                return a
        raise OutOfDomainError(repr(z))

    def __call__(self, z: Quad) -> Quad:
        return z + self.translation[self.letter_at(z)]

    def inverse(self, z: Quad) -> Quad:
        for a in self.alphabet:
            if z in self.range_interval(a):
                return z - self.translation[a]
        raise OutOfDomainError(repr(z))

    def natural_coding(self, z: Quad, m: int) -> str:
        out = []
        for _ in range(m):
            a = self.letter_at(z)
            out.append(a)
            z = z + self.translation[a]
        return "".join(out)

    def word_interval(self, w: str) -> SemiInterval:
        """The semi-interval of points whose coding starts with w (w nonempty)."""
        if not w:
            raise ValueError("word_interval needs a nonempty word")
        iv = self.domain_interval(w[-1])
        for a in reversed(w[:-1]):
            # I_{a u} = I_a ∩ T^{-1}(I_u); pull back through the translation on I_a
            iv = iv.intersect(self.range_interval(a)).shift(-self.translation[a])
        return iv

    def factor_set(self, depth: int) -> FactorSet:
        """BFS over words whose interval is nonempty; exact truncation when
        the transformation is minimal (certificate downgraded otherwise)."""
        words = {""}
        frontier = [""]
        for _ in range(depth):
            nxt = []
            for w in frontier:
                for a in self.alphabet:
                    wa = w + a
                    if not self.word_interval(wa).empty:
                        words.add(wa)
                        nxt.append(wa)
            frontier = nxt
        return FactorSet(self.alphabet, depth, frozenset(words),
                         complete=self.minimal, source="iet")

    def separation_points(self) -> list[Quad]:
        return [self.mu[a] for a in self.alphabet[:-1]]

    def regularity_evidence(self, n_iterations: int):
        """Iterate the nonzero separation points; report any exact coincidence.

        Returns (True, None) when no collision shows up within the bound, else
        (False, witness-description).
        """
        seen: dict[Quad, tuple[int, int]] = {}
        for i, z in enumerate(self.separation_points()):
            for k in range(n_iterations + 1):
                if z in seen:
                    j, l = seen[z]
                    return False, (f"T^{k}(mu_{i + 1}) = T^{l}(mu_{j + 1})")
                seen[z] = (i, k)
                z = self(z)
        return True, None

    def boundary_table(self) -> dict:
        return {
            a: {
                "gamma": repr(self.gamma[a]),
                "mu": repr(self.mu[a]),
                "delta": repr(self.delta[a]),
                "nu": repr(self.nu[a]),
                "translation": repr(self.translation[a]),
            }
            for a in self.alphabet
        }


def parse_iet(text: str, minimal: bool = False) -> IntervalExchange:
    """Parse 'd=5; order2=bca; a=p+q*sqrt(d); b=...' into an IntervalExchange.

    Each length is given as 'p' or 'p+q*sqrt(d)' with rational p, q.
    """
    d = 0
    order2 = None
    lengths: dict[str, Quad] = {}
    letters = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, _, val = chunk.partition("=")
        key, val = key.strip(), val.strip().replace(" ", "")
        if key == "d":
            d = int(val)
        elif key == "order2":
            order2 = val
        else:
            if len(key) != 1:
                raise ValueError(f"bad letter {key!r}")
            letters.append(key)
            lengths[key] = _parse_quad(val, d)
    alphabet = "".join(letters)
    if order2 is None:
        order2 = alphabet
    lengths = {a: Quad(v.p, v.q, d) for a, v in lengths.items()}
    return IntervalExchange(alphabet, lengths, order2, minimal=minimal)


def _parse_quad(val: str, d: int) -> Quad:
    q = Fraction(0)
    body = val
    if "sqrt" in body:
        # split  p+q*sqrt(d)  /  q*sqrt(d)  /  p-q*sqrt(d)
        head, _, _ = body.partition("*sqrt")
        cut = max(head.rfind("+", 1), head.rfind("-", 1))
        if cut <= 0:
            p_part, q_part = "0", head
        else:
            p_part, q_part = head[:cut], head[cut:]
        q = Fraction(q_part if q_part not in ("+", "-") else q_part + "1")
        return Quad(Fraction(p_part), q, d)
    return Quad(Fraction(body), q, d)
