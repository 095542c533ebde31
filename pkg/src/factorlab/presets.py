"""Named fixtures: classic substitutions and interval exchanges."""

from __future__ import annotations

from fractions import Fraction

from .iet import IntervalExchange, Quad
from .morphisms import FixedPointSpec, Morphism, factor_set_of_fixed_point
from .words import FactorSet

FIBONACCI = Morphism.from_rules({"a": "ab", "b": "a"})
TRIBONACCI = Morphism.from_rules({"a": "ab", "b": "ac", "c": "a"})

# a -> ac, b -> bac, c -> cbac: a primitive substitution whose factor set is a
# tree set that is neither Sturmian nor an interval exchange set
TREE_TERNARY = Morphism.from_rules({"a": "ac", "b": "bac", "c": "cbac"})

# a -> ac, b -> bac, c -> cb: a tame substitution whose factor set is NOT a
# tree set (the empty word's extension graph has a cycle)
NONTREE_TERNARY = Morphism.from_rules({"a": "ac", "b": "bac", "c": "cb"})


def fibonacci_set(depth: int) -> FactorSet:
    return factor_set_of_fixed_point(FixedPointSpec(FIBONACCI, "a"), depth)


def tribonacci_set(depth: int) -> FactorSet:
    return factor_set_of_fixed_point(FixedPointSpec(TRIBONACCI, "a"), depth)


def tree_ternary_set(depth: int) -> FactorSet:
    return factor_set_of_fixed_point(FixedPointSpec(TREE_TERNARY, "a"), depth)


def nontree_ternary_set(depth: int) -> FactorSet:
    return factor_set_of_fixed_point(FixedPointSpec(NONTREE_TERNARY, "a"), depth)


def ab_star_set(depth: int) -> FactorSet:
    """Factors of the periodic word (ab)^inf: the classic non-tree fixture."""
    text = "ab" * (depth + 1)
    words = {""}
    for n in range(1, depth + 1):
        for i in range(2):
            words.add(text[i : i + n])
    return FactorSet("ab", depth, frozenset(words), complete=True,
                     source="explicit")


def golden_alpha() -> Quad:
    """(3 - sqrt(5)) / 2, the rotation angle of the Fibonacci coding."""
    return Quad.make(Fraction(3, 2), Fraction(-1, 2), 5)


def fibonacci_rotation() -> IntervalExchange:
    """Two-interval rotation by (3-sqrt(5))/2; codes the Fibonacci word."""
    alpha = golden_alpha()
    one = Quad.rational(1, 5)
    return IntervalExchange("ab", {"a": one - alpha, "b": alpha}, "ba",
                            minimal=True)


def division_iet() -> IntervalExchange:
    """Three-interval rotation by 2*(3-sqrt(5))/2 mod 1 on letters a,b,c."""
    alpha = golden_alpha()
    one = Quad.rational(1, 5)
    lengths = {"a": one - alpha - alpha, "b": alpha, "c": alpha}
    return IntervalExchange("abc", lengths, "bca", minimal=True)


def preset_set(name: str, depth: int) -> FactorSet:
    makers = {
        "fibonacci": fibonacci_set,
        "tribonacci": tribonacci_set,
        "tree-ternary": tree_ternary_set,
        "nontree-ternary": nontree_ternary_set,
        "ab-star": ab_star_set,
        "ex34": lambda d: division_iet().factor_set(d),
        "rotation": lambda d: fibonacci_rotation().factor_set(d),
    }
    if name not in makers:
        raise KeyError(f"unknown preset {name!r}; options: {sorted(makers)}")
    return makers[name](depth)


PRESET_MORPHISMS = {
    "fibonacci": FIBONACCI,
    "tribonacci": TRIBONACCI,
    "tree-ternary": TREE_TERNARY,
    "nontree-ternary": NONTREE_TERNARY,
}

PRESET_IETS = {
    "ex34": division_iet,
    "rotation": fibonacci_rotation,
}
