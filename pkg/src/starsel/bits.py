"""Bitmask encodings for subsets of a ground set ``{0..n-1}`` and families of them.

A subset is an ``int`` whose bit ``i`` is set iff ``i`` is a member. A family is
a ``frozenset`` of such masks. Inside the search, a family is also coded as a
single ``int`` with bit ``m`` set iff the subset with mask ``m`` is a member,
which turns family union into ``|`` and family inclusion into ``a & ~b == 0``.
"""

from typing import FrozenSet, Iterable, List

Family = FrozenSet[int]

MAX_N = 16


def full_mask(n: int) -> int:
    return (1 << n) - 1


def subset(elems: Iterable[int]) -> int:
    mask = 0
    for e in elems:
        mask |= 1 << e
    return mask


def elements(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def family(sets: Iterable[Iterable[int]]) -> Family:
    """Build a normalized family from element lists, e.g. ``family([[0, 1], [2]])``."""
    return frozenset(subset(s) for s in sets)


def canonical(fam: Iterable[int]) -> tuple:
    """Canonical encoding of a family: its member masks in ascending order."""
    return tuple(sorted(set(fam)))


def family_to_lists(fam: Iterable[int]) -> List[List[int]]:
    return [elements(m) for m in canonical(fam)]


def family_union(fam: Iterable[int]) -> int:
    out = 0
    for m in fam:
        out |= m
    return out


def is_cover(fam: Iterable[int], n: int) -> bool:
    return family_union(fam) == full_mask(n)


def complement_mask(mask: int, n: int) -> int:
    return full_mask(n) ^ mask


def encode(fam: Iterable[int]) -> int:
    code = 0
    for m in fam:
        code |= 1 << m
    return code


def decode(code: int) -> Family:
    return frozenset(elements(code))


def all_families(n: int):
    """Yield every family over ``{0..n-1}`` in ascending code order."""
    for code in range(1 << (1 << n)):
        yield decode(code)


def format_subset(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"


def format_family(fam: Iterable[int]) -> str:
    return "{" + ", ".join(format_subset(m) for m in canonical(fam)) + "}"
