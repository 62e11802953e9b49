"""Pure-Python kernels. Same contract as the compiled ``_ckernels`` module."""


def star(a, masks):
    out = 0
    for m in masks:
        if m & a:
            out |= m
    return out


def union_closure(masks):
    """Sorted distinct unions of all nonempty subfamilies of ``masks``."""
    seen = set()
    for m in masks:
        seen |= {s | m for s in seen}
        seen.add(m)
    return sorted(seen)


def intersection_closure(masks):
    """Sorted distinct intersections of all nonempty subfamilies of ``masks``."""
    seen = set()
    for m in masks:
        seen |= {s & m for s in seen}
        seen.add(m)
    return sorted(seen)


def refines(a_masks, b_masks):
    b_masks = list(b_masks)
    for x in a_masks:
        for y in b_masks:
            if not x & ~y:
                break
        else:
            return False
    return True


def sweep_or(items):
    """OR over every subfamily of ``items``, indexed in binary counting order.

    Returns ``(value, index)`` pairs for each distinct value, in order of first
    appearance; bit ``j`` of ``index`` set means ``items[j]`` was included.
    """
    k = len(items)
    codes = [0] * (1 << k)
    seen = {0}
    out = [(0, 0)]
    for s in range(1, 1 << k):
        low = s & -s
        c = codes[s ^ low] | items[low.bit_length() - 1]
        codes[s] = c
        if c not in seen:
            seen.add(c)
            out.append((c, s))
    return out
