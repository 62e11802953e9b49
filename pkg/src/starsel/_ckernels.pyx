# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels. Same contract as ``_pykernels``."""

from libc.stdint cimport uint32_t, uint64_t
from libc.stdlib cimport malloc, calloc, free
from libcpp.vector cimport vector
from libcpp.unordered_set cimport unordered_set

from starsel import _pykernels

DEF MAX_WIDTH = 24


cdef int _width(vector[uint32_t]& v):
    cdef uint32_t acc = 0
    cdef size_t i
    for i in range(v.size()):
        acc |= v[i]
    cdef int w = 0
    while acc:
        acc >>= 1
        w += 1
    return w


cdef bint _load(object masks, vector[uint32_t]& out):
    for m in masks:
        if m < 0 or m >= (1 << MAX_WIDTH):
            return False
        out.push_back(<uint32_t>m)
    return True


def star(a, masks):
    cdef vector[uint32_t] v
    if a < 0 or a >= (1 << MAX_WIDTH) or not _load(masks, v):
        return _pykernels.star(a, masks)
    cdef uint32_t aa = <uint32_t>a
    cdef uint32_t out = 0
    cdef size_t i
    for i in range(v.size()):
        if v[i] & aa:
            out |= v[i]
    return out


cdef list _closure(object masks, bint use_or):
    cdef vector[uint32_t] v
    if not _load(masks, v):
        return None
    cdef int w = _width(v)
    cdef size_t size = (<size_t>1) << w
    cdef unsigned char* seen = <unsigned char*>calloc(size, 1)
    cdef vector[uint32_t] found
    cdef size_t i, j, cur
    cdef uint32_t m, t
    try:
        for i in range(v.size()):
            m = v[i]
            cur = found.size()
            for j in range(cur):
                t = (found[j] | m) if use_or else (found[j] & m)
                if not seen[t]:
                    seen[t] = 1
                    found.push_back(t)
            if not seen[m]:
                seen[m] = 1
                found.push_back(m)
        return [t for t in range(size) if seen[t]]
    finally:
        free(seen)


def union_closure(masks):
    out = _closure(masks, True)
    return _pykernels.union_closure(masks) if out is None else out


def intersection_closure(masks):
    out = _closure(masks, False)
    return _pykernels.intersection_closure(masks) if out is None else out


def refines(a_masks, b_masks):
    cdef vector[uint32_t] a, b
    if not _load(a_masks, a) or not _load(b_masks, b):
        return _pykernels.refines(a_masks, b_masks)
    cdef size_t i, j
    cdef bint ok
    for i in range(a.size()):
        ok = False
        for j in range(b.size()):
            if not (a[i] & ~b[j]):
                ok = True
                break
        if not ok:
            return False
    return True


def sweep_or(items):
    cdef Py_ssize_t k = len(items)
    if k > 24 or any(x < 0 or x >= (1 << 64) for x in items):
        return _pykernels.sweep_or(items)
    cdef vector[uint64_t] it
    for x in items:
        it.push_back(<uint64_t>x)
    cdef size_t total = (<size_t>1) << k
    cdef uint64_t* codes = <uint64_t*>malloc(total * sizeof(uint64_t))
    cdef unordered_set[uint64_t] seen
    cdef size_t s, low
    cdef int j
    cdef uint64_t c
    cdef vector[uint64_t] vals
    cdef vector[size_t] idx
    try:
        codes[0] = 0
        seen.insert(0)
        vals.push_back(0)
        idx.push_back(0)
        for s in range(1, total):
            low = s & (~s + 1)
            j = 0
            while (low >> j) != 1:
                j += 1
            c = codes[s ^ low] | it[j]
            codes[s] = c
            if seen.find(c) == seen.end():
                seen.insert(c)
                vals.push_back(c)
                idx.push_back(s)
        return [(vals[s], idx[s]) for s in range(vals.size())]
    finally:
        free(codes)
