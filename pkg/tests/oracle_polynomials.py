"""Independent oracle for ordinals with finite exponents (below w^w).

Ordinals are plain dicts {exponent: coefficient} with integer exponents,
and the arithmetic is coded directly from the schoolbook rules for sums
of omega-powers, with no recursion and no shared code with the package
under test.
"""
from __future__ import annotations

Poly = dict[int, int]


def from_triple(a: int, b: int, c: int) -> Poly:
    poly = {}
    if a:
        poly[2] = a
    if b:
        poly[1] = b
    if c:
        poly[0] = c
    return poly


def degree(p: Poly) -> int:
    return max(p) if p else -1


def compare_poly(p: Poly, q: Poly) -> int:
    for k in sorted(set(p) | set(q), reverse=True):
        pc, qc = p.get(k, 0), q.get(k, 0)
        if pc != qc:
            return -1 if pc < qc else 1
    return 0


def add_poly(p: Poly, q: Poly) -> Poly:
    if not q:
        return dict(p)
    d = degree(q)
    out = {k: c for k, c in p.items() if k > d}
    out[d] = p.get(d, 0) + q[d]
    for k, c in q.items():
        if k < d:
            out[k] = c
    return out


def mul_poly(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return {}
    dp = degree(p)
    out: Poly = {}
    for k in sorted(q, reverse=True):
        c = q[k]
        if k > 0:
            piece = {dp + k: c}
        else:
            piece = dict(p)
            piece[dp] = p[dp] * c
        out = add_poly(out, piece)
    return out
