"""Finite permutations as tuples.

A permutation of {0, ..., n-1} is a tuple ``p`` with ``p[i]`` the image of
``i``.  Composition is right-to-left: ``compose(p, q)`` applies ``q`` first.
Block sums and block permutations are the two operations symmetric operads
are built from.
"""

from __future__ import annotations

import itertools

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """p after q: (p . q)[i] = p[q[i]]."""
    if len(p) != len(q):
        raise ValueError(f"cannot compose permutations of sizes {len(p)} and {len(q)}")
    return tuple(p[q[i]] for i in range(len(q)))


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def is_perm(p: Perm) -> bool:
    return sorted(p) == list(range(len(p)))


def all_perms(n: int) -> list[Perm]:
    """All of Sigma_n in lexicographic order (deterministic)."""
    return [tuple(p) for p in itertools.permutations(range(n))]


def transpositions(n: int) -> list[Perm]:
    """Adjacent transpositions, a generating set of Sigma_n."""
    out = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        out.append(tuple(p))
    return out


def block_sum(ps: tuple[Perm, ...] | list[Perm]) -> Perm:
    """tau_1 + ... + tau_k acting on consecutive blocks."""
    out: list[int] = []
    offset = 0
    for p in ps:
        out.extend(offset + v for v in p)
        offset += len(p)
    return tuple(out)


def block_perm(sigma: Perm, sizes: tuple[int, ...] | list[int]) -> Perm:
    """Permute consecutive blocks of the given sizes according to sigma.

    Block s (of size sizes[s]) moves, order-preservingly, to the slot
    sigma[s]; the output slot u therefore hosts block sigma^{-1}(u).
    """
    k = len(sigma)
    if k != len(sizes):
        raise ValueError("block_perm: sigma and sizes must have equal length")
    inv = inverse(sigma)
    # offset of output slot u
    out_offsets = []
    acc = 0
    for u in range(k):
        out_offsets.append(acc)
        acc += sizes[inv[u]]
    n = sum(sizes)
    out = [0] * n
    in_offset = 0
    for s in range(k):
        for t in range(sizes[s]):
            out[in_offset + t] = out_offsets[sigma[s]] + t
        in_offset += sizes[s]
    return tuple(out)
