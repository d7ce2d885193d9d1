"""Finite posets and their order-theoretic combinatorics.

A poset is stored as an ordered tuple of opaque string ids plus the full set
of strict relations, kept transitively closed.  Covering relations, extremal
data, chains and the like are recomputed on demand; instances are immutable
and hashable, so they are safe to share.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import CycleError, PosetLoadError, SizeError

CANONICAL_BOUND = 8


def close_transitively(pairs):
    """Transitive closure of a set of ordered pairs.

    Raises CycleError if the closure would relate any element to itself
    (which is also how a violation of antisymmetry surfaces).  Idempotent.
    """
    elems = []
    seen = set()
    for p, q in pairs:
        for x in (p, q):
            if x not in seen:
                seen.add(x)
                elems.append(x)
    idx = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    up = [0] * n
    for p, q in pairs:
        up[idx[p]] |= 1 << idx[q]
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if up[i] & bit:
                up[i] |= up[k]
    closed = set()
    for i in range(n):
        if up[i] >> i & 1:
            raise CycleError(f"closure forces a cycle through {elems[i]!r}")
        m = up[i]
        while m:
            j = (m & -m).bit_length() - 1
            closed.add((elems[i], elems[j]))
            m &= m - 1
    return frozenset(closed)


class Poset:
    """Immutable finite poset: element ids plus transitively closed strict order."""

    __slots__ = ("elements", "strict_relation", "_idx", "_up", "_down", "_hash")

    def __init__(self, elements, pairs, _closed=False):
        elements = tuple(str(e) for e in elements)
        universe = set(elements)
        if len(universe) != len(elements):
            raise PosetLoadError("duplicate element ids")
        pair_set = {(str(p), str(q)) for p, q in pairs}
        for p, q in pair_set:
            if p not in universe or q not in universe:
                raise PosetLoadError(f"relation ({p!r},{q!r}) mentions unknown element")
            if p == q:
                raise PosetLoadError(f"reflexive pair ({p!r},{p!r}) not allowed")
        rel = frozenset(pair_set) if _closed else close_transitively(pair_set)
        idx = {e: i for i, e in enumerate(elements)}
        up = [0] * len(elements)
        down = [0] * len(elements)
        for p, q in rel:
            up[idx[p]] |= 1 << idx[q]
            down[idx[q]] |= 1 << idx[p]
        # validate even when the caller promised closure
        for i, e in enumerate(elements):
            m = up[i]
            while m:
                j = (m & -m).bit_length() - 1
                if up[j] >> i & 1:
                    raise CycleError(f"cycle through {e!r}")
                if up[j] & ~up[i]:
                    raise PosetLoadError("relation set is not transitively closed")
                m &= m - 1
        self.elements = elements
        self.strict_relation = rel
        self._idx = idx
        self._up = tuple(up)
        self._down = tuple(down)
        self._hash = hash((elements, rel))

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs, elements=None):
        """Build from any generating set of pairs; closure is applied."""
        pairs = [(str(p), str(q)) for p, q in pairs]
        if elements is None:
            elements = []
            seen = set()
            for p, q in pairs:
                for x in (p, q):
                    if x not in seen:
                        seen.add(x)
                        elements.append(x)
        return cls(elements, pairs)

    @classmethod
    def antichain(cls, n):
        return cls([str(i) for i in range(1, n + 1)], [])

    @classmethod
    def chain(cls, n):
        ids = [str(i) for i in range(1, n + 1)]
        return cls(ids, [(ids[i], ids[i + 1]) for i in range(n - 1)])

    def relabel(self, mapping):
        """New poset with ids renamed through `mapping` (must be injective)."""
        new_ids = [mapping[e] for e in self.elements]
        return Poset(new_ids, [(mapping[p], mapping[q]) for p, q in self.strict_relation], _closed=True)

    def dual(self):
        """Same elements with every strict relation reversed."""
        return Poset(self.elements, [(q, p) for p, q in self.strict_relation], _closed=True)

    # -- basic queries -------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (isinstance(other, Poset)
                and self.elements == other.elements
                and self.strict_relation == other.strict_relation)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Poset({list(self.elements)}, {sorted(self.strict_relation)})"

    def less(self, p, q):
        """Strict order test p ≺ q."""
        return bool(self._up[self._idx[p]] >> self._idx[q] & 1)

    def comparable(self, p, q):
        return p == q or self.less(p, q) or self.less(q, p)

    def up_set(self, p):
        """Elements strictly above p."""
        return frozenset(self._unpack(self._up[self._idx[p]]))

    def down_set(self, p):
        """Elements strictly below p."""
        return frozenset(self._unpack(self._down[self._idx[p]]))

    def _unpack(self, mask):
        while mask:
            j = (mask & -mask).bit_length() - 1
            yield self.elements[j]
            mask &= mask - 1

    # -- serialization -------------------------------------------------------

    def to_dict(self):
        return {"elements": list(self.elements),
                "relations": sorted(covering_relations(self))}

    @classmethod
    def from_dict(cls, data):
        try:
            elements = data["elements"]
            relations = data["relations"]
        except (KeyError, TypeError) as exc:
            raise PosetLoadError(f"poset file must carry 'elements' and 'relations': {exc}")
        return cls(elements, [tuple(pair) for pair in relations])

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


@dataclass(frozen=True)
class ExtremalData:
    minimals: frozenset
    maximals: frozenset
    ext: frozenset
    rel_ext: frozenset


def covering_relations(poset):
    """Pairs (x, y) with x ≺ y and nothing strictly between."""
    covers = set()
    idx = poset._idx
    for p, q in poset.strict_relation:
        between = poset._up[idx[p]] & poset._down[idx[q]]
        if not between:
            covers.add((p, q))
    return frozenset(covers)


def extremal_data(poset):
    minimals = frozenset(e for e in poset.elements if not poset._down[poset._idx[e]])
    maximals = frozenset(e for e in poset.elements if not poset._up[poset._idx[e]])
    ext = minimals | maximals
    rel_ext = frozenset((p, q) for p, q in poset.strict_relation if p in ext and q in ext)
    return ExtremalData(minimals, maximals, ext, rel_ext)


def linear_extension(poset):
    """Topological order of the elements, ties broken by stored element order."""
    placed = 0
    order = []
    idx = poset._idx
    remaining = list(poset.elements)
    while remaining:
        for e in remaining:
            if poset._down[idx[e]] & ~placed == 0:
                order.append(e)
                placed |= 1 << idx[e]
                remaining.remove(e)
                break
        else:
            raise CycleError("no linear extension exists")  # unreachable for valid posets
    return tuple(order)


def height(poset):
    """One less than the largest cardinality of a chain."""
    if not poset.elements:
        raise SizeError("height of an empty poset is undefined")
    idx = poset._idx
    depth = {}
    for e in linear_extension(poset):
        below = poset.down_set(e)
        depth[e] = 1 + max((depth[b] for b in below), default=0)
    return max(depth.values()) - 1


def is_ideal(poset, subset):
    """Downward-closed test."""
    subset = set(subset)
    _check_subset(poset, subset)
    return all(poset.down_set(e) <= subset for e in subset)


def is_filter(poset, subset):
    """Upward-closed test."""
    subset = set(subset)
    _check_subset(poset, subset)
    return all(poset.up_set(e) <= subset for e in subset)


def _check_subset(poset, subset):
    extra = subset - set(poset.elements)
    if extra:
        raise PosetLoadError(f"subset mentions unknown elements {sorted(extra)}")


def is_connected(poset):
    """Connectivity of the comparability graph."""
    n = len(poset.elements)
    if n == 0:
        raise SizeError("connectivity of an empty poset is undefined")
    adj = [poset._up[i] | poset._down[i] for i in range(n)]
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        while frontier:
            i = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            nxt |= adj[i] & ~seen
        seen |= nxt
        frontier = nxt
    return seen == (1 << n) - 1


# -- canonical form ----------------------------------------------------------

def _refined_invariants(poset):
    """Per-element isomorphism invariants sharpened by two neighbourhood rounds."""
    n = len(poset.elements)
    up, down = poset._up, poset._down
    inv = [(bin(down[i]).count("1"), bin(up[i]).count("1")) for i in range(n)]
    for _ in range(2):
        nxt = []
        for i in range(n):
            ups = sorted(inv[j] for j in range(n) if up[i] >> j & 1)
            downs = sorted(inv[j] for j in range(n) if down[i] >> j & 1)
            nxt.append((inv[i], tuple(downs), tuple(ups)))
        inv = nxt
    return inv


def canonical_form(poset):
    """Minimal relation-matrix encoding over element permutations.

    Equal encodings characterize isomorphic posets.  The search is restricted
    to permutations preserving refined degree invariants, which is sound
    because isomorphisms preserve them; within invariant classes all orders
    are tried, so the bound below is the worst case, not the typical cost.
    """
    n = len(poset.elements)
    if n > CANONICAL_BOUND:
        raise SizeError(f"canonical form is bounded at {CANONICAL_BOUND} elements, got {n}")
    if n == 0:
        return (0, 0)
    inv = _refined_invariants(poset)
    blocks = {}
    for i, key in enumerate(inv):
        blocks.setdefault(key, []).append(i)
    ordered_blocks = [blocks[k] for k in sorted(blocks)]
    up = poset._up
    best = None
    for parts in itertools.product(*(itertools.permutations(b) for b in ordered_blocks)):
        perm = [i for part in parts for i in part]  # perm[new] = old
        mask = 0
        for new_i, old_i in enumerate(perm):
            row = up[old_i]
            for new_j, old_j in enumerate(perm):
                if row >> old_j & 1:
                    mask |= 1 << (new_i * n + new_j)
        if best is None or mask < best:
            best = mask
    return (n, best)


def are_isomorphic_bruteforce(p, q):
    """Reference isomorphism test by trying every bijection; tests only."""
    if len(p) != len(q) or len(p.strict_relation) != len(q.strict_relation):
        return False
    for perm in itertools.permutations(q.elements):
        f = dict(zip(p.elements, perm))
        if all((f[a], f[b]) in q.strict_relation for a, b in p.strict_relation):
            return True
    return False
