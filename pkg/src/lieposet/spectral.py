"""Small functionals, principal elements, and the ad-action spectrum.

The support of an all-ones functional draws a directed graph on the poset;
when that graph is a spanning tree of the comparability graph the functional
is called small, and its principal element is diagonal with entries read off
a tree traversal or, under the sink/source conditions, a closed form.

Spectra are exact.  For any trace-zero element x = D + N (diagonal plus
strictly upper part), ad(x) is triangular in the basis ordered by interval
containment: ad(N) strictly increases the interval [p, q] of a root vector
while ad(D) is diagonal on it, and Cartan vectors map into roots only.  The
characteristic polynomial is therefore λ^(|P|−1) · Π (λ − (d_p − d_q)) over
strict pairs, with d the diagonal of x.  A dense determinant route is kept
as an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import algebra as alg
from . import linalg
from .errors import ConditionError, FormError, NotFrobeniusError, NotSmallError
from .poset import is_filter, is_ideal


@dataclass(frozen=True)
class FunctionalGraph:
    vertices: tuple
    edges: frozenset  # directed (p, q) with p ≺ q


@dataclass(frozen=True)
class SinkSourcePartition:
    sinks: frozenset      # U: no outgoing edge
    sources: frozenset    # D: no incoming edge
    interior: frozenset   # B: neither
    u_is_filter: bool
    d_is_ideal: bool

    @property
    def b_empty(self):
        return not self.interior

    @property
    def theorem_conditions_hold(self):
        return self.u_is_filter and self.d_is_ideal and self.b_empty


class PrincipalElement:
    """Preimage of a Frobenius functional under x ↦ F([x, −]).

    Stored as a coefficient map over matrix-unit pairs with the diagonal
    included; `diagonal` collapses to the element → coefficient map used by
    the closed form, and `is_diagonal` tells whether the strict part vanishes.
    """

    def __init__(self, poset, pair_coords):
        self.poset = poset
        self.pair_coords = {k: Fraction(v) for k, v in pair_coords.items() if Fraction(v)}

    @property
    def is_diagonal(self):
        return all(p == q for p, q in self.pair_coords)

    def diagonal(self):
        return {e: self.pair_coords.get((e, e), Fraction(0)) for e in self.poset.elements}

    def basis_coords(self, algebra):
        return algebra.pairs_to_basis(self.pair_coords)

    def __eq__(self, other):
        return (isinstance(other, PrincipalElement)
                and self.poset == other.poset
                and self.pair_coords == other.pair_coords)

    def __repr__(self):
        return f"PrincipalElement({sorted(self.pair_coords.items())})"


@dataclass(frozen=True)
class SpectrumReport:
    dim: int
    char_poly: tuple          # descending Fraction coefficients of det(λI − ad)
    eigenvalues: tuple        # sorted (value, multiplicity) pairs over rational roots
    complete: bool            # all roots accounted for
    is_binary: bool
    zero_mult: int
    one_mult: int

    def to_dict(self):
        return {
            "dim": self.dim,
            "char_poly": [str(c) for c in self.char_poly],
            "zero_mult": self.zero_mult,
            "one_mult": self.one_mult,
            "binary": self.is_binary,
        }


def functional_graph(poset, functional):
    functional.validate_on(poset)
    return FunctionalGraph(vertices=poset.elements, edges=frozenset(functional.support))


def is_small(poset, functional):
    """True iff the support graph is a spanning tree of the comparability graph."""
    if not functional.is_all_ones:
        raise FormError("smallness is defined for all-ones functionals")
    functional.validate_on(poset)
    edges = functional.support
    n = len(poset.elements)
    if len(edges) != n - 1:
        return False
    parent = {e: e for e in poset.elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merged = 0
    for p, q in edges:
        rp, rq = find(p), find(q)
        if rp == rq:
            return False
        parent[rp] = rq
        merged += 1
    return merged == n - 1


def partition(poset, functional):
    """Sink/source split of the support graph, with the filter/ideal checks."""
    if not is_small(poset, functional):
        raise NotSmallError("support graph is not a spanning tree")
    outs = {e: 0 for e in poset.elements}
    ins = {e: 0 for e in poset.elements}
    for p, q in functional.support:
        outs[p] += 1
        ins[q] += 1
    sinks = frozenset(e for e in poset.elements if outs[e] == 0)
    sources = frozenset(e for e in poset.elements if ins[e] == 0)
    interior = frozenset(e for e in poset.elements if e not in sinks and e not in sources)
    return SinkSourcePartition(
        sinks=sinks,
        sources=sources,
        interior=interior,
        u_is_filter=is_filter(poset, sinks),
        d_is_ideal=is_ideal(poset, sources),
    )


def _require_frobenius(poset, functional, algebra=None):
    g = algebra if algebra is not None else alg.build_algebra(poset)
    if alg.kirillov_matrix(g, functional).rank() != g.dim:
        raise NotFrobeniusError("functional has a nonzero kernel")
    return g


def principal_small(poset, functional, algebra=None):
    """Diagonal principal element of a small Frobenius functional.

    Solves c_p − c_q = 1 per support edge plus Σ c_p = 0 by propagating
    along the support tree and shifting by the mean; with a tree support the
    system is never inconsistent, so no contradiction branch exists here.
    """
    if not is_small(poset, functional):
        raise NotSmallError("principal-element tree solve needs a small functional")
    _require_frobenius(poset, functional, algebra)
    adj = {e: [] for e in poset.elements}
    for p, q in functional.support:
        adj[p].append((q, -1))  # walking source→sink drops the value by 1
        adj[q].append((p, 1))
    rel = {poset.elements[0]: Fraction(0)}
    stack = [poset.elements[0]]
    while stack:
        x = stack.pop()
        for y, delta in adj[x]:
            if y not in rel:
                rel[y] = rel[x] + delta
                stack.append(y)
    shift = Fraction(sum(rel.values()), len(rel))
    diag = {(e, e): rel[e] - shift for e in poset.elements}
    return PrincipalElement(poset, diag)


def principal_closed_form(poset, functional, algebra=None):
    """Closed-form diagonal principal element: |U|/|P| on sources, −|D|/|P| on sinks."""
    if not functional.is_all_ones:
        raise ConditionError("closed form needs an all-ones functional")
    if not is_small(poset, functional):
        raise ConditionError("closed form needs a small functional")
    part = partition(poset, functional)
    if not part.theorem_conditions_hold:
        raise ConditionError(
            "closed form needs sinks to form a filter, sources an ideal, and no interior vertices")
    try:
        _require_frobenius(poset, functional, algebra)
    except NotFrobeniusError as exc:
        raise ConditionError(str(exc))
    n = len(poset.elements)
    up = Fraction(len(part.sinks), n)
    down = Fraction(-len(part.sources), n)
    diag = {}
    for e in poset.elements:
        diag[(e, e)] = up if e in part.sources else down
    return PrincipalElement(poset, diag)


def principal_general(algebra, functional):
    """Principal element of any Frobenius functional by solving the skew system."""
    functional.validate_on(algebra.poset)
    m = alg.kirillov_matrix(algebra, functional)
    rhs = []
    for b in algebra.basis:
        if b.kind == "root":
            rhs.append(functional.coefficients.get((b.p, b.q), Fraction(0)))
        else:
            rhs.append(Fraction(0))  # off-diagonal functionals vanish on the Cartan part
    transposed = [[m.rows[i][j] for i in range(algebra.dim)] for j in range(algebra.dim)]
    sol = linalg.solve_unique(transposed, rhs)
    if sol is None:
        raise NotFrobeniusError("skew form is singular; no principal element")
    return PrincipalElement(algebra.poset, algebra.basis_to_pairs(sol))


def binary_target_poly(dim):
    """λ^m (λ−1)^m with 2m = dim, the certificate polynomial."""
    if dim % 2:
        return None
    m = dim // 2
    half = linalg.poly_from_roots([Fraction(1)] * m)
    return tuple(half + [Fraction(0)] * m)


def spectrum(algebra, fhat):
    """Exact spectrum of ad(fhat) on the algebra.

    Eigenvalues come from the triangular structure described in the module
    docstring: d_p − d_q per root vector E[p,q] (fast path identical to the
    diagonal case) and 0 per Cartan vector.  The binary verdict is a
    coefficient-wise identity test against λ^m(λ−1)^m.
    """
    diag = fhat.diagonal()
    eigs = []
    for b in algebra.basis:
        if b.kind == "root":
            eigs.append(diag[b.p] - diag[b.q])
        else:
            eigs.append(Fraction(0))
    char = tuple(linalg.poly_from_roots(sorted(eigs)))
    return _report_from_roots(algebra.dim, char, eigs, complete=True)


def spectrum_dense(algebra, fhat, engine="auto"):
    """Independent spectrum route: characteristic polynomial of the dense ad matrix.

    Uses the division-free expansion for small dimensions and fraction-free
    determinant evaluation plus interpolation above that.  Rational roots are
    recovered by candidate testing; if a nonconstant factor remains the report
    is flagged incomplete and cannot be binary.
    """
    m = algebra.ad_matrix(fhat.basis_coords(algebra))
    if engine == "berkowitz" or (engine == "auto" and algebra.dim <= 24):
        char = tuple(linalg.berkowitz_charpoly(m))
    else:
        char = tuple(linalg.charpoly_by_interpolation(m))
    diag = fhat.diagonal()
    candidates = {Fraction(0), Fraction(1)}
    for b in algebra.basis:
        if b.kind == "root":
            candidates.add(diag[b.p] - diag[b.q])
    eigs, complete = _extract_roots(list(char), candidates)
    return _report_from_roots(algebra.dim, char, eigs, complete=complete)


def _extract_roots(poly, candidates):
    roots = []
    changed = True
    while len(poly) > 1 and changed:
        changed = False
        for cand in sorted(candidates):
            quotient, rem = _synthetic_div(poly, cand)
            while rem == 0:
                roots.append(cand)
                poly = quotient
                changed = True
                if len(poly) <= 1:
                    break
                quotient, rem = _synthetic_div(poly, cand)
            if len(poly) <= 1:
                break
    return roots, len(poly) <= 1


def _synthetic_div(poly, r):
    out = [poly[0]]
    for c in poly[1:]:
        out.append(c + out[-1] * r)
    return out[:-1], out[-1]


def _report_from_roots(dim, char, eigs, complete):
    mult = {}
    for e in eigs:
        mult[e] = mult.get(e, 0) + 1
    zero = mult.get(Fraction(0), 0)
    one = mult.get(Fraction(1), 0)
    target = binary_target_poly(dim)
    is_binary = complete and target is not None and tuple(char) == target
    return SpectrumReport(
        dim=dim,
        char_poly=tuple(char),
        eigenvalues=tuple(sorted(mult.items())),
        complete=complete,
        is_binary=is_binary,
        zero_mult=zero,
        one_mult=one,
    )


def canonical_binary_basis(poset, functional, algebra=None):
    """Root vectors plus the diagonal differences attached to support pairs.

    Available exactly when the closed-form hypotheses hold; returns
    descriptors ("root", p, q) and ("diff", p, q), the latter meaning
    E[p,p] − E[q,q] for a support pair (p, q).
    """
    try:
        principal_closed_form(poset, functional, algebra)
    except ConditionError:
        raise
    descriptors = [("root", p, q) for p, q in sorted(poset.strict_relation)]
    descriptors += [("diff", p, q) for p, q in sorted(functional.support)]
    return descriptors


def binary_basis_matrix(poset, descriptors):
    """Coordinate matrix of basis descriptors over the full pair keys (for rank checks)."""
    keys = alg.full_pair_keys(poset)
    key_index = {k: i for i, k in enumerate(keys)}
    rows = []
    for kind, p, q in descriptors:
        row = [Fraction(0)] * len(keys)
        if kind == "root":
            row[key_index[(p, q)]] = Fraction(1)
        else:
            row[key_index[(p, p)]] = Fraction(1)
            row[key_index[(q, q)]] = Fraction(-1)
        rows.append(row)
    return rows


def classify_binary_basis(poset, functional, descriptors):
    """Split descriptors into eigenvalue-0 and eigenvalue-1 classes per the partition."""
    part = partition(poset, functional)
    zero, one = [], []
    for d in descriptors:
        kind, p, q = d
        if kind == "diff":
            zero.append(d)
        elif p in part.sources and q in part.sinks:
            one.append(d)
        else:
            zero.append(d)
    return zero, one
