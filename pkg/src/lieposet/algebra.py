"""Lie algebras attached to posets, with exact structure constants.

For a poset P the incidence span of the matrix units E[p,q] (p ⪯ q) carries
the commutator bracket; restricting to trace zero gives the algebra this
module builds.  The basis is the set of root vectors E[p,q] for strict p ≺ q
together with consecutive diagonal differences E[v_i,v_i] − E[v_{i+1},v_{i+1}]
along a fixed linear extension v_1..v_n, so dim = |strict pairs| + |P| − 1.

Bracket conventions: [E[p,q], E[r,s]] = δ_qr E[p,s] − δ_sp E[r,q]; brackets of
basis vectors never have diagonal components, which keeps the pairing with
off-diagonal functionals a pure root-coefficient sum.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import PosetLoadError, SizeError
from .poset import linear_extension


@dataclass(frozen=True)
class BasisVector:
    """Either a root vector E[p,q] or the i-th consecutive Cartan difference."""
    kind: str  # "root" | "cartan"
    p: str = ""
    q: str = ""
    step: int = 0

    def __repr__(self):
        if self.kind == "root":
            return f"E[{self.p},{self.q}]"
        return f"H[{self.step}]"


class Functional:
    """Sparse rational functional on relation pairs; keys are (p, q) with p ≺ q."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        coeffs = {}
        for (p, q), c in dict(coefficients).items():
            c = Fraction(c)
            if c:
                coeffs[(str(p), str(q))] = c
        self.coefficients = coeffs

    @classmethod
    def from_set(cls, pairs):
        """The all-ones functional supported on `pairs`."""
        return cls({pair: 1 for pair in pairs})

    @property
    def support(self):
        return frozenset(self.coefficients)

    @property
    def is_all_ones(self):
        return all(c == 1 for c in self.coefficients.values())

    def validate_on(self, poset):
        for p, q in self.coefficients:
            if not poset.less(p, q):
                raise PosetLoadError(f"functional pair ({p!r},{q!r}) is not a strict relation")

    def __eq__(self, other):
        return isinstance(other, Functional) and self.coefficients == other.coefficients

    def __repr__(self):
        terms = sorted(self.coefficients.items())
        return "Functional({" + ", ".join(f"({p},{q}): {c}" for (p, q), c in terms) + "})"

    def to_dict(self):
        if self.is_all_ones:
            return {"set": sorted([p, q] for p, q in self.coefficients)}
        return {"support": sorted([p, q, str(c)] for (p, q), c in self.coefficients.items())}

    @classmethod
    def from_dict(cls, data):
        if "set" in data:
            return cls.from_set([tuple(pair) for pair in data["set"]])
        if "support" in data:
            out = {}
            for entry in data["support"]:
                try:
                    p, q, c = entry
                    out[(p, q)] = Fraction(c)
                except (ValueError, ZeroDivisionError) as exc:
                    raise PosetLoadError(f"bad functional entry {entry!r}: {exc}")
            return cls(out)
        raise PosetLoadError("functional file must carry 'set' or 'support'")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


class LiePosetAlgebra:
    """Trace-zero incidence algebra of a poset with cached bracket table."""

    def __init__(self, poset):
        if len(poset) < 2:
            raise SizeError("poset algebras need at least 2 elements")
        self.poset = poset
        self.extension = linear_extension(poset)
        pos = {e: i for i, e in enumerate(self.extension)}
        roots = sorted(poset.strict_relation, key=lambda pq: (pos[pq[0]], pos[pq[1]]))
        self.basis = tuple(
            [BasisVector("root", p=p, q=q) for p, q in roots]
            + [BasisVector("cartan", step=i) for i in range(1, len(poset))]
        )
        self.n_roots = len(roots)
        self.root_index = {pq: i for i, pq in enumerate(roots)}
        self.dim = len(self.basis)
        self._pos = pos
        self._bracket_cache = {}

    def __repr__(self):
        return f"LiePosetAlgebra(|P|={len(self.poset)}, dim={self.dim})"

    def cartan_pair(self, step):
        """Diagonal elements (v_i, v_{i+1}) carried by Cartan difference `step`."""
        return self.extension[step - 1], self.extension[step]

    def bracket_basis(self, i, j):
        """[basis_i, basis_j] as a sparse map basis index → integer coefficient."""
        if i == j:
            return {}
        key = (i, j)
        cached = self._bracket_cache.get(key)
        if cached is not None:
            return cached
        if i > j:
            out = {k: -c for k, c in self.bracket_basis(j, i).items()}
        else:
            out = self._bracket_uncached(i, j)
        self._bracket_cache[key] = out
        return out

    def _bracket_uncached(self, i, j):
        bi, bj = self.basis[i], self.basis[j]
        if bi.kind == "root" and bj.kind == "root":
            out = {}
            if bi.q == bj.p:
                out[self.root_index[(bi.p, bj.q)]] = 1
            if bj.q == bi.p:
                k = self.root_index[(bj.p, bi.q)]
                out[k] = out.get(k, 0) - 1
            return {k: c for k, c in out.items() if c}
        if bi.kind == "cartan" and bj.kind == "cartan":
            return {}
        if bi.kind == "cartan":
            a, b = self.cartan_pair(bi.step)
            c = ((bj.p == a) - (bj.p == b)) - ((bj.q == a) - (bj.q == b))
            return {j: c} if c else {}
        # root, cartan
        a, b = self.cartan_pair(bj.step)
        c = ((bi.p == a) - (bi.p == b)) - ((bi.q == a) - (bi.q == b))
        return {i: -c} if c else {}

    def bracket_coords(self, xc, yc):
        """Bracket of two elements given as sparse basis-coordinate maps."""
        out = {}
        for i, a in xc.items():
            if not a:
                continue
            for j, b in yc.items():
                if not b:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return {k: v for k, v in out.items() if v}

    # -- coordinate conversions ------------------------------------------------

    def basis_to_pairs(self, coords):
        """Basis coordinates → coefficient map over matrix-unit pairs (diag included)."""
        out = {}
        for i, c in enumerate(coords):
            c = Fraction(c)
            if not c:
                continue
            b = self.basis[i]
            if b.kind == "root":
                out[(b.p, b.q)] = out.get((b.p, b.q), Fraction(0)) + c
            else:
                a, d = self.cartan_pair(b.step)
                out[(a, a)] = out.get((a, a), Fraction(0)) + c
                out[(d, d)] = out.get((d, d), Fraction(0)) - c
        return {k: v for k, v in out.items() if v}

    def pairs_to_basis(self, pair_coords):
        """Inverse of basis_to_pairs; diagonal part must be trace zero."""
        coords = [Fraction(0)] * self.dim
        acc = Fraction(0)
        partial = {}
        for k, e in enumerate(self.extension):
            acc += Fraction(pair_coords.get((e, e), 0))
            partial[k + 1] = acc
        if acc != 0:
            raise PosetLoadError("diagonal part has nonzero trace")
        for (p, q), c in pair_coords.items():
            if p != q:
                coords[self.root_index[(p, q)]] = Fraction(c)
        for step in range(1, len(self.poset)):
            coords[self.n_roots + step - 1] = partial[step]
        return coords

    def ad_matrix(self, coords):
        """Matrix of [x, −] on the basis, columns indexed by basis vectors."""
        xc = {i: Fraction(c) for i, c in enumerate(coords) if c}
        cols = []
        for j in range(self.dim):
            col = [Fraction(0)] * self.dim
            for i, a in xc.items():
                for k, c in self.bracket_basis(i, j).items():
                    col[k] += a * c
            cols.append(col)
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]


def build_algebra(poset):
    """Construct the trace-zero poset algebra; SizeError below 2 elements."""
    return LiePosetAlgebra(poset)


def evaluate(functional, pair_coords):
    """Apply a functional to an element given in matrix-unit pair coordinates."""
    total = Fraction(0)
    for key, c in functional.coefficients.items():
        v = pair_coords.get(key)
        if v:
            total += c * Fraction(v)
    return total


@dataclass
class KirillovMatrix:
    """Skew form F([x_i, x_j]) on the algebra basis, exact entries."""
    rows: list
    algebra: LiePosetAlgebra

    def rank(self):
        return linalg.mat_rank(self.rows)


def kirillov_matrix(algebra, functional):
    functional.validate_on(algebra.poset)
    dim = algebra.dim
    pair_of = [
        (b.p, b.q) if b.kind == "root" else None for b in algebra.basis
    ]
    rows = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            total = Fraction(0)
            for k, c in algebra.bracket_basis(i, j).items():
                coeff = functional.coefficients.get(pair_of[k])
                if coeff:
                    total += c * coeff
            if total:
                rows[i][j] = total
                rows[j][i] = -total
    return KirillovMatrix(rows, algebra)


RANDOM_COEFF_MAX = 10 ** 6


def random_functional(poset, rng, coeff_max=RANDOM_COEFF_MAX):
    """Dense functional with independent uniform integer coefficients in [1, coeff_max]."""
    pairs = sorted(poset.strict_relation)
    return Functional({pair: rng.randint(1, coeff_max) for pair in pairs})


def index(algebra, trials=3, seed=0):
    """Index of the algebra by randomized generic rank of the skew form.

    Rank is lower-semicontinuous, so the max over trials certifies the
    generic rank off a measure-zero coefficient set; the reported value is
    dim − max rank, exact over the rationals and deterministic per seed.
    Stops early once the skew parity floor (dim mod 2) is reached.
    """
    if trials < 1:
        raise SizeError("index needs at least one trial")
    dim = algebra.dim
    parity = dim % 2
    best = 0
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        f = random_functional(algebra.poset, rng)
        best = max(best, kirillov_matrix(algebra, f).rank())
        if dim - best == parity:
            break
    return dim - best


def kernel(algebra, functional):
    """Exact basis of the radical of the skew form, in basis coordinates."""
    m = kirillov_matrix(algebra, functional)
    return linalg.nullspace(m.rows, n_cols=algebra.dim)


# -- the full (not trace-zero) incidence pairing -------------------------------
#
# Condition checks on catalog pairs and the diagonal-system equivalence work
# inside the full span of E[p,q] for p ⪯ q including the diagonal, with no
# trace constraint.  Unknowns b[u,v] are ordered deterministically.

def full_pair_keys(poset):
    keys = [(e, e) for e in poset.elements]
    keys += sorted(poset.strict_relation)
    return keys


def _pairing_row_unit(poset, functional, a, b, key_index):
    """Row of B ↦ F([E[a,b], B]) over the full pair coordinates."""
    row = [Fraction(0)] * len(key_index)
    for (p, q), c in functional.coefficients.items():
        # E[a,b]·B contributes b[b,j] at matrix position (a, j)
        if p == a:
            k = key_index.get((b, q))
            if k is not None:
                row[k] += c
        # B·E[a,b] contributes b[i,a] at matrix position (i, b)
        if q == b:
            k = key_index.get((p, a))
            if k is not None:
                row[k] -= c
    return row


def pairing_rows(poset, functional, probes):
    """Rows of B ↦ F([x, B]) for probe elements given in pair coordinates."""
    keys = full_pair_keys(poset)
    key_index = {k: i for i, k in enumerate(keys)}
    valid = set(keys)
    rows = []
    for probe in probes:
        row = [Fraction(0)] * len(keys)
        for (a, b), coeff in probe.items():
            if (a, b) not in valid:
                raise PosetLoadError(f"probe pair ({a!r},{b!r}) outside the incidence span")
            unit = _pairing_row_unit(poset, functional, a, b, key_index)
            for i, v in enumerate(unit):
                if v:
                    row[i] += coeff * v
        rows.append(row)
    return keys, rows


def diagonal_probes(poset, style):
    """Probe sets for the two equivalent diagonal equation systems."""
    elems = poset.elements
    if style == "units":
        return [{(e, e): Fraction(1)} for e in elems]
    if style == "differences":
        first = elems[0]
        return [{(first, first): Fraction(1), (e, e): Fraction(-1)} for e in elems[1:]]
    raise ValueError(f"unknown probe style {style!r}")


def full_kernel(poset, functional, diagonal_style="units"):
    """Kernel of the functional pairing inside the full incidence span.

    Returns (pair keys, nullspace basis).  The identity element is always in
    the kernel, so the dimension is at least 1.
    """
    probes = diagonal_probes(poset, diagonal_style)
    probes += [{(p, q): Fraction(1)} for p, q in sorted(poset.strict_relation)]
    keys, rows = pairing_rows(poset, functional, probes)
    return keys, linalg.nullspace(rows, n_cols=len(keys))


def kernel_is_scalar_diagonal(poset, functional, diagonal_style="units"):
    """True iff every full-pairing kernel element has constant diagonal and
    zero coefficients on all strict pairs."""
    keys, basis = full_kernel(poset, functional, diagonal_style=diagonal_style)
    diag_slots = [i for i, (p, q) in enumerate(keys) if p == q]
    strict_slots = [i for i, (p, q) in enumerate(keys) if p != q]
    for vec in basis:
        if any(vec[i] for i in strict_slots):
            return False
        values = {vec[i] for i in diag_slots}
        if len(values) > 1:
            return False
    return True
