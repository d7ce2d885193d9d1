"""Exhaustive enumeration of small posets and binary-spectrum scans.

Posets on exactly n elements are generated as transitive strict upper
triangles under a fixed element order (every isomorphism class has a linear
extension, so none is missed), then deduplicated by canonical form.  The
scan sweeps sizes 1..n_max, computes the index of each surviving class,
hunts a full-rank functional for the index-zero ones, and records the
binary-spectrum verdict; a failed hunt is recorded, never fatal.
"""
from __future__ import annotations

import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import algebra as alg
from . import spectral
from .errors import SizeError
from .poset import Poset, canonical_form, height, is_connected

SCAN_CAP = 7  # labeled-poset counts explode past this; documented feasibility edge
FUNCTIONAL_ATTEMPTS = 20


@dataclass(frozen=True)
class ScanConfig:
    n_max: int = 6
    height_max: int | None = None
    connected_only: bool = True
    seed: int = 0
    trials: int = 3

    def __post_init__(self):
        if not 1 <= self.n_max <= SCAN_CAP:
            raise SizeError(f"n_max must be in [1, {SCAN_CAP}], got {self.n_max}")

    def to_dict(self):
        return {"n_max": self.n_max, "height_max": self.height_max,
                "connected_only": self.connected_only, "seed": self.seed,
                "trials": self.trials}


@dataclass
class ScanRecord:
    canonical_form: str
    n: int
    height: int
    index: int
    frobenius: bool
    binary: bool | None = None
    functional_used: dict | None = None
    error: str | None = None

    def to_dict(self):
        out = {"canonical_form": self.canonical_form, "n": self.n,
               "height": self.height, "index": self.index, "frobenius": self.frobenius}
        if self.frobenius:
            out["binary"] = self.binary
            if self.functional_used is not None:
                out["functional_used"] = self.functional_used
        if self.error:
            out["error"] = self.error
        return out

    @classmethod
    def from_dict(cls, data):
        return cls(canonical_form=data["canonical_form"], n=data["n"],
                   height=data["height"], index=data["index"],
                   frobenius=data["frobenius"], binary=data.get("binary"),
                   functional_used=data.get("functional_used"),
                   error=data.get("error"))


def _pair_bits(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _masks_of_size(n):
    """All transitive strict upper triangles on n ordered elements."""
    pairs = _pair_bits(n)
    for mask in range(1 << len(pairs)):
        up = [0] * n
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                up[i] |= 1 << j
        ok = True
        for i in range(n):
            m = up[i]
            while m:
                j = (m & -m).bit_length() - 1
                if up[j] & ~up[i]:
                    ok = False
                    break
                m &= m - 1
            if not ok:
                break
        if ok:
            yield mask, up


def _poset_from_up(n, up):
    ids = [str(i + 1) for i in range(n)]
    pairs = []
    for i in range(n):
        m = up[i]
        while m:
            j = (m & -m).bit_length() - 1
            pairs.append((ids[i], ids[j]))
            m &= m - 1
    return Poset(ids, pairs, _closed=True)


def iter_classes(n, connected_only=False, height_max=None):
    """One representative poset per isomorphism class on exactly n elements."""
    seen = set()
    for _mask, up in _masks_of_size(n):
        poset = _poset_from_up(n, up)
        form = canonical_form(poset)
        if form in seen:
            continue
        seen.add(form)
        if connected_only and not is_connected(poset):
            continue
        if height_max is not None and height(poset) > height_max:
            continue
        yield form, poset


def enumerate_posets(config):
    """Stream the class representatives on exactly config.n_max elements."""
    for _form, poset in iter_classes(config.n_max, config.connected_only,
                                     config.height_max):
        yield poset


def canonical_hex(form):
    n, mask = form
    return f"{n}:{mask:x}"


def random_spanning_tree_functional(poset, rng):
    """All-ones functional over a random spanning tree of the comparability graph."""
    edges = sorted(poset.strict_relation)
    rng.shuffle(edges)
    parent = {e: e for e in poset.elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for p, q in edges:
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rp] = rq
            chosen.append((p, q))
    if len(chosen) != len(poset.elements) - 1:
        return None
    return alg.Functional.from_set(chosen)


def find_frobenius_functional(algebra, seed_token, attempts=FUNCTIONAL_ATTEMPTS):
    """Random dense functionals first, spanning-tree all-ones as fallback."""
    for t in range(attempts):
        rng = random.Random(f"{seed_token}:dense:{t}")
        f = alg.random_functional(algebra.poset, rng)
        if alg.kirillov_matrix(algebra, f).rank() == algebra.dim:
            return f
    for t in range(attempts):
        rng = random.Random(f"{seed_token}:tree:{t}")
        f = random_spanning_tree_functional(algebra.poset, rng)
        if f is not None and alg.kirillov_matrix(algebra, f).rank() == algebra.dim:
            return f
    return None


def analyze_poset(poset, form_hex, seed, trials):
    """Index, Frobenius hunt, and spectrum verdict for one poset."""
    n = len(poset)
    h = height(poset)
    if n == 1:
        return ScanRecord(canonical_form=form_hex, n=1, height=0, index=0,
                          frobenius=True, binary=True,
                          functional_used={"set": []})
    g = alg.build_algebra(poset)
    idx = alg.index(g, trials=trials, seed=f"{seed}:{form_hex}")
    rec = ScanRecord(canonical_form=form_hex, n=n, height=h, index=idx,
                     frobenius=idx == 0)
    if idx != 0:
        return rec
    f = find_frobenius_functional(g, f"{seed}:{form_hex}")
    if f is None:
        rec.error = "functional_search_exhausted"
        return rec
    fhat = spectral.principal_general(g, f)
    rec.binary = spectral.spectrum(g, fhat).is_binary
    rec.functional_used = f.to_dict()
    return rec


def _analyze_args(args):
    n, up, form_hex, seed, trials = args
    poset = _poset_from_up(n, up)
    return analyze_poset(poset, form_hex, seed, trials)


def scan_binary_spectrum(config, out_path=None, resume_path=None, workers=1,
                         progress=None):
    """Scan all sizes 1..n_max; returns records in deterministic enumeration order.

    With out_path, records stream to a JSON-lines file behind a config
    header; resume_path skips canonical forms already present in that file.
    """
    done = set()
    if resume_path is not None:
        for rec in read_records(resume_path):
            done.add(rec.canonical_form)

    tasks = []
    for n in range(1, config.n_max + 1):
        if n == 1:
            # the point poset is connected with height 0, so it passes any filter
            tasks.append((1, [0], "1:0", config.seed, config.trials))
            continue
        for form, poset in iter_classes(n, config.connected_only, config.height_max):
            fh = canonical_hex(form)
            up = [0] * n
            idx = {e: i for i, e in enumerate(poset.elements)}
            for p, q in poset.strict_relation:
                up[idx[p]] |= 1 << idx[q]
            tasks.append((n, up, fh, config.seed, config.trials))

    pending = [t for t in tasks if t[2] not in done]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            fresh = list(pool.map(_analyze_args, pending))
    else:
        fresh = []
        for i, t in enumerate(pending):
            fresh.append(_analyze_args(t))
            if progress and (i + 1) % 50 == 0:
                print(f"scan: {i + 1}/{len(pending)} analyzed", file=sys.stderr)

    by_form = {r.canonical_form: r for r in fresh}
    if resume_path is not None:
        for rec in read_records(resume_path):
            by_form.setdefault(rec.canonical_form, rec)
    records = [by_form[t[2]] for t in tasks if t[2] in by_form]

    if out_path is not None:
        write_records(out_path, config, records)
    return records


def write_records(path, config, records):
    with open(path, "w") as fh:
        fh.write(json.dumps({"header": config.to_dict()}, sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps({"record": rec.to_dict()}, sort_keys=True) + "\n")


def read_records(path):
    records = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                if "record" in data:
                    records.append(ScanRecord.from_dict(data["record"]))
    except FileNotFoundError:
        return []
    return records


def counterexamples(records):
    """Frobenius records without a binary spectrum; a nonempty result is news."""
    return [r for r in records if r.frobenius and r.binary is False]
