"""Certified building-block pairs, gluing rules, and construction sequences.

The catalog holds nine families of (poset, functional) pairs.  Each family
fixes designated extremes a, b, c: `a` is the unique minimal element for the
plain families and the unique maximal for the starred ones, with b, c the
opposite pair.  Twelve gluing rules combine a catalog poset S with a running
poset Q by identifying designated extremes with extremal elements of Q of
matching polarity; rule preconditions are checked strictly and violations
raise RuleError naming the failed condition.

Functional assembly along a sequence: add the attached functional and, for
the two- and three-point identifications among {D1, D2, F}, subtract the
duplicated extremal-edge terms so the result stays all-ones.  Sequences that
use any of B, E1, E2, G1, G2, H raise the index and carry no functional.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import algebra as alg
from . import spectral, topology
from .errors import (
    ConditionError,
    FormError,
    FunctionalUndefined,
    LiePosetError,
    NotFrobeniusError,
    NotSmallError,
    ParamError,
    RuleError,
    SequenceParseError,
    SizeError,
)
from .poset import Poset, extremal_data, height

FAMILIES = ("P1", "P2", "P2*", "P3", "P3*", "P4", "P4*", "P5", "P5*")
PARAMETRIC = {"P4": 4, "P4*": 4, "P5": 1, "P5*": 1}  # minimal n per family

FROBENIUS_RULES = frozenset({"A1", "A2", "C", "D1", "D2", "F"})
RULE_INCREMENT = {
    "A1": 0, "A2": 0, "C": 0, "D1": 0, "D2": 0, "F": 0,
    "B": 1, "E1": 1, "E2": 1, "G1": 1, "G2": 1,
    "H": 2,
}

# role sets identified by each rule and comparability requirements between
# the targets of (a,b) and (a,c); True = must be comparable, False = must
# not be, None = unconstrained or not applicable
_RULE_TABLE = {
    "A1": (("b",), None, None, False),
    "A2": (("c",), None, None, True),
    "B": (("b", "c"), None, None, True),
    "C": (("a",), None, None, False),
    "D1": (("a", "b"), True, None, True),
    "D2": (("a", "c"), None, True, True),
    "E1": (("a", "b"), False, None, False),
    "E2": (("a", "c"), None, False, True),
    "F": (("a", "b", "c"), True, True, True),
    "G1": (("a", "b", "c"), True, False, True),
    "G2": (("a", "b", "c"), False, True, True),
    "H": (("a", "b", "c"), False, False, True),
}


@dataclass(frozen=True)
class ToralPairId:
    family: str
    n: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParamError(f"unknown family {self.family!r}")
        if self.family in PARAMETRIC:
            if self.n is None:
                raise ParamError(f"{self.family} needs a size parameter")
            if self.n < PARAMETRIC[self.family]:
                raise ParamError(
                    f"{self.family} needs n >= {PARAMETRIC[self.family]}, got {self.n}")
        elif self.n is not None:
            raise ParamError(f"{self.family} takes no size parameter")

    def label(self):
        return self.family if self.n is None else f"{self.family},{self.n}"


@dataclass(frozen=True)
class ToralPairReport:
    p1_ok: bool
    p2_ok: bool
    p3_ok: bool
    f1_ok: bool
    f2_ok: bool
    f3_ok: bool
    f4_ok: bool
    frobenius_ok: bool

    @property
    def all_ok(self):
        return all(self.to_dict().values())

    def to_dict(self):
        return {
            "p1_ok": self.p1_ok, "p2_ok": self.p2_ok, "p3_ok": self.p3_ok,
            "f1_ok": self.f1_ok, "f2_ok": self.f2_ok, "f3_ok": self.f3_ok,
            "f4_ok": self.f4_ok, "frobenius_ok": self.frobenius_ok,
        }

    def failures(self):
        return sorted(k for k, v in self.to_dict().items() if not v)


@dataclass(frozen=True)
class ConstructionStep:
    pair: ToralPairId
    rule: str
    identify: tuple  # sorted tuple of (role, target id)

    def __post_init__(self):
        if self.rule not in _RULE_TABLE:
            raise ParamError(f"unknown rule {self.rule!r}")
        object.__setattr__(self, "identify", tuple(sorted(self.identify)))

    @property
    def identify_map(self):
        return dict(self.identify)


@dataclass(frozen=True)
class ConstructionSequence:
    seed: ToralPairId
    steps: tuple = field(default_factory=tuple)

    def rules(self):
        return [s.rule for s in self.steps]


def _p(i):
    return f"p{i}"


def catalog(pair_id):
    """Poset and functional of a catalog family, exactly as certified.

    Two stated summation bounds are corrected to keep the supports spanning
    trees (the printed variants are degenerate for every admissible n); the
    corrections are verified instance by instance by verify_toral_pair.
    """
    fam, n = pair_id.family, pair_id.n
    if fam == "P1":
        gens = [(1, 2)]
        supp = [(1, 2)]
        size = 2
    elif fam == "P2":
        gens = [(1, 2), (2, 3), (2, 4)]
        supp = [(1, 3), (1, 4), (2, 4)]
        size = 4
    elif fam == "P2*":
        gens = [(1, 3), (2, 3), (3, 4)]
        supp = [(1, 4), (2, 4), (2, 3)]
        size = 4
    elif fam == "P3":
        gens = [(1, 2), (2, 3), (2, 4), (3, 5), (4, 6)]
        supp = [(1, 5), (1, 6), (2, 3), (2, 4), (2, 6)]
        size = 6
    elif fam == "P3*":
        gens = [(1, 3), (2, 4), (3, 5), (4, 5), (5, 6)]
        supp = [(1, 6), (2, 6), (3, 5), (4, 5), (2, 5)]
        size = 6
    elif fam == "P4":
        gens = [(i, i + 1) for i in range(1, n - 1)] + [(n // 2, n)]
        supp = [(i, n - i) for i in range(1, (n - 1) // 2 + 1)]
        supp += [(i, n) for i in range(1, n // 2 + 1)]
        size = n
    elif fam == "P4*":
        m = (n - 1) // 2  # n >= 4 keeps m >= 1
        gens = [(i, i + 1) for i in range(1, m)] + [(m, m + 2)]
        gens += [(i, i + 1) for i in range(m + 2, n)]
        gens += [(m + 1, m + 2)]
        supp = [(i, n + 1 - i) for i in range(1, m + 1)]
        supp += [(m + 1, i) for i in range(m + 2, n + 1)]
        size = n
    elif fam == "P5":
        size = 2 * n + 1
        gens = [(i, j) for i in range(1, 2 * n, 2) for j in range(i + 1, size + 1)]
        gens += [(i, j) for i in range(2, 2 * n, 2) for j in range(i + 2, size + 1)]
        top = 2 * (n // 2) + 1  # last source feeding p_{2n}
        supp = [(1, size)]
        supp += [(i, 2 * n) for i in range(1, top + 1)]
        supp += [(2 * k, 2 * n - 2 * k) for k in range(1, (n - 1) // 2 + 1)]
        supp += [(2 * k + 1, 2 * n - 2 * k + 1) for k in range(1, (n - 1) // 2 + 1)]
    elif fam == "P5*":
        size = 2 * n + 1
        gens = [(i, j) for i in range(1, 2 * n, 2) for j in range(i + 2, size + 1)]
        gens += [(i, j) for i in range(2, 2 * n + 1, 2) for j in range(i + 1, size + 1)]
        low = 2 * ((n + 1) // 2) + 1  # first sink fed by p_2
        supp = [(1, size)]
        supp += [(2, i) for i in range(low, size + 1)]
        supp += [(2 * k, 2 * n - 2 * k + 4) for k in range(2, (n + 1) // 2 + 1)]
        supp += [(2 * k + 1, 2 * n - 2 * k + 1) for k in range(1, (n - 1) // 2 + 1)]
    else:  # pragma: no cover
        raise ParamError(f"unknown family {fam!r}")
    elements = [_p(i) for i in range(1, size + 1)]
    poset = Poset(elements, [(_p(a), _p(b)) for a, b in gens])
    functional = alg.Functional.from_set((_p(a), _p(b)) for a, b in supp)
    functional.validate_on(poset)
    return poset, functional


def designated_extremes(pair_id, size=None):
    """Roles a, b, c for a family plus its orientation.

    Orientation "min" means `a` is the unique minimal element (so b, c are
    maximal); "max" is the dual.  The two-element family has no c.
    """
    fam, n = pair_id.family, pair_id.n
    if fam == "P1":
        return {"a": _p(1), "b": _p(2)}, "min"
    if fam == "P2":
        return {"a": _p(1), "b": _p(3), "c": _p(4)}, "min"
    if fam == "P2*":
        return {"a": _p(4), "b": _p(1), "c": _p(2)}, "max"
    if fam == "P3":
        return {"a": _p(1), "b": _p(5), "c": _p(6)}, "min"
    if fam == "P3*":
        return {"a": _p(6), "b": _p(1), "c": _p(2)}, "max"
    if fam == "P4":
        return {"a": _p(1), "b": _p(n - 1), "c": _p(n)}, "min"
    if fam == "P4*":
        return {"a": _p(n), "b": _p(1), "c": _p((n + 1) // 2)}, "max"
    if fam == "P5":
        return {"a": _p(1), "b": _p(2 * n), "c": _p(2 * n + 1)}, "min"
    if fam == "P5*":
        return {"a": _p(2 * n + 1), "b": _p(1), "c": _p(2)}, "max"
    raise ParamError(f"unknown family {fam!r}")  # pragma: no cover


def _role_polarity(role, orientation):
    if orientation == "min":
        return "min" if role == "a" else "max"
    return "max" if role == "a" else "min"


def _fresh_ids(existing, count):
    taken = set(existing)
    start = 0
    for e in existing:
        m = re.fullmatch(r"q(\d+)", e)
        if m:
            start = max(start, int(m.group(1)))
    out = []
    nxt = start + 1
    while len(out) < count:
        cand = f"q{nxt}"
        if cand not in taken:
            out.append(cand)
        nxt += 1
    return out


def apply_rule(Q, S, step, designated=None, orientation=None):
    """Glue catalog poset S onto Q per one construction step.

    Returns (new poset, mapping of S element ids into the result).  Fresh
    elements continue Q's q-numbering in S's element order.
    """
    if designated is None:
        designated, orientation = designated_extremes(step.pair)
    roles_needed, cond_ab, cond_ac, needs_three = _RULE_TABLE[step.rule]
    if needs_three and len(designated) < 3:
        raise RuleError(f"rule {step.rule} needs a three-extreme block, got {step.pair.label()}")
    ident = step.identify_map
    if set(ident) != set(roles_needed):
        raise RuleError(
            f"rule {step.rule} identifies roles {sorted(roles_needed)}, got {sorted(ident)}")
    ext_q = extremal_data(Q)
    targets = {}
    for role in roles_needed:
        target = ident[role]
        if target not in set(Q.elements):
            raise RuleError(f"target {target!r} is not an element of the running poset")
        pol = _role_polarity(role, orientation)
        pool = ext_q.minimals if pol == "min" else ext_q.maximals
        if target not in pool:
            raise RuleError(
                f"target {target!r} for role {role!r} must be a {pol}imal element")
        targets[role] = target
    if len(set(targets.values())) != len(targets):
        raise RuleError("identification targets must be distinct")

    def _check(cond, r1, r2):
        if cond is None or r1 not in targets or r2 not in targets:
            return
        comparable = Q.comparable(targets[r1], targets[r2])
        if cond and not comparable:
            raise RuleError(
                f"rule {step.rule} needs comparable targets for roles {r1},{r2}")
        if not cond and comparable:
            raise RuleError(
                f"rule {step.rule} needs incomparable targets for roles {r1},{r2}")

    _check(cond_ab, "a", "b")
    _check(cond_ac, "a", "c")

    role_of = {designated[r]: r for r in roles_needed if r in designated}
    fresh = _fresh_ids(Q.elements, len(S.elements) - len(roles_needed))
    mapping = {}
    fresh_iter = iter(fresh)
    for e in S.elements:
        if e in role_of:
            mapping[e] = targets[role_of[e]]
        else:
            mapping[e] = next(fresh_iter)
    pairs = list(Q.strict_relation)
    pairs += [(mapping[p], mapping[q]) for p, q in S.strict_relation]
    glued = Poset(list(Q.elements) + fresh, pairs)
    assert len(glued) == len(Q) + len(S) - len(roles_needed)
    return glued, mapping


@dataclass
class BuildResult:
    poset: Poset
    functional: alg.Functional | None
    frobenius_rules_only: bool
    step_maps: list

    def functional_or_raise(self):
        if self.functional is None:
            raise FunctionalUndefined(
                "sequence uses an index-raising rule; no functional is defined")
        return self.functional


def build_sequence(seq):
    """Run a construction sequence; assemble the functional when defined."""
    seed_poset, seed_fun = catalog(seq.seed)
    k = len(seed_poset)
    seed_map = {_p(i + 1): f"q{i + 1}" for i in range(k)}
    poset = seed_poset.relabel(seed_map)
    coeffs = {(seed_map[p], seed_map[q]): Fraction(1) for p, q in seed_fun.support}
    frob = True
    step_maps = [dict(seed_map)]
    for step in seq.steps:
        S, FS = catalog(step.pair)
        designated, orientation = designated_extremes(step.pair)
        poset, mapping = apply_rule(poset, S, step, designated, orientation)
        step_maps.append(mapping)
        if step.rule not in FROBENIUS_RULES:
            frob = False
        if not frob:
            coeffs = None
            continue
        for p, q in FS.support:
            key = (mapping[p], mapping[q])
            coeffs[key] = coeffs.get(key, Fraction(0)) + 1
        merged = {role: mapping[designated[role]] for role in step.identify_map}
        removals = []
        if step.rule == "D1":
            removals = [("a", "b")]
        elif step.rule == "D2":
            removals = [("a", "c")]
        elif step.rule == "F":
            removals = [("a", "b"), ("a", "c")]
        for r1, r2 in removals:
            lo, hi = merged[r1], merged[r2]
            if orientation == "max":
                lo, hi = hi, lo
            if coeffs.get((lo, hi)) != 2:
                raise RuleError(
                    f"expected duplicated support on ({lo},{hi}) when removing it")
            coeffs[(lo, hi)] = Fraction(1)
    functional = None
    if coeffs is not None:
        functional = alg.Functional(coeffs)
        if not functional.is_all_ones:
            raise RuleError("assembled functional is not all-ones")  # pragma: no cover
        functional.validate_on(poset)
    return BuildResult(poset=poset, functional=functional,
                       frobenius_rules_only=frob, step_maps=step_maps)


def index_by_formula(poset):
    """|extremal strict relations| − |extremal elements| + 1."""
    ext = extremal_data(poset)
    return len(ext.rel_ext) - len(ext.ext) + 1


def predict_index_by_rules(seq):
    """Per-rule index increments summed over the sequence."""
    return sum(RULE_INCREMENT[s.rule] for s in seq.steps)


def verify_toral_pair(poset, functional):
    """Check every defining condition of a certified pair; never raises."""
    if len(poset) < 2:
        return ToralPairReport(*(False,) * 8)
    ext = extremal_data(poset)
    p1_ok = len(ext.ext) in (2, 3)

    h = height(poset)
    hom = topology.betti_numbers(topology.order_complex(poset), max_dim=max(h, 1))
    p3_ok = hom.betti[0] == 1 and all(b == 0 for b in hom.betti[1:])

    try:
        functional.validate_on(poset)
    except LiePosetError:
        return ToralPairReport(p1_ok, False, p3_ok, False, False, False, False, False)

    g = alg.build_algebra(poset)
    frobenius_ok = alg.kirillov_matrix(g, functional).rank() == g.dim

    try:
        f1_ok = spectral.is_small(poset, functional)
    except FormError:
        f1_ok = False
    f2_ok = False
    part = None
    if f1_ok:
        part = spectral.partition(poset, functional)
        f2_ok = part.theorem_conditions_hold
    f3_ok = ext.rel_ext <= functional.support
    f4_ok = alg.kernel_is_scalar_diagonal(poset, functional)

    p2_ok = False
    if frobenius_ok:
        try:
            if f1_ok and f2_ok:
                fhat = spectral.principal_small(poset, functional, g)
            else:
                fhat = spectral.principal_general(g, functional)
            p2_ok = spectral.spectrum(g, fhat).is_binary
        except (NotFrobeniusError, NotSmallError, ConditionError):
            p2_ok = False
    return ToralPairReport(p1_ok, p2_ok, p3_ok, f1_ok, f2_ok, f3_ok, f4_ok, frobenius_ok)


# -- random sequences ----------------------------------------------------------

DEFAULT_SEED_POOL = (
    ToralPairId("P1"), ToralPairId("P2"), ToralPairId("P2*"),
    ToralPairId("P3"), ToralPairId("P3*"),
    ToralPairId("P4", 4), ToralPairId("P4", 5), ToralPairId("P4", 6),
    ToralPairId("P4*", 4), ToralPairId("P4*", 5),
    ToralPairId("P5", 1), ToralPairId("P5", 2),
    ToralPairId("P5*", 1), ToralPairId("P5*", 2),
)


def applicable_steps(Q, pair_id):
    """All valid (rule, identify map) choices for attaching `pair_id` to Q."""
    designated, orientation = designated_extremes(pair_id)
    ext_q = extremal_data(Q)
    options = {}
    for rule, (roles, cond_ab, cond_ac, needs_three) in sorted(_RULE_TABLE.items()):
        if needs_three and len(designated) < 3:
            continue
        pools = []
        for role in roles:
            pol = _role_polarity(role, orientation)
            pool = ext_q.minimals if pol == "min" else ext_q.maximals
            pools.append(sorted(pool))
        found = []
        for combo in _product(pools):
            if len(set(combo)) != len(combo):
                continue
            chosen = dict(zip(roles, combo))

            def ok(cond, r1, r2):
                if cond is None or r1 not in chosen or r2 not in chosen:
                    return True
                return Q.comparable(chosen[r1], chosen[r2]) == cond

            if ok(cond_ab, "a", "b") and ok(cond_ac, "a", "c"):
                found.append(tuple(sorted(chosen.items())))
        if found:
            options[rule] = found
    return options


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product(pools[1:]):
            yield (head,) + rest


def random_sequence(rng, depth, seed_pool=DEFAULT_SEED_POOL, attach_pool=None,
                    rule_filter=None):
    """Seeded random construction sequence with `depth` attach steps."""
    attach_pool = attach_pool or seed_pool
    seed = rng.choice(seed_pool)
    seq = ConstructionSequence(seed=seed)
    result = build_sequence(seq)
    poset = result.poset
    steps = []
    for _ in range(depth):
        pair = rng.choice(attach_pool)
        options = applicable_steps(poset, pair)
        if rule_filter is not None:
            options = {r: v for r, v in options.items() if r in rule_filter}
        if not options:
            continue
        rule = rng.choice(sorted(options))
        identify = rng.choice(options[rule])
        step = ConstructionStep(pair=pair, rule=rule, identify=identify)
        designated, orientation = designated_extremes(pair)
        poset, _m = apply_rule(poset, catalog(pair)[0], step, designated, orientation)
        steps.append(step)
    return ConstructionSequence(seed=seed, steps=tuple(steps))


# -- sequence DSL ---------------------------------------------------------------

FIGURE4_TEXT = """\
seed P2
attach P2 rule A1 b->q3
attach P2 rule C a->q5
attach P2 rule D1 a->q5 b->q7
attach P2 rule F a->q1 b->q4 c->q3
"""


def _parse_pair_tokens(tokens, lineno):
    if not tokens:
        raise SequenceParseError(f"line {lineno}: missing family name")
    family = tokens[0]
    rest = tokens[1:]
    n = None
    if rest and rest[0].isdigit():
        n = int(rest[0])
        rest = rest[1:]
    if "," in family:
        family, _, tail = family.partition(",")
        if not tail.isdigit():
            raise SequenceParseError(f"line {lineno}: bad size parameter {tail!r}")
        n = int(tail)
    try:
        return ToralPairId(family, n), rest
    except ParamError as exc:
        raise SequenceParseError(f"line {lineno}: {exc}")


def parse_sequence(text):
    """Parse the one-step-per-line construction DSL; errors cite line and token."""
    seed = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head, tokens = tokens[0], tokens[1:]
        if head == "seed":
            if seed is not None:
                raise SequenceParseError(f"line {lineno}: duplicate seed")
            seed, rest = _parse_pair_tokens(tokens, lineno)
            if rest:
                raise SequenceParseError(f"line {lineno}: unexpected token {rest[0]!r}")
        elif head == "attach":
            if seed is None:
                raise SequenceParseError(f"line {lineno}: attach before seed")
            pair, rest = _parse_pair_tokens(tokens, lineno)
            if len(rest) < 2 or rest[0] != "rule":
                raise SequenceParseError(f"line {lineno}: expected 'rule <name>'")
            rule = rest[1]
            if rule not in _RULE_TABLE:
                raise SequenceParseError(f"line {lineno}: unknown rule {rule!r}")
            identify = []
            for token in rest[2:]:
                m = re.fullmatch(r"([abc])->(\S+)", token)
                if not m:
                    raise SequenceParseError(f"line {lineno}: bad identification {token!r}")
                identify.append((m.group(1), m.group(2)))
            try:
                steps.append(ConstructionStep(pair=pair, rule=rule, identify=tuple(identify)))
            except ParamError as exc:
                raise SequenceParseError(f"line {lineno}: {exc}")
        else:
            raise SequenceParseError(f"line {lineno}: unknown directive {head!r}")
    if seed is None:
        raise SequenceParseError("no seed line found")
    return ConstructionSequence(seed=seed, steps=tuple(steps))


def format_sequence(seq):
    def pair_token(pair):
        return pair.family if pair.n is None else f"{pair.family} {pair.n}"

    lines = [f"seed {pair_token(seq.seed)}"]
    for step in seq.steps:
        parts = [f"attach {pair_token(step.pair)} rule {step.rule}"]
        parts += [f"{role}->{target}" for role, target in step.identify]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def acceptance_catalog_ids():
    """The certified ids exercised by the acceptance suite."""
    ids = [ToralPairId("P1"), ToralPairId("P2"), ToralPairId("P2*"),
           ToralPairId("P3"), ToralPairId("P3*")]
    ids += [ToralPairId("P4", n) for n in range(4, 11)]
    ids += [ToralPairId("P4*", n) for n in range(4, 11)]
    ids += [ToralPairId("P5", n) for n in range(1, 7)]
    ids += [ToralPairId("P5*", n) for n in range(1, 7)]
    return ids
