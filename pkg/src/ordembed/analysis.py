"""Finite-stage verification: checkers, reference recomputations, and
approximations of the limit predicates (growing gaps, blocks, chains,
eventual separation) observable in checkpointed runs.

Everything here reports evidence, never limit facts: a "growing" flag means
the measured counts grew strictly across the last few checkpoints, and every
report carries the raw counts so the claim is auditable. Elements too young
to have a history are never the basis of a claim.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from . import enumop, ordertype
from .diagram import FiniteDiagram, linear_order_from_facts
from .enumop import EnumOperator, StreamRun
from .names import Atom, Copy, ElementName, Pair, Tup, canonical_key
from .ordertype import FiniteTerm, OrderTypeExpr, OrdinalTerm, ReversedTerm, UnsupportedForm
from .presentation import random_extension, random_finite_diagram


class DecompositionFailed(ValueError):
    pass


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def make_report(check: str, verdict: bool, evidence: list, *, operator: str = "",
                presentation: str = "", seed: int = 0, stages: int = 0,
                checkpoints=(), config: Optional[dict] = None) -> dict:
    """Uniform JSON report shape shared by all checks and experiments."""
    return {
        "check": check,
        "operator": operator,
        "presentation": presentation,
        "seed": seed,
        "stages": stages,
        "checkpoints": list(checkpoints),
        "verdict": "pass" if verdict else "fail",
        "evidence": evidence,
        "config": dict(config) if config else {},
    }


def passed(report: dict) -> bool:
    return report["verdict"] == "pass"


# ---------------------------------------------------------------------------
# linearity
# ---------------------------------------------------------------------------


def check_linear(elements, pairs=None) -> dict:
    """Verdict on whether the facts form a strict total order.

    Accepts either a FiniteDiagram (always linear by construction, re-checked
    anyway) or an (elements, pairs) fact set.
    """
    if isinstance(elements, FiniteDiagram):
        diag = elements
        elements = list(diag.ordered)
        pairs = [
            (diag.ordered[i], diag.ordered[i + 1]) for i in range(len(diag) - 1)
        ]
    order, reason, witness = linear_order_from_facts(elements, pairs or [])
    evidence = []
    if order is None:
        evidence.append({
            "reason": reason,
            "witness": [n.encode() for n in witness],
        })
    return make_report("linear", order is not None, evidence)


# ---------------------------------------------------------------------------
# independent reference recomputations
# ---------------------------------------------------------------------------


def _sort_by(diag_less, items, less) -> list:
    # order reconstructed through the pairwise comparator alone; the
    # optimized applies never compare, they emit elements pre-sorted
    import functools

    def cmp(a, b):
        if less(a, b):
            return -1
        if less(b, a):
            return 1
        return 0

    return sorted(items, key=functools.cmp_to_key(cmp))


def naive_apply(op: EnumOperator, diag: FiniteDiagram) -> FiniteDiagram:
    """From-scratch recomputation of each operator from its plain definition.

    Deliberately structured as generate-then-sort with explicit comparators,
    unlike the optimized applies which emit elements already in order.
    """
    if isinstance(op, enumop.LexSumOperator):
        items = [Pair(a, b) for a in diag.ordered for b in diag.ordered]

        def less(p, q):
            if p.first != q.first:
                return diag.less(p.first, q.first)
            return diag.less(p.second, q.second)

        return FiniteDiagram(_sort_by(diag.less, items, less))

    if isinstance(op, enumop.RadiusOperator):
        items = []
        for a in diag.ordered:
            if not isinstance(a, Atom):
                raise enumop.NonAtomInput(a.encode())
            left = sum(1 for b in diag.ordered if not diag.less(a, b))
            right = sum(1 for b in diag.ordered if not diag.less(b, a))
            radius = min(left, right)
            items.extend(
                Pair(a, d) for d in diag.ordered if d.value <= radius
            )

        def less(p, q):
            if p.first != q.first:
                return diag.less(p.first, q.first)
            return diag.less(p.second, q.second)

        return FiniteDiagram(_sort_by(diag.less, items, less))

    if isinstance(op, enumop.IntervalOperator):
        items = []
        for a in diag.ordered:
            if not isinstance(a, Atom):
                raise enumop.NonAtomInput(a.encode())
            small = [x for x in diag.ordered if x.value <= a.value]
            below = [x for x in small if x == a or diag.less(x, a)]
            above = [x for x in small if x == a or diag.less(a, x)]
            b = below[0]
            for x in below:
                if diag.less(x, b):
                    b = x
            c = above[0]
            for x in above:
                if diag.less(c, x):
                    c = x
            items.extend(
                Pair(a, d)
                for d in diag.ordered
                if (d == b or diag.less(b, d)) and (d == c or diag.less(d, c))
            )

        def less(p, q):
            if p.first != q.first:
                return diag.less(p.first, q.first)
            return diag.less(p.second, q.second)

        return FiniteDiagram(_sort_by(diag.less, items, less))

    if isinstance(op, enumop.PowerOperator):
        items = []
        for a in diag.ordered:
            if not isinstance(a, Atom):
                raise enumop.NonAtomInput(a.encode())
            if a.value == 0:
                items.append(Tup(a, ()))
                continue
            # generate-and-test, discarding partial tuples already over
            # the cap (component values never decrease a tuple's weight)
            budget = op.weight_cap - a.value
            pool = [d for d in diag.ordered if d.value <= budget]
            stack = [((), 0)]
            for _ in range(a.value):
                stack = [
                    (t + (d,), w + d.value)
                    for t, w in stack for d in pool
                    if w + d.value <= budget
                ]
            items.extend(Tup(a, t) for t, _ in stack)

        def less(p, q):
            if p.head != q.head:
                return diag.less(p.head, q.head)
            # rightmost stored component is least significant, so walk from
            # the end of the stored tuple backwards
            for x, y in zip(reversed(p.rest), reversed(q.rest)):
                if x != y:
                    return diag.less(x, y)
            return False

        return FiniteDiagram(_sort_by(diag.less, items, less))

    if isinstance(op, enumop.ConcatCopiesOperator):
        inner = naive_apply(op.inner, diag).ordered
        return FiniteDiagram(
            Copy(j, x) for j in range(op.k) for x in inner
        )

    if isinstance(op, enumop.ConcatHeteroOperator):
        out = []
        for j, part in enumerate(op.ops):
            out.extend(Copy(j, x) for x in naive_apply(part, diag).ordered)
        return FiniteDiagram(out)

    if isinstance(op, enumop.SelfPowerOperator):
        stack = [()]
        for _ in range(op.k):
            stack = [t + (d,) for t in stack for d in diag.ordered]
        items = [Tup(t[-1], t[:-1][::-1]) for t in stack]

        def less(p, q):
            if p.head != q.head:
                return diag.less(p.head, q.head)
            for x, y in zip(reversed(p.rest), reversed(q.rest)):
                if x != y:
                    return diag.less(x, y)
            return False

        return FiniteDiagram(_sort_by(diag.less, items, less))

    if isinstance(op, enumop.ProductOperator):
        lo = naive_apply(op.left, diag).ordered
        ro = naive_apply(op.right, diag).ordered
        items = [Pair(x, y) for x in lo for y in ro]
        lo_rank = {x: i for i, x in enumerate(lo)}
        ro_rank = {y: i for i, y in enumerate(ro)}

        def less(p, q):
            if p.second != q.second:
                return ro_rank[p.second] < ro_rank[q.second]
            return lo_rank[p.first] < lo_rank[q.first]

        return FiniteDiagram(_sort_by(diag.less, items, less))

    raise ValueError(f"no reference recomputation for {op.name}")


# ---------------------------------------------------------------------------
# monotonicity, oracle, and schedule checks
# ---------------------------------------------------------------------------


def _first_lost_fact(small: FiniteDiagram, big: FiniteDiagram):
    for name in small.ordered:
        if name not in big:
            return {"kind": "element", "fact": name.encode()}
    last = None
    for name in small.ordered:
        if last is not None and not big.less(last, name):
            return {
                "kind": "order",
                "fact": f"{last.encode()} < {name.encode()}",
            }
        last = name
    return None


def check_monotone(op: EnumOperator, trials: int, seed: int, max_size: int = 12,
                   max_extra: int = 5) -> dict:
    """Seeded random diagrams and extensions; asserts output inclusion.

    A violation is minimized by greedily dropping added elements while the
    violation persists, and reported with the lost fact.
    """
    evidence = []
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        size = rng.randint(0, max_size)
        small = random_finite_diagram(size, rng.randrange(2**32))
        extra = rng.randint(1, max_extra)
        big = random_extension(small, extra, rng.randrange(2**32))
        out_small = op.apply(small)
        out_big = op.apply(big)
        if out_big.extends(out_small):
            continue
        # minimize: drop added elements one at a time while still violating
        added = [n for n in big.ordered if n not in small]
        changed = True
        while changed:
            changed = False
            for x in list(added):
                trimmed = big.restrict(set(big.names()) - {x})
                if not op.apply(trimmed).extends(out_small):
                    big = trimmed
                    added.remove(x)
                    out_big = op.apply(big)
                    changed = True
        lost = _first_lost_fact(out_small, out_big)
        evidence.append({
            "trial": trial,
            "input": [n.encode() for n in small.ordered],
            "extension": [n.encode() for n in big.ordered],
            "lost": lost,
        })
        break
    return make_report(
        "monotone", not evidence, evidence, operator=op.name, seed=seed,
        stages=trials,
    )


def oracle_compare(op: EnumOperator, trials: int, seed: int,
                   reference: Callable = naive_apply, max_size: int = 12) -> dict:
    """Exact fact-set equality of the optimized apply and the reference."""
    evidence = []
    for trial in range(trials):
        rng = random.Random(seed * 999_983 + trial)
        size = rng.randint(0, max_size)
        diag = random_finite_diagram(size, rng.randrange(2**32))
        fast = op.apply(diag)
        slow = reference(op, diag)
        if fast.fact_set() != slow.fact_set():
            missing = sorted(slow.fact_set() - fast.fact_set())[:5]
            extra = sorted(fast.fact_set() - slow.fact_set())[:5]
            evidence.append({
                "trial": trial,
                "input": [n.encode() for n in diag.ordered],
                "missing": [" ".join(f) for f in missing],
                "extra": [" ".join(f) for f in extra],
            })
            break
    return make_report(
        "oracle", not evidence, evidence, operator=op.name, seed=seed,
        stages=trials,
    )


def check_schedule_invariance(op: EnumOperator, size: int = 15,
                              schedules: int = 20, seed: int = 0) -> dict:
    """One fixed finite order, many insertion histories, identical outputs.

    Each history applies the operator to every prefix (a stream with its own
    schedule); the final outputs must be identical fact sets and every
    intermediate step inclusion-monotone.
    """
    base = random_finite_diagram(size, seed)
    reference_out = op.apply(base)
    evidence = []
    for k in range(schedules):
        rng = random.Random(seed * 777_767 + k)
        insertion = list(base.ordered)
        rng.shuffle(insertion)
        previous = op.apply(FiniteDiagram(()))
        for t in range(1, size + 1):
            prefix = base.restrict(insertion[:t])
            out = op.apply(prefix)
            if not out.extends(previous):
                evidence.append({"schedule": k, "step": t, "reason": "not monotone"})
                break
            previous = out
        else:
            if previous != reference_out:
                evidence.append({"schedule": k, "reason": "final output differs"})
        if evidence:
            break
    return make_report(
        "schedule", not evidence, evidence, operator=op.name, seed=seed,
        stages=schedules,
    )


# ---------------------------------------------------------------------------
# gap evidence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapEvidence:
    lower: ElementName
    upper: ElementName
    stages: tuple
    counts: tuple
    window: int
    growing: bool

    def to_json(self) -> dict:
        return {
            "lower": self.lower.encode(),
            "upper": self.upper.encode(),
            "stages": list(self.stages),
            "counts": list(self.counts),
            "growing": self.growing,
        }


def gap_evidence(run: StreamRun, lower: ElementName, upper: ElementName,
                 window: int = 3) -> GapEvidence:
    """Open-interval sizes of (lower, upper) at the checkpoints where both
    are present; `growing` means the last `window` counts strictly increase.
    Too little co-presence never yields a growth claim."""
    if lower == upper:
        raise ValueError("gap evidence needs two distinct elements")
    final = run.final()
    if lower not in final or upper not in final or not final.less(lower, upper):
        raise ValueError(
            f"{lower.encode()} < {upper.encode()} does not hold at the final stage"
        )
    stages = []
    counts = []
    for stage, diag in zip(run.stages, run.diagrams):
        if lower in diag and upper in diag:
            stages.append(stage)
            counts.append(diag.interval_size(lower, upper))
    tail = counts[-window:]
    growing = len(tail) >= window and all(
        tail[i] < tail[i + 1] for i in range(len(tail) - 1)
    )
    return GapEvidence(lower, upper, tuple(stages), tuple(counts), window, growing)


# ---------------------------------------------------------------------------
# condensation into blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    members: tuple
    sizes: tuple
    history: int
    classification: str  # "bounded" | "growing"
    bound: Optional[int]

    def min(self) -> ElementName:
        return self.members[0]

    def max(self) -> ElementName:
        return self.members[-1]

    def to_json(self) -> dict:
        return {
            "min": self.min().encode(),
            "max": self.max().encode(),
            "size": len(self.members),
            "sizes": list(self.sizes),
            "classification": self.classification,
            "bound": self.bound,
        }


@dataclass(frozen=True)
class BlockReport:
    stages: tuple
    window: int
    blocks: tuple

    def block_of(self, name: ElementName) -> Block:
        for block in self.blocks:
            if name in block.members:
                return block
        raise KeyError(name.encode())

    def eligible(self) -> tuple:
        return tuple(b for b in self.blocks if b.history >= self.window + 1)


def _births(run: StreamRun) -> dict:
    births: dict = {}
    for t, diag in enumerate(run.diagrams):
        for name in diag.ordered:
            if name not in births:
                births[name] = t
    return births


def element_births(run: StreamRun) -> dict:
    """First checkpoint stage at which each final element is present."""
    return {name: run.stages[t] for name, t in _births(run).items()}


def _co_counts(run: StreamRun, births: dict, x: ElementName, y: ElementName) -> list:
    start = max(births[x], births[y])
    return [
        run.diagrams[t].interval_size(x, y)
        for t in range(start, len(run.diagrams))
    ]


def condense(run: StreamRun, window: int = 3) -> BlockReport:
    """Group elements whose pairwise distances stopped changing.

    Two final-stage neighbours belong to one block when their open interval
    was constant over the last `window` checkpoints with both present; fresh
    elements that sit flush against a block (zero gap whenever co-present)
    are attached to it, so a block that keeps acquiring such elements shows
    a strictly growing size history and is classified growing.
    """
    final = run.final()
    seq = final.ordered
    births = _births(run)
    if not seq:
        return BlockReport(run.stages, window, ())

    groups: list = [[seq[0]]]
    for i in range(len(seq) - 1):
        x, y = seq[i], seq[i + 1]
        counts = _co_counts(run, births, x, y)
        stable = len(counts) >= window and len(set(counts[-window:])) == 1
        if stable:
            groups[-1].append(y)
        else:
            groups.append([y])

    # frontier attachment: a group too young to have a stable history joins
    # the neighbouring group it sits flush against
    fresh_cut = max(0, len(run.diagrams) - window)

    def is_fresh(group: list) -> bool:
        return all(births[n] >= fresh_cut for n in group)

    attached: list = []
    leading: list = []
    for group in groups:
        if is_fresh(group):
            if attached:
                counts = _co_counts(run, births, attached[-1][-1], group[0])
                if all(c == 0 for c in counts):
                    attached[-1].extend(group)
                    continue
            else:
                leading.append(group)
                continue
        attached.append(group)
    for group in reversed(leading):
        if attached:
            counts = _co_counts(run, births, group[-1], attached[0][0])
            if all(c == 0 for c in counts):
                attached[0][0:0] = group
                continue
        attached.insert(0, group)

    blocks = []
    for group in attached:
        sizes = tuple(
            sum(1 for n in group if births[n] <= t) for t in range(len(run.diagrams))
        )
        history = sum(1 for s in sizes if s > 0)
        tail = sizes[-window:]
        growing = len(tail) >= window and all(
            tail[i] < tail[i + 1] for i in range(len(tail) - 1)
        )
        blocks.append(
            Block(
                members=tuple(group),
                sizes=sizes,
                history=history,
                classification="growing" if growing else "bounded",
                bound=None if growing else len(group),
            )
        )
    return BlockReport(run.stages, window, tuple(blocks))


# ---------------------------------------------------------------------------
# per-coordinate contribution groups
# ---------------------------------------------------------------------------


def outer_coordinate(name: ElementName) -> ElementName:
    """The input element a structured output element was built from."""
    if isinstance(name, Pair):
        return name.first
    if isinstance(name, Tup):
        return name.head
    if isinstance(name, Copy):
        return Copy(name.index, outer_coordinate(name.inner))
    return name


@dataclass(frozen=True)
class CoordinateGroup:
    coordinate: ElementName
    members: tuple
    sizes: tuple
    history: int
    classification: str
    bound: Optional[int]


def coordinate_groups(run: StreamRun, window: int = 3) -> tuple:
    """Group the final output by originating input element and classify each
    group's size history: strictly growing over the last `window` checkpoints
    versus bounded (stable) with its final size as the bound."""
    final = run.final()
    births = _births(run)
    ordered_groups: dict = {}
    for name in final.ordered:
        ordered_groups.setdefault(outer_coordinate(name), []).append(name)
    out = []
    for coord, members in ordered_groups.items():
        sizes = tuple(
            sum(1 for n in members if births[n] <= t)
            for t in range(len(run.diagrams))
        )
        history = sum(1 for s in sizes if s > 0)
        tail = sizes[-window:]
        growing = len(tail) >= window and all(
            tail[i] < tail[i + 1] for i in range(len(tail) - 1)
        )
        out.append(
            CoordinateGroup(
                coordinate=coord,
                members=tuple(members),
                sizes=sizes,
                history=history,
                classification="growing" if growing else "bounded",
                bound=None if growing else len(members),
            )
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# chains and separation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainWitness:
    chain: tuple
    gap_flags: tuple

    def to_json(self) -> dict:
        return {
            "length": len(self.chain),
            "first": self.chain[0].encode() if self.chain else None,
            "last": self.chain[-1].encode() if self.chain else None,
            "growing_gaps": sum(1 for f in self.gap_flags if f),
        }


def _thin(items: list, max_len: int) -> list:
    if len(items) <= max_len:
        return items
    step = (len(items) - 1) / (max_len - 1)
    picked = [items[round(i * step)] for i in range(max_len)]
    out = []
    for x in picked:
        if not out or out[-1] != x:
            out.append(x)
    return out


def extract_chains(run: StreamRun, n_expected: int, window: int = 3,
                   max_len: int = 64, settle_factor: int = 3) -> list:
    """Decompose the settled part of the run into at most n_expected chains.

    Only elements born in the first 1/settle_factor of the run are analysed
    (later arrivals are still unsettled frontier), but their gaps are
    measured across the whole run. Settled neighbours whose mutual gaps
    stopped changing link into one chain; a maximal region whose internal
    gaps all keep growing folds into a single growing-tier chain, whose gap
    flags then record the growth. More chains than n_expected raises
    DecompositionFailed. Deterministic throughout: blocks are processed
    bottom-up and block boundaries are element-disjoint.
    """
    final = run.final()
    births = _births(run)
    horizon = run.stages[-1] // max(1, settle_factor)
    old = [n for n in final.ordered if run.stages[births[n]] <= horizon]
    if not old:
        return []

    # stability blocks over the settled elements, gaps measured in the full
    # diagrams so later insertions between old neighbours are visible
    groups: list = [[old[0]]]
    for x, y in zip(old, old[1:]):
        counts = _co_counts(run, births, x, y)
        if len(counts) >= window and len(set(counts[-window:])) == 1:
            groups[-1].append(y)
        else:
            groups.append([y])

    boundary = [
        gap_evidence(run, left[-1], right[0], window).growing
        for left, right in zip(groups, groups[1:])
    ]
    # a block whose gaps grow on both sides sits inside a growing tier; at
    # the extremes the missing outer boundary inherits the inner one
    tier = []
    for i in range(len(groups)):
        left = boundary[i - 1] if i > 0 else False
        right = boundary[i] if i < len(boundary) else (boundary[-1] if boundary else False)
        tier.append(left and right)

    chains_blocks: list = [[0]]
    for i in range(1, len(groups)):
        same_tier = tier[i] and tier[i - 1]
        stable_link = not boundary[i - 1] and not tier[i] and not tier[i - 1]
        if same_tier or stable_link:
            chains_blocks[-1].append(i)
        else:
            chains_blocks.append([i])

    if len(chains_blocks) > n_expected:
        raise DecompositionFailed(
            f"found {len(chains_blocks)} chains, expected at most {n_expected}"
        )

    chains = []
    for indices in chains_blocks:
        members = [n for i in indices for n in groups[i]]
        members = _thin(members, max_len)
        flags = []
        for x, y in zip(members, members[1:]):
            flags.append(gap_evidence(run, x, y, window).growing)
        chains.append(ChainWitness(tuple(members), tuple(flags)))
    return chains


@dataclass(frozen=True)
class SeparationReport:
    chain_a: ChainWitness
    chain_b: ChainWitness
    exceptions: tuple
    threshold: int
    separated: bool

    def to_json(self) -> dict:
        return {
            "chain_a": self.chain_a.to_json(),
            "chain_b": self.chain_b.to_json(),
            "exceptions": [list(e) for e in self.exceptions[:20]],
            "exception_count": len(self.exceptions),
            "threshold": self.threshold,
            "separated": self.separated,
        }


def separation_check(final: FiniteDiagram, chain_a: ChainWitness,
                     chain_b: ChainWitness, window: int = 3) -> SeparationReport:
    """Least q with a_i < b_j for all i, j > q at the final stage.

    Exceptions are the violating index pairs; the check claims separation
    only when at least `window` indices of both chains lie above q.
    """
    exceptions = []
    for i, a in enumerate(chain_a.chain):
        for j, b in enumerate(chain_b.chain):
            ok = a in final and b in final and final.less(a, b)
            if not ok:
                exceptions.append((i, j))
    if exceptions:
        q = max(min(i, j) for i, j in exceptions)
    else:
        q = -1
    evidence_depth = min(len(chain_a.chain), len(chain_b.chain)) - 1 - q
    return SeparationReport(
        chain_a=chain_a,
        chain_b=chain_b,
        exceptions=tuple(exceptions),
        threshold=q,
        separated=evidence_depth >= window,
    )


# ---------------------------------------------------------------------------
# truncation oracle for symbolic equality
# ---------------------------------------------------------------------------

_ORACLE_DEPTH_SAMPLES = 4


def _power_keys(k: int, depth: int):
    if k <= 0:
        yield ()
        return
    for b in range(depth):
        for rest in _power_keys(k - 1, depth):
            yield (b,) + rest


def _truncation_points(expr: OrderTypeExpr, depth: int) -> list:
    """Sampled points of `expr` as (key, birth_depth); keys are stable as the
    depth grows, so deeper samples extend shallower ones."""
    points = []
    for idx, term in enumerate(expr.terms):
        if isinstance(term, FiniteTerm):
            for j in range(term.count):
                points.append(((idx, j), 1))
            continue
        exp = term.exponent
        if not (exp.is_finite() and len(exp.terms) <= 1):
            raise UnsupportedForm(
                f"truncation sampling covers finite exponents only, got {expr}"
            )
        k = exp.terms[0].count if exp.terms else 0
        if k > 4:
            raise UnsupportedForm("truncation sampling covers exponents <= 4")
        sign = -1 if isinstance(term, ReversedTerm) else 1
        for copy in range(term.coefficient):
            for key in _power_keys(k, depth):
                birth = (max(key) if key else 0) + 1
                skey = (idx, copy) + tuple(sign * x for x in key)
                points.append((skey, birth))
    points.sort(key=lambda p: p[0])
    return points


def _signature(expr: OrderTypeExpr, depth: int) -> tuple:
    """Shape invariant computed purely from finite samples of the order.

    Points are sampled at a ladder of horizons. The freshest cohort is kept
    aside as frontier material: its neighbourhoods are still unknowable, but
    it witnesses where insertion pressure lives. The rest is condensed level
    by level: neighbours whose mutual distance stopped changing merge; a
    group with arrivals becomes a growing token tagged by arrival direction,
    a settled group a bounded token with its members' shapes in order.
    Frontier pieces flush against settled structure join it as arrivals;
    detached frontier pieces stay between tokens as count material for the
    next level and join one level later. The recursion ends when one token
    remains. Isomorphic expressions in the supported fragment produce equal
    signatures; unequal signatures refute isomorphism.
    """
    window = 2
    top = depth + 5
    points = _truncation_points(expr, top)
    if not points:
        return ("empty",)

    # entries: (id, birth, is_structure, sig) in final order
    entries = [
        [key, birth, birth < top, ("pt",)] for key, birth in points
    ]

    for _ in range(12):
        ids = [e[0] for e in entries]
        birth = {e[0]: e[1] for e in entries}
        structural = {e[0]: e[2] for e in entries}
        sig = {e[0]: e[3] for e in entries}
        index = {k: i for i, k in enumerate(ids)}

        positions: dict = {}
        for t in range(1, top + 1):
            pos: dict = {}
            for k in ids:
                if birth[k] <= t:
                    pos[k] = len(pos)
            positions[t] = pos

        def counts(x, y):
            start = max(birth[x], birth[y])
            return [positions[t][y] - positions[t][x] - 1
                    for t in range(start, top + 1)]

        structure = [k for k in ids if structural[k]]
        if not structure:
            return ("frontier", tuple(sorted({sig[k] for k in ids})))

        groups = [[structure[0]]]
        for x, y in zip(structure, structure[1:]):
            c = counts(x, y)
            if len(c) >= window and len(set(c[-window:])) == 1:
                groups[-1].append(y)
            else:
                groups.append([y])

        # intrinsic growth of each group, before attachments
        group_dirs: list = []
        for g in groups:
            old = [x for x in g if birth[x] <= top - window]
            young = [x for x in g if birth[x] > top - window]
            dirs: set = set()
            if not old:
                dirs = {"up", "down", "fresh"}
            else:
                hi = max(index[x] for x in old)
                lo = min(index[x] for x in old)
                for x in young:
                    i = index[x]
                    dirs.add("up" if i > hi else "down" if i < lo else "mid")
            group_dirs.append(dirs)

        # a frontier piece flush against a group joins it only when that
        # group is growing towards the piece; flushness is final adjacency,
        # which by monotonicity means nothing was ever in between
        attached: dict = {gi: [] for gi in range(len(groups))}
        made_attachment = False
        member_of = {}
        for gi, g in enumerate(groups):
            for x in g:
                member_of[x] = gi
        for k in ids:
            if structural[k]:
                continue
            i = index[k]
            left = ids[i - 1] if i > 0 else None
            right = ids[i + 1] if i + 1 < len(ids) else None
            left_pull = (
                left is not None and structural[left]
                and "up" in group_dirs[member_of[left]]
            )
            right_pull = (
                right is not None and structural[right]
                and "down" in group_dirs[member_of[right]]
            )
            if left_pull:
                target, side = member_of[left], "up"
            elif right_pull:
                target, side = member_of[right], "down"
            else:
                continue
            attached[target].append((k, side))
            member_of[k] = target
            made_attachment = True

        def member_profile(members) -> tuple:
            # per distinct shape: an arriving family reads "many", otherwise
            # the exact count; keeps "one w^2 block" apart from "w^2 blocks
            # keep coming" after the set collapses multiplicity. Frontier
            # pieces carry no reliable shape and are left out entirely.
            by_sig: dict = {}
            for x, s in members:
                if s[0] == "G" and s[1] == ("fresh",):
                    continue
                by_sig.setdefault(s, []).append(birth.get(x, top))
            entries = []
            for s, bs in by_sig.items():
                if len(bs) >= 2 and max(bs) >= top - window:
                    entries.append((s, "many"))
                else:
                    entries.append((s, str(len(bs))))
            return tuple(sorted(entries))

        tokens = []
        for gi, g in enumerate(groups):
            old = [x for x in g if birth[x] <= top - window]
            arrival_dirs = {side for _, side in attached[gi]}
            members = [(x, sig[x]) for x in g]
            members.extend((k, sig[k]) for k, _ in attached[gi])
            if not old:
                gsig = ("G", ("fresh",), member_profile(members))
            elif group_dirs[gi] or arrival_dirs:
                dirs = (group_dirs[gi] | arrival_dirs) - {"fresh"}
                gsig = ("G", tuple(sorted(dirs)), member_profile(members))
            else:
                gsig = ("B", tuple(sig[x] for x in g))
            first = min(index[x] for x in g)
            b = min(birth[x] for x in g)
            tokens.append((first, ("tok", gi), b, True, gsig))

        # maximal runs of detached frontier pieces carry over as one piece
        carried = []
        run: list = []
        for k in ids:
            if not structural[k] and member_of.get(k) is None:
                run.append(k)
                continue
            if run:
                carried.append(run)
                run = []
        if run:
            carried.append(run)
        for chain in carried:
            first = index[chain[0]]
            b = min(birth[x] for x in chain)
            csig = ("G", ("fresh",), member_profile([(x, sig[x]) for x in chain]))
            tokens.append((first, ("chain", first), b, False, csig))

        tokens.sort(key=lambda e: e[0])
        if len(tokens) == 1 and tokens[0][3]:
            return tokens[0][4]
        if len(groups) == len(structure) and not made_attachment:
            return ("seq", tuple(e[4] for e in tokens if e[3]))
        entries = [[tid, b, s, gsig] for _, tid, b, s, gsig in tokens]
    return ("seq", tuple(e[3] for e in entries if e[2]))


def truncation_iso_oracle(e1: OrderTypeExpr, e2: OrderTypeExpr,
                          depth: int = 4) -> bool:
    """Compatibility of two expressions judged purely from finite samples.

    True means the samples could not tell the orders apart (compatible);
    False refutes isomorphism - refutations are sound, never claims of
    equality. On expressions with few terms and exponents up to 2 the
    answer coincides with symbolic equality; for exponent-3 terms some
    distinct pairs are not refuted (a block riding the growing side of a
    same-polarity higher power can look like one more arriving copy at
    every finite depth). Finite exponents up to 4 are accepted.
    """
    return _signature(e1, depth) == _signature(e2, depth)
