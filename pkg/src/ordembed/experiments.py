"""Scripted, seeded reproductions of the operators' headline behaviours.

Each experiment builds presentations and operators, evaluates the symbolic
transfers mechanically, runs checkpointed streams, and emits one JSON report
with named pass/fail assertions. Reports are byte-identical for identical
(experiment, seed, stages): all randomness flows from the run seed and no
wall-clock or path information enters a report.

Experiments assert structure visible at finite stages: block and group
classifications, growing-gap evidence, and eventual-separation thresholds.
They never assert a limit order type as a run fact; symbolic claims are the
transfer checks' business.
"""

from __future__ import annotations

from typing import Optional

from . import analysis, enumop, ordertype
from .analysis import (
    ChainWitness,
    check_linear,
    coordinate_groups,
    extract_chains,
    make_report,
    naive_apply,
    separation_check,
)
from .config import RunConfig
from .enumop import (
    EnumOperator,
    StreamRun,
    op_concat_copies,
    op_concat_hetero,
    op_interval,
    op_lexsum,
    op_power,
    op_product,
    op_rad,
    op_self_power,
    run_stream,
    transfer_check,
)
from .names import Atom
from .ordertype import OrderTypeExpr, parse, reverse
from .presentation import (
    Presentation,
    Schedule,
    concat_sum,
    partition_recombine,
    round_interleave,
    std_presentation,
    strict_growth_interleave,
)


def assertion(name: str, ok: bool, detail: str = "") -> dict:
    return {"name": name, "pass": bool(ok), "detail": detail}


def _transfer_assertion(op: EnumOperator, source: str, expected: str) -> dict:
    src = parse(source)
    want = ordertype.normalize(parse(expected))
    try:
        got = transfer_check(op, src)
    except Exception as exc:  # report, do not crash the experiment
        return assertion(
            f"transfer {op.name}({source})", False, f"raised {exc}"
        )
    return assertion(
        f"transfer {op.name}({source}) = {expected}",
        got == want,
        f"got {got}",
    )


def _mirror(source: str) -> str:
    return str(reverse(parse(source)))


def _stream_assertions(run: StreamRun, label: str) -> list:
    out = []
    linear_ok = all(
        analysis.passed(check_linear(diag)) for diag in run.diagrams
    )
    out.append(assertion(f"{label} linear at every checkpoint", linear_ok))
    monotone_ok = all(
        big.extends(small)
        for small, big in zip(run.diagrams, run.diagrams[1:])
    )
    out.append(assertion(f"{label} checkpoint outputs grow monotonically", monotone_ok))
    return out


def _eligible_groups(run: StreamRun, config: RunConfig) -> list:
    groups = coordinate_groups(run, window=config.window)
    return [g for g in groups if g.history >= config.window + 1]


def _finish(exp_id: str, config: RunConfig, stages: int, assertions: list,
            operator: str = "", presentation: str = "",
            checkpoints=()) -> dict:
    report = make_report(
        exp_id,
        all(a["pass"] for a in assertions),
        [],
        operator=operator,
        presentation=presentation,
        seed=config.seed,
        stages=stages,
        checkpoints=checkpoints,
        config=config.echo(),
    )
    report["assertions"] = assertions
    return report


# ---------------------------------------------------------------------------
# operator experiments
# ---------------------------------------------------------------------------


def exp_lexsum(config: RunConfig, stages: Optional[int] = None, n: int = 2) -> dict:
    stages = stages or min(config.stages, 160)
    op = op_lexsum()
    checks = []
    for m in range(1, 6):
        checks.append(_transfer_assertion(op, f"w*{m}", f"w^2*{m}"))
        checks.append(_transfer_assertion(op, _mirror(f"w*{m}"), _mirror(f"w^2*{m}")))
    pres = std_presentation(parse(f"w*{n}"))
    run = run_stream(op, pres, stages, every=config.checkpoint_interval,
                     max_facts=config.max_facts)
    checks.extend(_stream_assertions(run, "lexsum stream"))
    groups = _eligible_groups(run, config)
    checks.append(assertion(
        "every settled first-coordinate group keeps growing",
        bool(groups) and all(g.classification == "growing" for g in groups),
        f"{len(groups)} settled groups",
    ))
    blocks = analysis.condense(run, window=config.window).blocks
    births = analysis.element_births(run)
    cut = run.stages[-1] - config.window * config.checkpoint_interval
    contained = all(
        len({
            analysis.outer_coordinate(m)
            for m in block.members if births[m] <= cut
        }) <= 1
        for block in blocks
    )
    checks.append(assertion(
        "settled parts of condensed blocks never cross coordinate groups",
        contained, f"{len(blocks)} blocks",
    ))
    return _finish("lexsum", config, stages, checks, operator=op.name,
                   presentation=pres.describe(), checkpoints=run.stages)


def exp_rad(config: RunConfig, stages: Optional[int] = None, k: int = 1) -> dict:
    stages = stages or config.stages
    op = op_rad()
    checks = []
    for j in range(1, 5):
        checks.append(_transfer_assertion(op, f"w*{j + 1}", f"w^2*{j}"))
        checks.append(
            _transfer_assertion(op, _mirror(f"w*{j + 1}"), _mirror(f"w^2*{j}"))
        )
    copies = k + 1
    pres = std_presentation(parse(f"w*{copies}"))
    run = run_stream(op, pres, stages, every=config.checkpoint_interval,
                     max_facts=config.max_facts)
    checks.extend(_stream_assertions(run, "rad stream"))

    settled = _eligible_groups(run, config)
    # the input decodes atom v into copy v mod copies; the lowest copy has
    # finite radii, every other copy unbounded ones
    margin = stages - (config.window + 1) * config.checkpoint_interval
    bounded_ok = True
    growing_ok = True
    seen_bounded = 0
    seen_growing = 0
    for g in settled:
        atom = g.coordinate
        if not isinstance(atom, Atom) or atom.value > margin:
            continue
        if atom.value % copies == 0:
            seen_bounded += 1
            if g.classification != "bounded":
                bounded_ok = False
        else:
            seen_growing += 1
            if g.classification != "growing":
                growing_ok = False
    checks.append(assertion(
        "lowest-copy contributions stay bounded",
        seen_bounded > 0 and bounded_ok, f"{seen_bounded} groups",
    ))
    checks.append(assertion(
        "upper-copy contributions keep growing",
        seen_growing > 0 and growing_ok, f"{seen_growing} groups",
    ))
    try:
        chains = extract_chains(run, n_expected=2, window=config.window)
        tier_ok = len(chains) == 2 and not any(chains[0].gap_flags)
        detail = f"{len(chains)} tiers"
    except analysis.DecompositionFailed as exc:
        tier_ok = False
        detail = str(exc)
    checks.append(assertion(
        "stream condenses into a settled tier below one growing tier",
        tier_ok, detail,
    ))
    return _finish("rad", config, stages, checks, operator=op.name,
                   presentation=pres.describe(), checkpoints=run.stages)


def exp_copies(config: RunConfig, stages: Optional[int] = None, n: int = 2) -> dict:
    checks = []
    rad = op_rad()
    lex = op_lexsum()
    for m in range(1, 7):
        op = op_concat_copies(m, rad)
        checks.append(_transfer_assertion(op, "w*2", f"w^2*{m}"))
        checks.append(_transfer_assertion(op, _mirror("w*2"), _mirror(f"w^2*{m}")))
    for m in range(2, 8):
        if m % 2 == 0:
            op = op_concat_copies(m // 2, rad)
        elif m == 3:
            op = op_concat_hetero([lex])
        else:
            op = op_concat_hetero([rad] * ((m - 3) // 2) + [lex])
        checks.append(_transfer_assertion(op, "w*3", f"w^2*{m}"))
        checks.append(_transfer_assertion(op, _mirror("w*3"), _mirror(f"w^2*{m}")))
    # one tagged copy is order-isomorphic to the plain output
    from .presentation import random_finite_diagram

    diag = random_finite_diagram(8, config.subseed(1))
    single = op_concat_copies(1, rad).apply(diag).ordered
    plain = rad.apply(diag).ordered
    iso = len(single) == len(plain) and all(
        c.inner == p for c, p in zip(single, plain)
    )
    checks.append(assertion("one copy is the plain output, tagged", iso))
    return _finish("copies", config, stages or 0, checks, operator="copies")


def exp_interval(config: RunConfig, stages: Optional[int] = None, n: int = 2) -> dict:
    stages = stages or min(config.stages, 120)
    op = op_interval()
    checks = [_transfer_assertion(op, "w^2", "w^3")]
    for m in range(2, 5):
        checks.append(_transfer_assertion(op, f"w^{m}", f"w^{2 * m - 1}"))
        checks.append(
            _transfer_assertion(op, _mirror(f"w^{m}"), _mirror(f"w^{2 * m - 1}"))
        )
    pres = std_presentation(parse(f"w^{n}"))
    run = run_stream(op, pres, stages, every=config.checkpoint_interval,
                     max_facts=config.max_facts)
    checks.extend(_stream_assertions(run, "interval stream"))
    settled = _eligible_groups(run, config)
    growing = [g for g in settled if g.classification == "growing"]
    checks.append(assertion(
        "settled groups exist and some keep growing",
        bool(settled) and bool(growing),
        f"{len(growing)} growing of {len(settled)}",
    ))
    return _finish("interval", config, stages, checks, operator=op.name,
                   presentation=pres.describe(), checkpoints=run.stages)


def exp_power(config: RunConfig, stages: Optional[int] = None) -> dict:
    stages = stages or min(config.stages, 36)
    op = op_power(config.power_weight_cap)
    checks = [_transfer_assertion(op, "w", "w^w")]
    for m in range(3):
        expected = "w^w" if m == 0 else f"w^(w+{m})"
        checks.append(_transfer_assertion(op, f"w^{m + 1}", expected))
        checks.append(_transfer_assertion(op, _mirror(f"w^{m + 1}"),
                                          _mirror(expected)))
    pres = std_presentation(parse("w"))
    run = run_stream(op, pres, stages, every=max(2, config.checkpoint_interval // 2),
                     max_facts=config.max_facts)
    checks.extend(_stream_assertions(run, "power stream"))
    # diagram equality is exact fact-set equality: the element sequence
    # determines every order fact and vice versa
    replay = naive_apply(op, pres.prefix(stages))
    checks.append(assertion(
        "capped output equals an independent recomputation under the same cap",
        replay == run.final(),
        f"{len(replay)} facts",
    ))
    return _finish("power", config, stages, checks, operator=op.name,
                   presentation=pres.describe(), checkpoints=run.stages)


def exp_selfpow(config: RunConfig, stages: Optional[int] = None, n: int = 2) -> dict:
    stages = stages or min(config.stages, 60)
    checks = []
    square = op_self_power(2)
    for m in range(1, 4):
        checks.append(_transfer_assertion(square, f"w^{m}", f"w^{2 * m}"))
        checks.append(
            _transfer_assertion(square, _mirror(f"w^{m}"), _mirror(f"w^{2 * m}"))
        )
    for k in range(1, 3):
        prod = op_product(op_interval(), op_self_power(k))
        checks.append(_transfer_assertion(prod, "w^2", f"w^{2 * k + 3}"))
        checks.append(
            _transfer_assertion(prod, _mirror("w^2"), _mirror(f"w^{2 * k + 3}"))
        )
    from .presentation import random_finite_diagram

    diag = random_finite_diagram(9, config.subseed(2))
    unit = op_self_power(1).apply(diag).ordered
    iso = len(unit) == len(diag.ordered) and all(
        t.head == p for t, p in zip(unit, diag.ordered)
    )
    checks.append(assertion("first power is identity-shaped", iso))
    pres = std_presentation(parse("w"))
    run = run_stream(op_self_power(n), pres, stages,
                     every=config.checkpoint_interval, max_facts=config.max_facts)
    checks.extend(_stream_assertions(run, "selfpow stream"))
    return _finish("selfpow", config, stages, checks, operator=square.name,
                   presentation=pres.describe(), checkpoints=run.stages)


# ---------------------------------------------------------------------------
# chain and recombination experiments
# ---------------------------------------------------------------------------


def _half_run(op, pres, stages, config) -> StreamRun:
    return run_stream(op, pres, stages, every=config.checkpoint_interval,
                      max_facts=config.max_facts)


def exp_chain_separation(config: RunConfig, stages: Optional[int] = None,
                         mirror: bool = False, swapped: bool = False) -> dict:
    stages = stages or config.stages
    op = op_rad()
    base = "rev(w)" if mirror else "w"
    part_a = std_presentation(parse(base), Schedule(), stride=2, offset=0)
    part_b = std_presentation(parse(base), Schedule(), stride=2, offset=1)
    if swapped:
        part_a, part_b = part_b, part_a
    both = concat_sum([part_a, part_b], tag=False)

    run_a = _half_run(op, part_a, stages // 2, config)
    run_b = _half_run(op, part_b, stages // 2, config)
    run_ab = _half_run(op, both, stages, config)

    checks = _stream_assertions(run_ab, "combined stream")
    chains_a = extract_chains(run_a, n_expected=1, window=config.window)
    chains_b = extract_chains(run_b, n_expected=1, window=config.window)
    checks.append(assertion(
        "each half condenses into one chain",
        len(chains_a) == 1 and len(chains_b) == 1,
        f"{len(chains_a)} and {len(chains_b)} chains",
    ))
    if chains_a and chains_b:
        forward = separation_check(run_ab.final(), chains_a[0], chains_b[0],
                                   window=config.window)
        backward = separation_check(run_ab.final(), chains_b[0], chains_a[0],
                                    window=config.window)
        checks.append(assertion(
            "lower part's chain settles below the upper part's chain",
            forward.separated and forward.threshold <= 0,
            f"threshold {forward.threshold}, "
            f"{len(forward.exceptions)} exceptions",
        ))
        checks.append(assertion(
            "no separation claim in the opposite direction",
            not backward.separated,
            f"threshold {backward.threshold}",
        ))
    return _finish("chain_separation", config, stages, checks, operator=op.name,
                   presentation=both.describe(), checkpoints=run_ab.stages)


def _family_chain(run: StreamRun, config: RunConfig, member_of) -> ChainWitness:
    groups = [
        g for g in _eligible_groups(run, config)
        if g.classification == "growing" and member_of(g.coordinate)
    ]
    reps = tuple(g.members[0] for g in groups)
    flags = tuple(
        analysis.gap_evidence(run, x, y, config.window).growing
        for x, y in zip(reps, reps[1:])
    )
    return ChainWitness(reps, flags)


def exp_recombination(config: RunConfig, stages: Optional[int] = None,
                      k: int = 3, part_size: int = 1) -> dict:
    stages = stages or max(config.stages, 300)
    op = op_rad()
    rows = [
        std_presentation(parse("w"), Schedule(), stride=k, offset=r)
        for r in range(k - 1)
    ]
    tail = std_presentation(parse("w"), Schedule(), stride=k, offset=k - 1)
    pres = partition_recombine(rows, tail, part_size=part_size)

    checks = [_transfer_assertion(op, "w*2", "w^2")]
    checks.append(assertion(
        "recombined presentation targets w*2",
        ordertype.equal(pres.target, parse("w*2")),
    ))
    # more rows dilute per-checkpoint growth; keep roughly one new element
    # per gap per checkpoint so growth stays strictly visible
    every = config.checkpoint_interval * max(1, k - 2)
    run = run_stream(op, pres, stages, every=every,
                     max_facts=config.max_facts)
    checks.extend(_stream_assertions(run, "recombined stream"))

    settled = _eligible_groups(run, config)
    # a recombined element of rank q has radius q+1 once enough sits above
    # it, which takes until stage ~2q; only ranks settled before the last
    # window are asserted bounded
    safe_rank = (stages - (config.window + 2) * config.checkpoint_interval) // 2
    safe_row_pos = max(4, safe_rank // (k - 1) - part_size)
    row_groups = 0
    row_ok = True
    tail_groups = 0
    tail_ok = True
    for g in settled:
        atom = g.coordinate
        if not isinstance(atom, Atom):
            continue
        if atom.value % k == k - 1:
            tail_groups += 1
            if g.classification != "growing":
                tail_ok = False
        elif atom.value // k <= safe_row_pos:
            row_groups += 1
            if g.classification != "bounded":
                row_ok = False
    checks.append(assertion(
        "recombined copy's settled contributions stay bounded",
        row_groups > 0 and row_ok, f"{row_groups} groups",
    ))
    checks.append(assertion(
        "tail copy's contributions keep growing",
        tail_groups > 0 and tail_ok, f"{tail_groups} groups",
    ))
    try:
        chains = extract_chains(run, n_expected=2, window=config.window)
        tier_ok = len(chains) == 2 and any(chains[1].gap_flags)
        detail = f"{len(chains)} tiers"
    except analysis.DecompositionFailed as exc:
        tier_ok = False
        detail = str(exc)
    checks.append(assertion(
        "one settled tier below one growing tier with growing gaps",
        tier_ok, detail,
    ))
    return _finish("recombination", config, stages, checks, operator=op.name,
                   presentation=pres.describe(), checkpoints=run.stages)


def exp_strict_growth(config: RunConfig, stages: Optional[int] = None,
                      part_size: int = 1, omit_tail: bool = False) -> dict:
    stages = stages or max(config.stages, 300)
    op = op_rad()
    head, row_b, row_c, tail = (
        std_presentation(parse("w"), Schedule(), stride=4, offset=r)
        for r in range(4)
    )
    if omit_tail:
        pres = concat_sum([head, round_interleave([row_b, row_c], part_size)],
                          tag=False)
    else:
        pres = strict_growth_interleave(head, row_b, row_c, tail,
                                        part_size=part_size)

    checks = [
        _transfer_assertion(op, "w*2" if omit_tail else "w*3",
                            "w^2" if omit_tail else "w^2*2")
    ]
    run = run_stream(op, pres, stages, every=config.checkpoint_interval,
                     max_facts=config.max_facts)
    checks.extend(_stream_assertions(run, "layout stream"))

    settled = _eligible_groups(run, config)
    head_ok = all(
        g.classification == "bounded"
        for g in settled
        if isinstance(g.coordinate, Atom) and g.coordinate.value % 4 == 0
        and g.coordinate.value // 4 <= stages // 16
    )
    checks.append(assertion("head contributions stay bounded", head_ok))

    middle = _family_chain(
        run, config,
        lambda a: isinstance(a, Atom) and a.value % 4 in (1, 2),
    )
    checks.append(assertion(
        "middle family forms a growing tier",
        len(middle.chain) >= 3 and any(middle.gap_flags),
        f"{len(middle.chain)} growing groups",
    ))
    if omit_tail:
        tail_growing = [
            g for g in settled
            if isinstance(g.coordinate, Atom) and g.coordinate.value % 4 == 3
        ]
        checks.append(assertion(
            "no tail family present", not tail_growing,
        ))
    else:
        upper = _family_chain(
            run, config,
            lambda a: isinstance(a, Atom) and a.value % 4 == 3,
        )
        checks.append(assertion(
            "tail family forms a growing tier",
            len(upper.chain) >= 3 and any(upper.gap_flags),
            f"{len(upper.chain)} growing groups",
        ))
        if middle.chain and upper.chain:
            sep = separation_check(run.final(), middle, upper,
                                   window=config.window)
            checks.append(assertion(
                "middle family settles below the tail family",
                sep.separated and sep.threshold <= 0,
                f"threshold {sep.threshold}",
            ))
    return _finish("strict_growth", config, stages, checks, operator=op.name,
                   presentation=pres.describe(), checkpoints=run.stages)


EXPERIMENTS = {
    "lexsum": exp_lexsum,
    "rad": exp_rad,
    "copies": exp_copies,
    "interval": exp_interval,
    "power": exp_power,
    "selfpow": exp_selfpow,
    "chain_separation": exp_chain_separation,
    "recombination": exp_recombination,
    "strict_growth": exp_strict_growth,
}


def run_experiment(exp_id: str, config: RunConfig,
                   stages: Optional[int] = None, **kwargs) -> dict:
    if exp_id not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {exp_id!r}")
    return EXPERIMENTS[exp_id](config, stages=stages, **kwargs)
