"""Independent semantic plan checking against interval-logic semantics, and
an exhaustive model enumerator used as the encoder's ground-truth oracle.

Everything here works on concrete truth timelines; no constraint-model
machinery is consulted.  Boundary convention: a fluent segment touching
time 0 extends conceptually before it iff the fluent is an initial
condition, and a segment touching the plan's end extends beyond iff the
fluent is a goal (the same before/after context the theory's boundary
intervals provide).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .domain import (
    ConstraintRel,
    Domain,
    Skill,
    SkillKind,
    lowers,
    raises_of,
    validate_domain,
)
from .search import ActionKey, FluentTqaKey, Plan
from .solver import GuardExceededError
from .theory import InvalidDomainError, default_horizon, effective_copy_cap, ground_actions


@dataclass(frozen=True)
class Violation:
    rule: str
    subjects: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "valid" if not self.violations else "invalid"

    @property
    def is_valid(self) -> bool:
        return not self.violations


# -- primitive rule checks on timelines --------------------------------------


def _contains_ok(tl, start, end, total, in_init, in_goal) -> bool:
    if start == 0:
        if not in_init:
            return False
    elif not tl[start - 1]:
        return False
    if not all(tl[start:end]):
        return False
    if end == total:
        return in_goal
    return tl[end]


def _overlaps_ok(tl, start, end, total, in_init) -> bool:
    if start == 0:
        if not in_init:
            return False
    elif not tl[start - 1]:
        return False
    if not tl[start]:
        return False
    falls = sum(1 for x in range(start + 1, end) if tl[x - 1] and not tl[x])
    return falls == 1


def _equals_ok(tl, start, end) -> bool:
    if end - start < 3:
        return False
    if tl[start] or tl[end - 1]:
        return False
    return all(tl[start + 1 : end - 1])


def _transitions(tl) -> tuple[list[int], list[int]]:
    rises, falls = [], []
    for x in range(1, len(tl)):
        if tl[x] and not tl[x - 1]:
            rises.append(x)
        elif tl[x - 1] and not tl[x]:
            falls.append(x)
    return rises, falls


def _strictly_covered(x: int, spans: Iterable[tuple[int, int]]) -> bool:
    return any(s < x < e for s, e in spans)


# -- full plan validation ------------------------------------------------------


def validate_plan(d: Domain, plan: Plan) -> ValidationReport:
    """Check a plan against initial/terminal conditions, frame justification,
    the per-skill temporal constraints, interference, durations, copy
    disjointness, and temporal-action chaining."""
    report = ValidationReport()
    add = report.violations.append
    skill_by_name = d.skill_map()
    ta_by_name = {t.name: t for t in d.temporal_actions}
    declared = set(d.fluent_map())
    total = plan.end_time

    for key, (truth, left, right) in plan.fluent_entries.items():
        if key.fluent not in declared:
            add(Violation("unknown-symbol", (key.fluent,), f"undeclared fluent {key.fluent!r}"))
        if not 0 <= left < right <= total:
            add(
                Violation(
                    "entry-shape",
                    (key.fluent,),
                    f"fluent entry [{left}, {right}) outside [0, {total})",
                )
            )
    for key, (start, end) in plan.action_entries.items():
        if key.name not in skill_by_name and key.name not in ta_by_name:
            add(Violation("unknown-symbol", (key.name,), f"undeclared action {key.name!r}"))
        elif not 1 <= key.actor <= d.actors:
            add(Violation("unknown-symbol", (key.label(),), f"actor {key.actor} out of range"))
        elif key.name in skill_by_name:
            allowed = skill_by_name[key.name].actors
            if allowed is not None and key.actor not in allowed:
                add(
                    Violation(
                        "unknown-symbol",
                        (key.label(),),
                        f"skill {key.name!r} not available to actor {key.actor}",
                    )
                )
        if not 0 <= start < end <= total:
            add(
                Violation(
                    "entry-shape",
                    (key.label(),),
                    f"action interval [{start}, {end}) outside [0, {total})",
                )
            )
    if report.violations:
        return report

    timelines: dict[str, list] = {}
    for fluent in declared:
        row: list = [None] * total
        for key, (truth, left, right) in plan.fluent_entries.items():
            if key.fluent != fluent:
                continue
            for x in range(left, right):
                if row[x] is not None and row[x] != truth:
                    add(
                        Violation(
                            "timeline-coverage",
                            (fluent,),
                            f"conflicting truth at time {x} for {fluent!r}",
                        )
                    )
                    return report
                row[x] = truth
        if any(v is None for v in row):
            gap = next(x for x, v in enumerate(row) if v is None)
            add(
                Violation(
                    "timeline-coverage",
                    (fluent,),
                    f"no truth recorded for {fluent!r} at time {gap}",
                )
            )
            return report
        timelines[fluent] = row

    for fluent in sorted(declared):
        tl = timelines[fluent]
        if fluent in d.init and not tl[0]:
            add(Violation("initial-condition", (fluent,), f"{fluent!r} must start true"))
        if fluent not in d.init and tl[0]:
            add(
                Violation(
                    "initial-condition",
                    (fluent,),
                    f"{fluent!r} is not an initial condition but starts true",
                )
            )
        if fluent in d.goal and not tl[total - 1]:
            add(Violation("terminal-condition", (fluent,), f"{fluent!r} must end true"))

    skill_entries = [
        (key, span)
        for key, span in sorted(plan.action_entries.items(), key=lambda kv: kv[0].label())
        if key.name in skill_by_name
    ]
    for fluent in sorted(declared):
        rises, falls = _transitions(timelines[fluent])
        raiser_spans = [
            span for key, span in skill_entries if fluent in raises_of(d, key.name)
        ]
        lowerer_spans = [span for key, span in skill_entries if fluent in lowers(d, key.name)]
        for x in rises:
            if not _strictly_covered(x, raiser_spans):
                add(
                    Violation(
                        "frame",
                        (fluent,),
                        f"rise of {fluent!r} at time {x} has no covering raiser",
                    )
                )
        for x in falls:
            if not _strictly_covered(x, lowerer_spans):
                add(
                    Violation(
                        "frame",
                        (fluent,),
                        f"fall of {fluent!r} at time {x} has no covering lowerer",
                    )
                )

    for key, (start, end) in skill_entries:
        skill = skill_by_name[key.name]
        if skill.kind is SkillKind.DELAY and end - start != skill.duration:
            add(
                Violation(
                    "duration",
                    (key.label(),),
                    f"delay {key.name!r} spans {end - start}, declared {skill.duration}",
                )
            )
        if skill.kind is SkillKind.TIMER and end - start < 1:
            add(Violation("duration", (key.label(),), f"timer {key.name!r} spans nothing"))
        for spec in skill.constraints:
            tl = timelines[spec.fluent]
            in_init = spec.fluent in d.init
            in_goal = spec.fluent in d.goal
            if spec.rel is ConstraintRel.CONTAINS:
                if not _contains_ok(tl, start, end, total, in_init, in_goal):
                    add(
                        Violation(
                            "contains",
                            (key.label(), spec.fluent),
                            f"{spec.fluent!r} does not strictly contain {key.label()}",
                        )
                    )
            elif spec.rel is ConstraintRel.OVERLAPS:
                if not _overlaps_ok(tl, start, end, total, in_init):
                    add(
                        Violation(
                            "overlaps",
                            (key.label(), spec.fluent),
                            f"{spec.fluent!r} does not overlap {key.label()} from the left",
                        )
                    )
            else:
                if not _equals_ok(tl, start, end):
                    add(
                        Violation(
                            "equals",
                            (key.label(), spec.fluent),
                            f"{spec.fluent!r} does not mirror {key.label()} with one-tick insets",
                        )
                    )

    for first, second in sorted(d.interference):
        tl_a, tl_b = timelines[first], timelines[second]
        clash = next((x for x in range(total) if tl_a[x] and tl_b[x]), None)
        if clash is not None:
            add(
                Violation(
                    "interference",
                    (first, second),
                    f"{first!r} and {second!r} are both true at time {clash}",
                )
            )

    by_ground: dict[tuple[str, int], list] = {}
    for key, span in plan.action_entries.items():
        by_ground.setdefault((key.name, key.actor), []).append(span)
    for (name, actor), spans in sorted(by_ground.items()):
        spans.sort()
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            if e1 > s2:
                add(
                    Violation(
                        "self-overlap",
                        (f"{name}@{actor}",),
                        f"two copies of {name}@{actor} overlap: [{s1},{e1}) and [{s2},{e2})",
                    )
                )

    in_parent = {
        skill_name: ta.name for ta in d.temporal_actions for skill_name in ta.skills
    }
    for key, (start, end) in plan.action_entries.items():
        ta = ta_by_name.get(key.name)
        if ta is not None:
            cursor = start
            for skill_name in ta.skills:
                comp_key = ActionKey(skill_name, key.actor, key.copy)
                comp = plan.action_entries.get(comp_key)
                if comp is None:
                    add(
                        Violation(
                            "temporal-chain",
                            (key.label(), skill_name),
                            f"{key.label()} lacks component {skill_name!r}",
                        )
                    )
                    cursor = None
                    break
                if comp[0] != cursor:
                    add(
                        Violation(
                            "temporal-chain",
                            (key.label(), skill_name),
                            f"component {skill_name!r} starts at {comp[0]}, expected {cursor}",
                        )
                    )
                cursor = comp[1]
            if cursor is not None and cursor != end:
                add(
                    Violation(
                        "temporal-chain",
                        (key.label(),),
                        f"components of {key.label()} end at {cursor}, parent ends at {end}",
                    )
                )
        elif key.name in in_parent:
            parent_key = ActionKey(in_parent[key.name], key.actor, key.copy)
            if parent_key not in plan.action_entries:
                add(
                    Violation(
                        "temporal-chain",
                        (key.label(),),
                        f"component {key.label()} runs without parent {in_parent[key.name]!r}",
                    )
                )

    return report


# -- exhaustive semantic enumeration -----------------------------------------


@dataclass
class EnumerationOutcome:
    status: str  # "sat" | "unsat"
    witness: Optional[Plan] = None
    objective: Optional[int] = None  # best makespan over valid candidates

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"


def _flow_sequences(n: int, boundaries, start_value: bool):
    """All stage-aligned truth profiles: per stage either constant or one
    interior transition (needs two ticks of room).  Yields (timeline, stages)
    where stages is a list of (v, w, split)."""
    total = boundaries[-1]

    def rec(t: int, value: bool, timeline: list, stages: list):
        if t > n:
            yield tuple(timeline), tuple(stages)
            return
        lo, hi = boundaries[t - 1], boundaries[t]
        const = timeline + [value] * (hi - lo)
        yield from rec(t + 1, value, const, stages + [(value, value, lo)])
        for split in range(lo + 1, hi):
            flipped = timeline + [value] * (split - lo) + [not value] * (hi - split)
            yield from rec(
                t + 1, not value, flipped, stages + [(value, not value, split)]
            )

    yield from rec(1, start_value, [], [])


def _count_flow_sequences(n: int, boundaries) -> int:
    count = 1
    for t in range(1, n + 1):
        count *= boundaries[t] - boundaries[t - 1]
    return count


def _span_sets(n: int, cap: int):
    """Ordered disjoint stage spans (l, r) with 1 <= l < r <= n + 1, at most
    cap of them; the empty set means the action never runs."""
    singles = [(l, r) for l in range(1, n + 1) for r in range(l + 1, n + 2)]

    def rec(min_l: int, left: int):
        yield ()
        if left == 0:
            return
        for l, r in singles:
            if l >= min_l:
                for rest in rec(r, left - 1):
                    yield ((l, r),) + rest

    yield from rec(1, cap)


def _duration_fits(skill: Skill, boundaries, span) -> bool:
    l, r = span
    size = boundaries[r - 1] - boundaries[l - 1]
    if skill.kind is SkillKind.DELAY:
        return size == skill.duration
    return size >= 1


def _compositions(stages: int, parts: int):
    if parts == 1:
        yield (stages,)
        return
    for head in range(1, stages - parts + 2):
        for rest in _compositions(stages - head, parts - 1):
            yield (head,) + rest


def enumerate_models(
    d: Domain,
    n_stages: int,
    copy_cap: Optional[int] = None,
    horizon: Optional[int] = None,
    objective: str = "none",
    guard: int = 1 << 22,
) -> EnumerationOutcome:
    """Enumerate every stage-aligned candidate plan in the bounded universe
    and keep those that validate; with objective="makespan" the best
    makespan over valid candidates is reported.

    This is the semantic ground truth the encoder is tested against; it
    shares only the validation rules, never the constraint encoding.
    """
    diags = validate_domain(d)
    if diags:
        raise InvalidDomainError(diags)
    if n_stages < 1:
        raise ValueError("need at least one stage")
    if horizon is None:
        horizon = default_horizon(d, n_stages)
    if horizon < n_stages:
        raise ValueError("horizon too small")
    if objective not in ("none", "makespan"):
        raise ValueError("enumeration supports objective 'none' or 'makespan'")

    n = n_stages
    cap = effective_copy_cap(copy_cap, n)
    actions = ground_actions(d)
    skill_by_name = d.skill_map()
    ta_by_name = {t.name: t for t in d.temporal_actions}
    in_parent = {name for ta in d.temporal_actions for name in ta.skills}
    fluents = [f.name for f in d.fluents]

    boundary_vectors = [
        (0,) + combo for combo in itertools.combinations(range(1, horizon + 1), n)
    ]

    def action_options(ref, boundaries):
        """Per ground action: list of copy tuples (l, r, start, end).
        Temporal actions enumerate their internal component partitions; the
        result maps every involved ground action to its entries."""
        if ref.kind == "skill":
            if ref.name in in_parent:
                return None  # components follow their parent
            skill = skill_by_name[ref.name]
            options = []
            for spans in _span_sets(n, cap):
                if all(_duration_fits(skill, boundaries, s) for s in spans):
                    entries = {
                        ActionKey(ref.name, ref.actor, k + 1): (
                            boundaries[s[0] - 1],
                            boundaries[s[1] - 1],
                        )
                        for k, s in enumerate(spans)
                    }
                    options.append(entries)
            return options
        ta = ta_by_name[ref.name]
        comps = [skill_by_name[name] for name in ta.skills]
        options = []
        for spans in _span_sets(n, cap):
            for partition in _partitions_for(spans, comps, boundaries):
                entries = {}
                for k, (span, comp_spans) in enumerate(zip(spans, partition)):
                    key = ActionKey(ref.name, ref.actor, k + 1)
                    entries[key] = (
                        boundaries[span[0] - 1],
                        boundaries[span[1] - 1],
                    )
                    for comp, cspan in zip(comps, comp_spans):
                        entries[ActionKey(comp.name, ref.actor, k + 1)] = (
                            boundaries[cspan[0] - 1],
                            boundaries[cspan[1] - 1],
                        )
                options.append(entries)
        return options

    def _partitions_for(spans, comps, boundaries):
        """Component stage-spans chaining across each parent span."""
        if not spans:
            yield ()
            return
        per_span = []
        for l, r in spans:
            choices = []
            for comp_sizes in _compositions(r - l, len(comps)):
                cursor = l
                comp_spans = []
                ok = True
                for comp, size in zip(comps, comp_sizes):
                    cspan = (cursor, cursor + size)
                    if not _duration_fits(comp, boundaries, cspan):
                        ok = False
                        break
                    comp_spans.append(cspan)
                    cursor += size
                if ok:
                    choices.append(tuple(comp_spans))
            per_span.append(choices)
        yield from itertools.product(*per_span)

    # guard: count the bounded universe before enumerating
    total_candidates = 0
    per_b_options: dict[tuple, list] = {}
    for boundaries in boundary_vectors:
        option_lists = []
        for ref in actions:
            opts = action_options(ref, boundaries)
            if opts is not None:
                option_lists.append(opts)
        per_b_options[boundaries] = option_lists
        combos = 1
        for opts in option_lists:
            combos *= len(opts)
        flows = 1
        for _ in fluents:
            flows *= _count_flow_sequences(n, boundaries)
        total_candidates += combos * flows
        if total_candidates > guard:
            raise GuardExceededError(
                f"candidate universe exceeds guard {guard} (at least {total_candidates})"
            )

    best_makespan: Optional[int] = None
    best_witness: Optional[Plan] = None

    for boundaries in boundary_vectors:
        total = boundaries[-1]
        for chosen in itertools.product(*per_b_options[boundaries]):
            entries: dict[ActionKey, tuple[int, int]] = {}
            overlapping = False
            for part in chosen:
                entries.update(part)
            by_ground: dict[tuple[str, int], list] = {}
            for key, span in entries.items():
                by_ground.setdefault((key.name, key.actor), []).append(span)
            for spans in by_ground.values():
                spans.sort()
                if any(e1 > s2 for (_, e1), (s2, _) in zip(spans, spans[1:])):
                    overlapping = True
                    break
            if overlapping:
                continue
            makespan = max((end for _, end in entries.values()), default=0)
            if (
                objective == "makespan"
                and best_makespan is not None
                and makespan >= best_makespan
            ):
                continue

            skill_entries = [
                (key, span) for key, span in entries.items() if key.name in skill_by_name
            ]
            survivors: list[list] = []
            feasible = True
            for fluent in fluents:
                raiser_spans = [
                    span for key, span in skill_entries if fluent in raises_of(d, key.name)
                ]
                lowerer_spans = [
                    span for key, span in skill_entries if fluent in lowers(d, key.name)
                ]
                specs = [
                    (key, span, spec.rel)
                    for key, span in skill_entries
                    for spec in skill_by_name[key.name].constraints
                    if spec.fluent == fluent
                ]
                in_init = fluent in d.init
                in_goal = fluent in d.goal
                ok_seqs = []
                for timeline, stages in _flow_sequences(n, boundaries, in_init):
                    if in_goal and not timeline[total - 1]:
                        continue
                    rises, falls = _transitions(timeline)
                    if not all(_strictly_covered(x, raiser_spans) for x in rises):
                        continue
                    if not all(_strictly_covered(x, lowerer_spans) for x in falls):
                        continue
                    ok = True
                    for _key, (start, end), rel in specs:
                        if rel is ConstraintRel.CONTAINS:
                            ok = _contains_ok(timeline, start, end, total, in_init, in_goal)
                        elif rel is ConstraintRel.OVERLAPS:
                            ok = _overlaps_ok(timeline, start, end, total, in_init)
                        else:
                            ok = _equals_ok(timeline, start, end)
                        if not ok:
                            break
                    if ok:
                        ok_seqs.append((timeline, stages))
                if not ok_seqs:
                    feasible = False
                    break
                survivors.append(ok_seqs)
            if not feasible:
                continue

            combo = _compatible_combo(d, fluents, survivors)
            if combo is None:
                continue
            plan = _build_plan(fluents, combo, entries, boundaries, n)
            check = validate_plan(d, plan)
            if not check.is_valid:
                raise AssertionError(
                    f"enumeration produced an invalid witness: {check.violations}"
                )
            if objective == "none":
                return EnumerationOutcome("sat", plan)
            if best_makespan is None or makespan < best_makespan:
                best_makespan, best_witness = makespan, plan

    if best_witness is not None:
        return EnumerationOutcome("sat", best_witness, best_makespan)
    return EnumerationOutcome("unsat")


def _compatible_combo(d: Domain, fluents, survivors):
    """Pick one surviving timeline per fluent such that interfering pairs are
    never co-true; first match in enumeration order."""
    index = {name: i for i, name in enumerate(fluents)}
    earlier_partners: dict[int, list[int]] = {i: [] for i in range(len(fluents))}
    for a, b in sorted(d.interference):
        ia, ib = index[a], index[b]
        lo, hi = min(ia, ib), max(ia, ib)
        earlier_partners[hi].append(lo)

    def rec(i: int, picked: list):
        if i == len(fluents):
            yield list(picked)
            return
        for seq in survivors[i]:
            timeline = seq[0]
            if any(
                any(x and y for x, y in zip(picked[j][0], timeline))
                for j in earlier_partners[i]
            ):
                continue
            picked.append(seq)
            yield from rec(i + 1, picked)
            picked.pop()

    return next(rec(0, []), None)


def _build_plan(fluents, combo, entries, boundaries, n) -> Plan:
    fluent_entries: dict[FluentTqaKey, tuple[bool, int, int]] = {}
    for fluent, (timeline, stages) in zip(fluents, combo):
        for t, (v, w, split) in enumerate(stages, start=1):
            lo, hi = boundaries[t - 1], boundaries[t]
            if v == w:
                fluent_entries[FluentTqaKey(fluent, t, 1)] = (bool(w), lo, hi)
            else:
                fluent_entries[FluentTqaKey(fluent, t, 0)] = (bool(v), lo, split)
                fluent_entries[FluentTqaKey(fluent, t, 1)] = (bool(w), split, hi)
    return Plan(fluent_entries, dict(entries), tuple(boundaries), n)
