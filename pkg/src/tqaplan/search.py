"""Outer search over the stage count, decoding of satisfying assignments
into plans and timing diagrams, and the plan document format."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .domain import Domain
from .encoder import cost_scale, encode
from .intervals import Interval
from .solver import Assignment, SolverConfig, solve
from .theory import TheoryShape, instantiate

FOUND, EXHAUSTED, RESOURCE_LIMIT = "found", "exhausted", "limit"


class PlanFormatError(ValueError):
    pass


@dataclass(frozen=True)
class FluentTqaKey:
    """One fluent sub-interval assertion: stage plus part (0 = opening
    sub-interval, 1 = closing; constant stages emit only part 1)."""

    fluent: str
    stage: int
    part: int


@dataclass(frozen=True)
class ActionKey:
    name: str
    actor: int
    copy: int

    def label(self) -> str:
        return f"{self.name}@{self.actor}#{self.copy}"


@dataclass
class Plan:
    """Partial map from TQA keys to (truth, start, end) triples."""

    fluent_entries: dict[FluentTqaKey, tuple[bool, int, int]]
    action_entries: dict[ActionKey, tuple[int, int]]
    boundaries: tuple[int, ...]
    n_used: int
    objective: Optional[Fraction] = None

    @property
    def end_time(self) -> int:
        return self.boundaries[-1]


@dataclass(frozen=True)
class Segment:
    truth: bool
    interval: Interval


@dataclass
class TimingDiagram:
    """Per-fluent maximal constant-truth segments plus action intervals."""

    fluents: dict[str, tuple[Segment, ...]]
    actions: tuple[tuple[ActionKey, Interval], ...]
    boundaries: tuple[int, ...]

    def true_segments(self, fluent: str) -> list[Interval]:
        return [s.interval for s in self.fluents[fluent] if s.truth]

    def action_interval(self, name: str, actor: int = 1, copy: int = 1) -> Interval:
        for key, interval in self.actions:
            if (key.name, key.actor, key.copy) == (name, actor, copy):
                return interval
        raise KeyError(f"no action entry {name}@{actor}#{copy}")


def decode(shape: TheoryShape, assignment: Assignment) -> tuple[Plan, TimingDiagram]:
    """Turn a satisfying assignment into per-stage TQA entries and the merged
    timing diagram.  Trips an assertion if the flow exactly-one invariant is
    broken (that would be a solver or encoder bug, not bad input)."""
    n = shape.n_stages
    boundaries = tuple(assignment.ints[shape.boundary_id[t]] for t in range(n + 1))
    fluent_entries: dict[FluentTqaKey, tuple[bool, int, int]] = {}
    segments: dict[str, tuple[Segment, ...]] = {}
    for fluent in shape.fluent_names:
        raw: list[Segment] = []
        for t in range(1, n + 1):
            tags = [
                (v, w)
                for v in (0, 1)
                for w in (0, 1)
                if assignment.bools[shape.flow_id[(fluent, t, v, w)]]
            ]
            if len(tags) != 1:
                raise AssertionError(
                    f"flow invariant violated for ({fluent}, stage {t}): {tags}"
                )
            v, w = tags[0]
            left, right = boundaries[t - 1], boundaries[t]
            if v == w:
                fluent_entries[FluentTqaKey(fluent, t, 1)] = (bool(w), left, right)
                raw.append(Segment(bool(w), Interval(left, right)))
            else:
                split = assignment.ints[shape.split_id[(fluent, t)]]
                fluent_entries[FluentTqaKey(fluent, t, 0)] = (bool(v), left, split)
                fluent_entries[FluentTqaKey(fluent, t, 1)] = (bool(w), split, right)
                raw.append(Segment(bool(v), Interval(left, split)))
                raw.append(Segment(bool(w), Interval(split, right)))
        segments[fluent] = _merge_segments(raw)

    action_entries: dict[ActionKey, tuple[int, int]] = {}
    diagram_actions = []
    for ai, ref in enumerate(shape.actions):
        for k in shape.copies():
            if not assignment.bools[shape.use_id[(ai, k)]]:
                continue
            start = assignment.ints[shape.start_id[(ai, k)]]
            end = assignment.ints[shape.end_id[(ai, k)]]
            key = ActionKey(ref.name, ref.actor, k)
            action_entries[key] = (start, end)
            diagram_actions.append((key, Interval(start, end)))

    plan = Plan(fluent_entries, action_entries, boundaries, n)
    diagram = TimingDiagram(segments, tuple(diagram_actions), boundaries)
    return plan, diagram


def _merge_segments(raw: list[Segment]) -> tuple[Segment, ...]:
    merged: list[Segment] = []
    for seg in raw:
        if merged and merged[-1].truth == seg.truth:
            prev = merged[-1]
            merged[-1] = Segment(prev.truth, Interval(prev.interval.left, seg.interval.right))
        else:
            merged.append(seg)
    return tuple(merged)


@dataclass(frozen=True)
class SearchLimits:
    max_n: int = 20
    copy_cap: Optional[int] = None
    horizon: Optional[int] = None
    time_budget: float = 300.0


@dataclass
class FindOutcome:
    status: str  # found | exhausted | limit
    plan: Optional[Plan] = None
    diagram: Optional[TimingDiagram] = None
    n_found: Optional[int] = None
    nodes: int = 0
    wall_time: float = 0.0
    minimal_n_guaranteed: bool = True
    model_stats: tuple[int, int] = (0, 0)  # (bools, ints) of the solved model

    @property
    def found(self) -> bool:
        return self.status == FOUND


def _n_schedule(max_n: int, geometric: bool) -> list[int]:
    if not geometric:
        return list(range(1, max_n + 1))
    out, n = [], 1
    while n <= max_n:
        out.append(n)
        n *= 2
    return out


def find_plan(
    d: Domain,
    objective: str = "none",
    limits: SearchLimits = SearchLimits(),
    cfg: SolverConfig = SolverConfig(),
    geometric: bool = False,
) -> FindOutcome:
    """Probe stage counts in order and decode the first satisfiable theory.

    Each probe builds a fresh shape and model; with an objective the plan is
    optimal for the first satisfiable stage count only.  Geometric probing
    skips stage counts, so it cannot guarantee the minimal one.  The limits'
    time budget governs the whole search; each probe gets the remainder
    (overriding the solver config's own budget).
    """
    if limits.max_n < 1:
        raise ValueError("max_n must be at least 1")
    started = time.monotonic()
    total_nodes = 0
    for n in _n_schedule(limits.max_n, geometric):
        if limits.horizon is not None and limits.horizon < n:
            break
        shape = instantiate(d, n, limits.copy_cap, limits.horizon)
        model = encode(shape, objective)
        remaining = limits.time_budget - (time.monotonic() - started)
        if remaining <= 0:
            return FindOutcome(
                RESOURCE_LIMIT,
                nodes=total_nodes,
                wall_time=time.monotonic() - started,
                minimal_n_guaranteed=not geometric,
            )
        result = solve(model, replace(cfg, time_budget=remaining))
        total_nodes += result.nodes
        if result.status == "limit":
            return FindOutcome(
                RESOURCE_LIMIT,
                nodes=total_nodes,
                wall_time=time.monotonic() - started,
                minimal_n_guaranteed=not geometric,
            )
        if result.is_sat:
            plan, diagram = decode(shape, result.assignment)
            if result.objective is not None:
                scale = cost_scale(d) if objective == "costs" else 1
                plan.objective = Fraction(result.objective, scale)
            return FindOutcome(
                FOUND,
                plan,
                diagram,
                n,
                total_nodes,
                time.monotonic() - started,
                minimal_n_guaranteed=not geometric,
                model_stats=(model.n_bools, model.n_ints),
            )
    return FindOutcome(
        EXHAUSTED,
        nodes=total_nodes,
        wall_time=time.monotonic() - started,
        minimal_n_guaranteed=not geometric,
    )


# -- plan document format ----------------------------------------------------


def plan_to_document(plan: Plan) -> str:
    """Serialize boundaries, maximal fluent segments, and action entries."""
    segments: dict[str, list[Segment]] = {}
    for key in sorted(plan.fluent_entries, key=lambda k: (k.fluent, k.stage, k.part)):
        truth, left, right = plan.fluent_entries[key]
        segments.setdefault(key.fluent, []).append(Segment(truth, Interval(left, right)))
    doc = {
        "n": plan.n_used,
        "boundaries": list(plan.boundaries),
        "objective": str(plan.objective) if plan.objective is not None else None,
        "fluents": {
            fluent: [
                {"truth": seg.truth, "start": seg.interval.left, "end": seg.interval.right}
                for seg in _merge_segments(segs)
            ]
            for fluent, segs in sorted(segments.items())
        },
        "actions": [
            {
                "name": key.name,
                "actor": key.actor,
                "copy": key.copy,
                "start": start,
                "end": end,
            }
            for key, (start, end) in sorted(
                plan.action_entries.items(), key=lambda kv: (kv[0].name, kv[0].actor, kv[0].copy)
            )
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def plan_from_document(text: str) -> Plan:
    """Rebuild per-stage TQA entries by slicing segments at the stage
    boundaries; a fluent changing twice inside one stage has no TQA form and
    is rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise PlanFormatError("top level must be an object")
    unknown = set(doc) - {"n", "boundaries", "objective", "fluents", "actions"}
    if unknown:
        raise PlanFormatError(f"unknown keys: {sorted(unknown)}")
    try:
        n = int(doc["n"])
        boundaries = tuple(int(b) for b in doc["boundaries"])
    except (KeyError, TypeError, ValueError):
        raise PlanFormatError("need integer 'n' and integer list 'boundaries'") from None
    if len(boundaries) != n + 1 or any(
        boundaries[i] >= boundaries[i + 1] for i in range(n)
    ):
        raise PlanFormatError("boundaries must be strictly increasing with n+1 entries")
    if boundaries[0] != 0:
        raise PlanFormatError("the dateline starts at time 0")

    objective = doc.get("objective")
    objective = Fraction(objective) if objective is not None else None

    fluent_entries: dict[FluentTqaKey, tuple[bool, int, int]] = {}
    fluents = doc.get("fluents", {})
    if not isinstance(fluents, dict):
        raise PlanFormatError("'fluents' must map names to segment lists")
    for fluent, segs in fluents.items():
        edges: list[tuple[int, int, bool]] = []
        cursor = 0
        for seg in segs:
            try:
                left, right, truth = int(seg["start"]), int(seg["end"]), bool(seg["truth"])
            except (KeyError, TypeError, ValueError):
                raise PlanFormatError(f"bad segment for {fluent!r}: {seg!r}") from None
            if left != cursor or right <= left:
                raise PlanFormatError(f"segments of {fluent!r} must tile [0, end) in order")
            edges.append((left, right, truth))
            cursor = right
        if cursor != boundaries[-1]:
            raise PlanFormatError(
                f"segments of {fluent!r} cover [0, {cursor}), expected [0, {boundaries[-1]})"
            )
        for t in range(1, n + 1):
            lo, hi = boundaries[t - 1], boundaries[t]
            inside = [e for e in edges if e[0] < hi and e[1] > lo]
            if len(inside) == 1:
                truth = inside[0][2]
                fluent_entries[FluentTqaKey(fluent, t, 1)] = (truth, lo, hi)
            elif len(inside) == 2 and inside[0][1] == inside[1][0]:
                split = inside[0][1]
                fluent_entries[FluentTqaKey(fluent, t, 0)] = (inside[0][2], lo, split)
                fluent_entries[FluentTqaKey(fluent, t, 1)] = (inside[1][2], split, hi)
            else:
                raise PlanFormatError(
                    f"fluent {fluent!r} changes more than once inside stage {t}"
                )

    action_entries: dict[ActionKey, tuple[int, int]] = {}
    for entry in doc.get("actions", []):
        try:
            key = ActionKey(str(entry["name"]), int(entry["actor"]), int(entry["copy"]))
            start, end = int(entry["start"]), int(entry["end"])
        except (KeyError, TypeError, ValueError):
            raise PlanFormatError(f"bad action entry: {entry!r}") from None
        if key in action_entries:
            raise PlanFormatError(f"duplicate action entry {key.label()}")
        action_entries[key] = (start, end)

    return Plan(fluent_entries, action_entries, boundaries, n, objective)


def diagram_from_plan(plan: Plan) -> TimingDiagram:
    """Re-derive maximal segments from the plan's per-stage entries."""
    segments: dict[str, list[Segment]] = {}
    for key in sorted(plan.fluent_entries, key=lambda k: (k.fluent, k.stage, k.part)):
        truth, left, right = plan.fluent_entries[key]
        segments.setdefault(key.fluent, []).append(Segment(truth, Interval(left, right)))
    actions = tuple(
        (key, Interval(start, end))
        for key, (start, end) in sorted(
            plan.action_entries.items(), key=lambda kv: (kv[0].name, kv[0].actor, kv[0].copy)
        )
    )
    return TimingDiagram(
        {f: _merge_segments(segs) for f, segs in segments.items()}, actions, plan.boundaries
    )
