"""Solve the three-skill required-concurrency gadget and render its timing
diagram as ASCII, showing the overlap and double-containment pattern that
defeats planners unable to reason about concurrent windows."""

from tqaplan import GadgetSpec, SearchLimits, allen_relation, find_plan, gen_cushing, validate_plan


def bar(interval, total, char) -> str:
    return " " * interval.left + char * interval.size + " " * (total - interval.right)


def main() -> None:
    domain = gen_cushing(GadgetSpec("I", 1))
    outcome = find_plan(domain, limits=SearchLimits(max_n=8, copy_cap=1))
    assert outcome.found
    diagram = outcome.diagram
    total = diagram.boundaries[-1]

    print(f"plan at {outcome.n_found} stages, boundaries {diagram.boundaries}\n")
    print("time      " + "".join(str(t % 10) for t in range(total)))
    for name in ("a1_g1", "a2_g1", "a3_g1"):
        print(f"{name:<10}" + bar(diagram.action_interval(name), total, "#"))
    for fluent in ("w1_g1", "w2_g1", "goal_g1"):
        seg = diagram.true_segments(fluent)[0]
        print(f"{fluent:<10}" + bar(seg, total, "="))

    w1 = diagram.true_segments("w1_g1")[0]
    w2 = diagram.true_segments("w2_g1")[0]
    print("\nwindow w1 vs a2:", allen_relation(w1, diagram.action_interval("a2_g1")).value)
    print("window w1 vs a3:", allen_relation(w1, diagram.action_interval("a3_g1")).value)
    print("window w2 vs a3:", allen_relation(w2, diagram.action_interval("a3_g1")).value)
    print("validation:", validate_plan(domain, outcome.plan).verdict)


if __name__ == "__main__":
    main()
