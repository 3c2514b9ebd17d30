"""Build a small domain by hand, look at the constraint model for a fixed
stage count, and watch the stage-count search find and validate a plan."""

from tqaplan import (
    SearchLimits,
    encode,
    export_model,
    find_plan,
    instantiate,
    parse_domain,
    validate_plan,
)

DOMAIN = """
{
  "fluents": ["warmed_up", "served"],
  "skills": [
    {"name": "warm_up", "kind": "delay", "duration": 3, "raises": ["warmed_up"], "cost": 2},
    {"name": "serve", "kind": "delay", "duration": 2, "raises": ["served"],
     "constraints": [{"fluent": "warmed_up", "rel": "contains"}], "cost": 1}
  ],
  "goal": ["served"]
}
"""


def main() -> None:
    domain = parse_domain(DOMAIN)

    shape = instantiate(domain, 2)
    model = encode(shape)
    dump = export_model(model)
    print(f"stage count 2 encodes to {model.n_bools} booleans, {model.n_ints} integers,")
    print(f"{len(model.constraints)} constraints; first lines of the dump:\n")
    print("\n".join(dump.splitlines()[:10]))

    outcome = find_plan(domain, objective="costs", limits=SearchLimits(max_n=6))
    print(f"\nplan found at {outcome.n_found} stages, cost {outcome.plan.objective}")
    print("boundaries:", outcome.plan.boundaries)
    for key, (start, end) in sorted(outcome.plan.action_entries.items(), key=lambda kv: kv[1]):
        print(f"  {key.name} (actor {key.actor}, copy {key.copy}): [{start}, {end})")
    for fluent, segments in outcome.diagram.fluents.items():
        shown = " ".join(f"{'T' if s.truth else 'f'}{s.interval}" for s in segments)
        print(f"  {fluent}: {shown}")

    report = validate_plan(domain, outcome.plan)
    print("independent validation:", report.verdict)


if __name__ == "__main__":
    main()
