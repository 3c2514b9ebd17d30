"""Walk through the interval algebra layer: the thirteen relations, the
composite disjoint/inclusion tests, and model checking assertions against a
concrete truth history."""

from tqaplan import AllenRelation, CompositeRelation, History, Interval, Tqa, allen_relation
from tqaplan.intervals import check_tqa, decompose, holds_composite


def main() -> None:
    x, y = Interval(0, 3), Interval(2, 5)
    print(f"{x} vs {y}: {allen_relation(x, y).value}")
    print(f"{y} vs {x}: {allen_relation(y, x).value}")
    print(f"{Interval(0, 2)} vs {Interval(2, 5)}: {allen_relation(Interval(0, 2), Interval(2, 5)).value}")

    outer, inner = Interval(0, 6), Interval(2, 4)
    print(f"\n{inner} inside {outer}:",
          holds_composite(CompositeRelation.SUBINTERVAL, outer, inner))
    print(f"{x} disjoint from {Interval(3, 6)}:",
          holds_composite(CompositeRelation.DISJOINT, x, Interval(3, 6)))

    # a history is a total truth assignment over a finite prefix of time
    h = History.from_true_segments(8, {"door_open": [Interval(2, 6)]})
    claims = [
        Tqa("door_open", True, Interval(2, 6)),
        Tqa("door_open", True, Interval(1, 6)),
        Tqa("door_open", False, Interval(6, 8)),
    ]
    print("\nchecking assertions against the history:")
    for claim in claims:
        print(f"  {claim}: {check_tqa(h, claim)}")

    # homogeneity lets any assertion split into a meeting chain
    pieces = decompose(Tqa("door_open", True, Interval(2, 6)), [3, 5])
    print("\ndecomposed at 3 and 5:")
    for piece in pieces:
        print(f"  {piece} -> {check_tqa(h, piece)}")
    for a, b in zip(pieces, pieces[1:]):
        assert allen_relation(a.interval, b.interval) is AllenRelation.MEETS


if __name__ == "__main__":
    main()
