"""Walk through both delooping outcomes on the bundled fragments.

The eta-chain fragment admits no consistent degree shift (the order-12 row
forces an impossible congruence); the loop-space fragment of the 3-sphere
deloops onto the bundled rows on the nose.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from delooper.pi_algebra import (
    DeloopResult,
    Obstruction,
    default_table,
    deloop,
    eta_chain_fragment,
    fragments_equal,
    free_fragment,
    loop_space_s3_fragment,
    validate,
)


def show_fragment(tag, F):
    print(f"{tag}:")
    for d in sorted(F.groups):
        print(f"  degree {d}: {F.group(d).describe()} on {F.gen_names.get(d)}")
    for (theta, (deg, gen)), value in sorted(F.action.items(), key=str):
        print(f"  {theta} # {gen} = {value}")


def main():
    table = default_table()

    G = eta_chain_fragment()
    assert validate(G, table).ok
    show_fragment("eta-chain fragment (degrees 2..5)", G)
    result = deloop(G, table)
    assert isinstance(result, Obstruction)
    print("\nobstruction found:")
    print(" ", result.describe())

    print()
    G2 = loop_space_s3_fragment()
    show_fragment("loop-space fragment (degrees 2..5)", G2)
    result2 = deloop(G2, table)
    assert isinstance(result2, DeloopResult)
    show_fragment("\ndelooped (degrees 3..6)", result2.fragment)
    bundled = free_fragment([("s", 3)], table, (3, 6))
    print("\nmatches the bundled 3-sphere rows:", fragments_equal(result2.fragment, bundled, table))


if __name__ == "__main__":
    main()
