"""Four generations of a protocol stack and what changed between them.

Run: python3 demos/01_lineage.py
"""

from __future__ import annotations

from morphcast.diff import diff_generations, records_to_text
from morphcast.model import builtin_generations, render_tree


def main():
    gens = builtin_generations()
    print("The oldest generation, as an and-or tree:\n")
    print(render_tree(gens[0], "text"))

    # Each step of the lineage becomes a list of typed changes; the O-codes
    # say which kind of improvement operation produced it.
    for old, new in zip(gens, gens[1:]):
        print(f"\n{old.id} -> {new.id}")
        print(records_to_text(diff_generations(old, new)))


if __name__ == "__main__":
    main()
