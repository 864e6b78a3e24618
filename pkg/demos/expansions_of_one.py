"""Print the branching tree of 1 at q3 and the classification of 1 at a few bases."""
from betabranch.branching import build_tree, classify_sigma, prefix_counts, tree_to_ascii
from betabranch.constants import base
from betabranch.expansions import parse_point

q3 = base("q3")
one = parse_point("one", q3)
print(f"q3 = {q3.decimal(10)}")
print(tree_to_ascii(build_tree(one, q3, 10)))
print("prefix counts:", prefix_counts(one, q3, 24)[4::4])

# at q1 and q2 the branches of 1 never revisit a point, so the graph search
# stops at its node budget; demos/conjugate_exclusion.py settles those bases
for name in ("q1", "q2", "q3", "q4"):
    q = base(name)
    v = classify_sigma(parse_point("one", q), q, max_nodes=600)
    print(f"{name} {q.decimal(5)}: {v.cls}")
