"""Show why 1 has no eventually periodic expansion at q1 and q2."""
from betabranch.certify import exclusion_for

for name in ("q1", "q2"):
    v = exclusion_for(name)
    print(v, "sweep length", v.depth)
    for e in v.evidence[:4]:
        print(f"  {e['check']}: {e['lhs_exact']} | {e['rhs_exact']} | {e['margin_5dp']}")
