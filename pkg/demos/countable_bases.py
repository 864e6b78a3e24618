"""Search (golden, q3] for bases with a null infinite special point."""
from betabranch.search import b_aleph0_in

res = b_aleph0_in()
for c in res.accepted:
    b = "".join(map(str, c.b))
    print(f"{c.name}  {c.root.decimal(5)}  {c.polynomial}  w = {c.w_form}  b = {b}")
print("rejected:", ", ".join(c.root.decimal(5) for c in res.rejected))
for note in res.notes:
    print("note:", note)
