"""
Walk through the component group of one involution class of Sp(6,2).

Run with:  python3 demos/component_groups.py
"""
from compgroups import perm as P
from compgroups.catalog import involution_labels, involution_rep, make_group, parse_spec
from compgroups.components import (class_graph, class_spec_for, component_bfs, delta_infinity,
                                   transport_group)

G = make_group(parse_spec("Sp(6,2)"))
print(f"{G.name}: order {G.order()}, acting on {G.degree} points")
print("involution classes:", ", ".join(str(L) for L in involution_labels(G)))

s = involution_rep(G, "W2+V2")
D = class_spec_for(G, s)
print(f"\nclass of s has {D.sizes()[0]} elements")

# two involutions are joined when they commute and their product is back in the class
comp = component_bfs(G, s, D)
print(f"breadth-first search: the component of s has {len(comp)} vertices")

res = transport_group(G, s, D)
print(f"transport group T has order {res.T.order()}, |C(s)| = {res.centralizer.order()}")
print(f"  so the component has |T|/|C(s)| = {res.component_size} vertices, as above")
print(f"Delta(s) = {res.delta.describe()} ({res.flag})")

print("Delta(s) is elementary abelian:", res.delta.is_elementary_abelian(2))
print("every generator of Delta(s) is an involution:",
      all(P.order(g) == 2 for g in res.delta.gens))

chain = delta_infinity(G, s)
print("\nrepeating with all classes met by Delta:", " <= ".join(map(str, chain.orders())))

report = class_graph(G)
for lab, black, n in zip(report.labels, report.black, report.delta_orders):
    print(f"  {lab:10s} {'black' if black else 'white'}  |Delta| = {n}")
