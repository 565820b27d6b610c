"""
Binary actions: small examples by brute force, then the TI criterion.

Run with:  python3 demos/binary_actions.py
"""
from compgroups import perm as P
from compgroups.binary import (CosetAction, binary_bounded, certificate_json, max_p_fixity,
                               nonbinary_witness, stabilizer_filter, ti_binary_criterion)
from compgroups.catalog import make_group, parse_spec, root_subgroup, sylow_subgroup

A6 = make_group(parse_spec("A6"))
S6 = make_group(parse_spec("S6"))
g1 = P.parse_cycles("(1,2)(3,4)", 6)
g2 = P.parse_cycles("(1,2)(5,6)", 6)

# the fixed-point pattern of a commuting pair asks for an element that A6 lacks
w = nonbinary_witness(A6, g1, g2)
print("A6:", w.verdict, " I =", w.I, " J =", w.J)
print("S6:", nonbinary_witness(S6, g1, g2).verdict)

res = binary_bounded(A6, 6, min_n=6)
print("bounded search on A6:", res)
print("bounded search on S6:", binary_bounded(S6, 6)["verdict"])

# TI subgroups: a triple check on conjugates decides binarity exactly
for text in ("SL(2,8)", "Sz(8)"):
    G = make_group(parse_spec(text))
    H = sylow_subgroup(G, 2) if text.startswith("SL") else root_subgroup(G)
    r = ti_binary_criterion(G, H)
    print(f"{text} on cosets of a subgroup of order {H.order()}: {r.verdict} "
          f"({r.conjugates} conjugates)")

A5 = make_group(parse_spec("A5"))
C5 = A5.subgroup([P.parse_cycles("(1,2,3,4,5)", 5)])
r = ti_binary_criterion(A5, C5)
print("A5 on cosets of C5:", r.verdict)
print(certificate_json(r.witness)[:300], "...")

# the filter looks at the classes with the most fixed points
G = make_group(parse_spec("Sz(8)"))
H = root_subgroup(G)
rep = max_p_fixity(CosetAction(G, H))
print(f"\nSz(8) on {G.order() // H.order()} cosets: involutions fix {rep.max_fixity} points")
print("stabilizer filter:", stabilizer_filter(G, H).verdict)
