"""
Randomized lower bounds for classes whose exact computation is out of reach.

Each run samples centralizers of the representatives found so far; the
result is a subgroup of the true Delta.  Takes about a minute in total.

Run with:  python3 demos/large_rows.py [samples]
"""
import sys
import time

from compgroups.catalog import involution_rep, make_group, parse_spec
from compgroups.components import class_spec_for, transport_randomized

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 200

for text, label in [("SU(6,2)", "J2^3"), ("SU(7,2)", "J2^3 J1"), ("Sp(12,2)", "W2^3"),
                    ("O+(12,2)", "W2^3#1")]:
    t0 = time.perf_counter()
    G = make_group(parse_spec(text))
    s = involution_rep(G, label)
    D = class_spec_for(G, s)
    res = transport_randomized(G, s, D, samples=samples, seed=0)
    d = res.delta
    print(f"{text:9s} {label:8s} |Delta'| >= {d.order():6d}  {d.describe():28s} "
          f"{res.flag}  {time.perf_counter() - t0:.1f}s")
