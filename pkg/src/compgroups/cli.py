"""
Command-line front end.

    compgroups delta Sp(6,2) "W2+V2"
    compgroups delta-inf Sp(6,2) "W2+V2"
    compgroups class-graph Sp(6,2) --dot sp62.dot
    compgroups binary SL(2,8) sylow:2 --method ti

Every run produces a record (inputs, payload, timing, versions).  Records
are cached as JSON files named by a digest of the inputs; a cached record
is replayed unless --refresh is given, in which case the payload is
recomputed and must match the cached one.

Exit codes: 0 success, 2 usage, 3 budget exhausted, 4 internal invariant
violation.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import perm as P
from .binary import (CosetAction, UsageError, binary_bounded,
                     stabilizer_filter, ti_binary_criterion, ti_check)
from .bsgs import BudgetExceeded
from .catalog import (UnsupportedGroup, involution_rep, make_group, parse_label, parse_spec,
                      root_subgroup, sylow_subgroup)
from .components import (class_graph, class_spec_for, delta_infinity, transport_group,
                         transport_randomized)
from .fields import POLY_TABLE_VERSION
from .group import ORBIT_BUDGET

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4


def cache_dir():
    d = os.environ.get("COMPONENT_CACHE_DIR")
    if d:
        return Path(d)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "compgroups"


def inputs_digest(inputs):
    text = json.dumps(inputs, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_plain)


def _plain(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


# -- commands ----------------------------------------------------------------------


def _group(args):
    return make_group(parse_spec(args.group), seed=args.seed, action=args.action)


def _mode(args):
    return "deterministic" if args.mode == "det" else "randomized"


def cmd_delta(args):
    G = _group(args)
    L = parse_label(args.label, G.spec)
    s = involution_rep(G, L)
    D = class_spec_for(G, s, label=str(L), budget=args.budget)
    if args.mode == "det":
        res = transport_group(G, s, D, budget=args.budget, seed=args.seed)
    else:
        res = transport_randomized(G, s, D, samples=args.samples, seed=args.seed, budget=args.budget)
    out = {"label": str(L), "group_order": G.order()}
    out.update(res.summary())
    if args.mode == "det" and res.flag != "exact":
        # the deterministic run fell back to sampling: report it as a budget failure
        exc = BudgetExceeded("budget too small for an exact answer; partial result is a lower bound")
        exc.partial = out
        raise exc
    return out


def cmd_delta_inf(args):
    G = _group(args)
    L = parse_label(args.label, G.spec)
    s = involution_rep(G, L)
    chain = delta_infinity(G, s, mode=_mode(args), seed=args.seed, samples=args.samples,
                           budget=args.budget)
    if chain.final is None:
        raise BudgetExceeded("; ".join(chain.notes) or "first stage failed")
    return {
        "label": str(L),
        "group_order": G.order(),
        "chain_orders": chain.orders(),
        "chain_classes": chain.class_sets,
        "flags": chain.flags,
        "final_order": chain.final.order(),
        "final_is_G": chain.final.order() == G.order(),
        "notes": chain.notes,
    }


def cmd_class_graph(args):
    G = _group(args)
    rep = class_graph(G, mode=_mode(args), seed=args.seed, samples=args.samples, budget=args.budget)
    out = rep.as_dict()
    out["dot"] = rep.to_dot()
    out["white"] = [lab for lab, b in zip(rep.labels, rep.black) if not b]
    if args.dot:
        Path(args.dot).write_text(out["dot"])
    return out


def parse_subgroup(G, text):
    kind, _, arg = text.partition(":")
    if kind == "sylow":
        return sylow_subgroup(G, int(arg))
    if kind == "sylow-centre":
        return sylow_subgroup(G, int(arg)).centre()
    if kind == "root":
        return root_subgroup(G, arg or "long")
    path = Path(text)
    if not path.exists():
        raise UsageError(f"unknown subgroup spec {text!r}")
    return G.subgroup(read_gens(path, G.degree))


def read_gens(path, degree):
    """Generators as a JSON list of cycle strings, or one cycle string per line (1-based)."""
    text = Path(path).read_text().strip()
    lines = json.loads(text) if text.startswith("[") else text.splitlines()
    return [P.parse_cycles(line, degree) for line in lines if line.strip()]


def cmd_binary(args):
    G = _group(args)
    H = parse_subgroup(G, args.subgroup)
    out = {"subgroup": args.subgroup, "subgroup_order": H.order(), "method": args.method,
           "degree": G.order() // H.order()}
    if args.method == "ti":
        if not ti_check(G, H):
            raise UsageError("subgroup is not TI; --method ti does not apply")
        res = ti_binary_criterion(G, H)
        out.update(verdict=res.verdict, conjugates=res.conjugates, reason=res.reason)
        if res.witness:
            out["certificate"] = res.witness
    elif args.method == "bounded":
        A = CosetAction(G, H).group
        res = binary_bounded(A, args.max_n, budget=args.budget)
        out.update(res)
    else:
        res = stabilizer_filter(G, H, seed=args.seed)
        out.update(verdict=res.verdict, reason=res.reason, max_fixity_classes=res.D_labels,
                   max_fixity=res.max_fixity, delta_order=res.delta_order,
                   delta_inf_order=res.delta_inf_order, chain=res.chain)
    return out


COMMANDS = {
    "delta": cmd_delta,
    "delta-inf": cmd_delta_inf,
    "class-graph": cmd_class_graph,
    "binary": cmd_binary,
}


# -- driver ------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="compgroups", description="Component groups of involutions "
                                 "and binary-action checks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["det", "rand"], default="det")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=500)
    common.add_argument("--budget", type=int, default=ORBIT_BUDGET)
    common.add_argument("--action", choices=["points", "vectors"], default="points")
    common.add_argument("--threads", type=int, default=None, help="accepted; runs single-threaded")
    common.add_argument("--json", action="store_true", help="print the full record as JSON")
    common.add_argument("--refresh", action="store_true", help="recompute and compare with the cache")
    common.add_argument("--no-cache", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", parents=[common], help="component group of an involution class")
    p.add_argument("group")
    p.add_argument("label")
    p = sub.add_parser("delta-inf", parents=[common], help="terminal component group")
    p.add_argument("group")
    p.add_argument("label")
    p = sub.add_parser("class-graph", parents=[common], help="graph on the involution classes")
    p.add_argument("group")
    p.add_argument("--dot", help="write the graph in DOT format to this file")
    p = sub.add_parser("binary", parents=[common], help="binary-action checks on a coset action")
    p.add_argument("group")
    p.add_argument("subgroup", nargs="?", default="root:long",
                   help="sylow:p, sylow-centre:p, root:long, root:short or a generator file")
    p.add_argument("--method", choices=["ti", "bounded", "filter"], default="ti")
    p.add_argument("--max-n", type=int, default=None)
    return ap


def record_inputs(args):
    keys = ["command", "group", "label", "subgroup", "method", "max_n", "mode", "seed", "samples",
            "budget", "action"]
    return {k: getattr(args, k, None) for k in keys if getattr(args, k, None) is not None}


def run(args):
    """Returns (exit code, record)."""
    inputs = record_inputs(args)
    digest = inputs_digest(inputs)
    path = cache_dir() / digest[:2] / f"{digest}.json"
    cached = None
    if not args.no_cache and path.exists():
        cached = json.loads(path.read_text())
        if not args.refresh:
            return EXIT_OK, cached
    record = {"inputs": inputs, "version": __version__, "poly_table_version": POLY_TABLE_VERSION}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        record["payload"] = COMMANDS[args.command](args)
    except (UsageError, UnsupportedGroup, ValueError) as exc:
        record["error"] = str(exc)
        code = EXIT_USAGE
    except BudgetExceeded as exc:
        record["error"] = str(exc)
        record["partial"] = getattr(exc, "partial", None) or {"reached": exc.reached}
        code = EXIT_BUDGET
    except AssertionError as exc:
        record["error"] = f"internal invariant violated: {exc}"
        code = EXIT_INTERNAL
    record["wall_clock"] = round(time.perf_counter() - t0, 3)
    if code == EXIT_OK and cached is not None:
        if dumps(cached["payload"]) != dumps(record["payload"]):
            record["error"] = "recomputed payload differs from the cached record"
            return EXIT_INTERNAL, record
    if code in (EXIT_OK, EXIT_BUDGET) and not args.no_cache:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(record))
    return code, record


def human(record):
    if "error" in record:
        return f"error: {record['error']}"
    cmd = record["inputs"]["command"]
    p = record["payload"]
    if cmd == "delta":
        ea = "elementary abelian" if p["elementary_abelian"] else p["delta_structure"]
        return (f"|Delta| = {p['delta_order']} ({ea}); component size {p['component_size']}; "
                f"{p['flag']}")
    if cmd == "delta-inf":
        chain = " <= ".join(str(n) for n in p["chain_orders"])
        return f"chain {chain}; terminal order {p['final_order']}" + \
            (" (= G)" if p["final_is_G"] else "")
    if cmd == "class-graph":
        lines = [f"{v['label']}: {'black' if v['black'] else 'white'} |Delta|={v['delta_order']}"
                 for v in p["vertices"]]
        lines += [f"  {a} -> {b}" for a, b in p["edges"]]
        return "\n".join(lines)
    extra = f" ({p['reason']})" if p.get("reason") else ""
    return f"{p['verdict']}{extra}"


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    code, record = run(args)
    if args.json:
        print(dumps(record))
    else:
        text = human(record)
        print(text, file=sys.stderr if code else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
