#!/usr/bin/env python3
"""Solve a model written by `tc-sched exact --export-lp` with SciPy's HiGHS
binding and print the solution as `name value` lines.

Only the subset of the CPLEX-LP format produced by the exporter is read:
one objective, linear rows, a Binaries section and default bounds.
Exit status: 0 optimal, 2 infeasible, 3 SciPy missing, 1 other failure.
"""

import argparse
import re
import sys

TERM = re.compile(r"([+-])\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s+)?([A-Za-z_][\w]*)")


def parse_expr(text):
    terms = {}
    for sign, coef, var in TERM.findall(text):
        value = float(coef) if coef else 1.0
        if sign == "-":
            value = -value
        terms[var] = terms.get(var, 0.0) + value
    return terms


def parse(path):
    with open(path) as f:
        lines = [line.rstrip("\n") for line in f if not line.startswith("\\")]
    sense, obj_text, rows, binaries = "min", "", [], []
    section = None
    current = None
    for line in lines:
        head = line.strip().lower()
        if head in ("minimize", "maximize"):
            section, sense = "obj", head[:3]
            continue
        if head == "subject to":
            section = "rows"
            continue
        if head == "binaries":
            section = "bin"
            continue
        if head == "end":
            break
        if section == "obj":
            obj_text += " " + line.split(":", 1)[-1] if ":" in line else " " + line
        elif section == "rows":
            if not line.startswith("  ") and ":" in line:
                if current:
                    rows.append(current)
                current = line.split(":", 1)[1]
            else:
                current += " " + line
        elif section == "bin":
            binaries.extend(line.split())
    if current:
        rows.append(current)
    parsed = []
    for row in rows:
        m = re.search(r"(<=|>=|=)\s*(\S+)\s*$", row)
        parsed.append((parse_expr(row[: m.start()]), m.group(1), float(m.group(2))))
    return sense, parse_expr(obj_text), parsed, binaries


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("model")
    ap.add_argument("--time-limit", type=float, default=60.0)
    args = ap.parse_args()
    try:
        import numpy as np
        from scipy.optimize import Bounds, LinearConstraint, milp
        from scipy.sparse import lil_matrix
    except ImportError:
        print("scipy is not available", file=sys.stderr)
        return 3

    sense, objective, rows, binaries = parse(args.model)
    names = list(dict.fromkeys(binaries + list(objective) + [v for r in rows for v in r[0]]))
    index = {n: i for i, n in enumerate(names)}
    if not names:
        return 0
    c = np.zeros(len(names))
    for var, coef in objective.items():
        c[index[var]] = -coef if sense == "max" else coef
    a = lil_matrix((len(rows), len(names)))
    lo = np.full(len(rows), -np.inf)
    hi = np.full(len(rows), np.inf)
    for r, (terms, op, rhs) in enumerate(rows):
        for var, coef in terms.items():
            a[r, index[var]] = coef
        if op in ("<=", "="):
            hi[r] = rhs
        if op in (">=", "="):
            lo[r] = rhs
    binary = set(binaries)
    integrality = np.array([1 if n in binary else 0 for n in names])
    upper = np.array([1.0 if n in binary else np.inf for n in names])
    res = milp(c, constraints=LinearConstraint(a.tocsr(), lo, hi), integrality=integrality,
               bounds=Bounds(np.zeros(len(names)), upper), options={"time_limit": args.time_limit})
    if res.status == 2:
        print("infeasible", file=sys.stderr)
        return 2
    if res.x is None:
        print(res.message, file=sys.stderr)
        return 1
    for n, v in zip(names, res.x):
        if abs(v) > 1e-9:
            print(f"{n} {v:.10g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
