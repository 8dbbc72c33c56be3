#!/usr/bin/env python3
"""MILP backend adapter: solves an LP-format model with scipy's HiGHS MILP.

Reads the subset of the LP format written by the exporter (Maximize /
Subject To / Binary / End, coefficients +-1) and writes a plain solution
file:

    status optimal|infeasible|time_limit|error
    objective <value>
    <var> <value>        one line per nonzero variable (and every y_*)
"""

import argparse
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import LinearConstraint, Bounds, milp


def tokenize_rows(lines):
    """Splits the Subject To section into rows of tokens."""
    rows = []
    current = []
    for line in lines:
        for token in line.split():
            if token.endswith(":"):
                if current:
                    rows.append(current)
                current = []
            else:
                current.append(token)
    if current:
        rows.append(current)
    return rows


def parse_lp(path):
    sections = {"objective": [], "constraints": [], "binary": []}
    section = None
    with open(path) as handle:
        for raw in handle:
            line = raw.rstrip("\n")
            if line.startswith("\\"):
                continue
            stripped = line.strip()
            if stripped in ("Maximize", "Minimize"):
                section = "objective"
                sense = 1.0 if stripped == "Maximize" else -1.0
                continue
            if stripped == "Subject To":
                section = "constraints"
                continue
            if stripped == "Binary":
                section = "binary"
                continue
            if stripped == "End":
                break
            if section and stripped:
                sections[section].append(line)

    variables = []
    for line in sections["binary"]:
        variables.extend(line.split())
    index = {name: i for i, name in enumerate(variables)}

    obj = np.zeros(len(variables))
    sign = 1.0
    for token in " ".join(sections["objective"]).split():
        if token == "+":
            sign = 1.0
        elif token == "-":
            sign = -1.0
        elif token in index:
            obj[index[token]] += sense * sign
            sign = 1.0

    eq_rows, eq_rhs = [], []
    ub_rows, ub_rhs = [], []
    for tokens in tokenize_rows(sections["constraints"]):
        coeffs = {}
        sign = 1.0
        comparison = None
        rhs = None
        for token in tokens:
            if token == "+":
                sign = 1.0
            elif token == "-":
                sign = -1.0
            elif token in ("=", "<=", ">="):
                comparison = token
            elif comparison is not None:
                rhs = float(token)
            elif token in index:
                coeffs[index[token]] = coeffs.get(index[token], 0.0) + sign
                sign = 1.0
            else:
                raise ValueError(f"unknown token in constraint: {token}")
        if comparison is None or rhs is None:
            raise ValueError(f"constraint without comparison: {tokens}")
        if comparison == "=":
            eq_rows.append(coeffs)
            eq_rhs.append(rhs)
        elif comparison == "<=":
            ub_rows.append(coeffs)
            ub_rhs.append(rhs)
        else:  # >= : flip into <=
            ub_rows.append({k: -v for k, v in coeffs.items()})
            ub_rhs.append(-rhs)

    def to_matrix(rows):
        data, ri, ci = [], [], []
        for r, coeffs in enumerate(rows):
            for c, v in coeffs.items():
                ri.append(r)
                ci.append(c)
                data.append(v)
        return sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), len(variables)))

    return variables, obj, (to_matrix(eq_rows), np.array(eq_rhs)), (
        to_matrix(ub_rows),
        np.array(ub_rhs),
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--model", required=True)
    parser.add_argument("--solution", required=True)
    parser.add_argument("--time-limit", type=float, default=None)
    args = parser.parse_args()

    try:
        variables, obj, (a_eq, b_eq), (a_ub, b_ub) = parse_lp(args.model)
        constraints = []
        if a_eq.shape[0]:
            constraints.append(LinearConstraint(a_eq, b_eq, b_eq))
        if a_ub.shape[0]:
            constraints.append(LinearConstraint(a_ub, -np.inf, b_ub))
        options = {}
        if args.time_limit is not None:
            options["time_limit"] = args.time_limit
        result = milp(
            c=-obj,  # milp minimizes; the model maximizes
            constraints=constraints,
            integrality=np.ones(len(variables)),
            bounds=Bounds(0, 1),
            options=options,
        )
    except Exception as error:  # noqa: BLE001 - report and fail cleanly
        with open(args.solution, "w") as out:
            out.write("status error\n")
        print(f"milp_backend: {error}", file=sys.stderr)
        return 1

    status = {0: "optimal", 1: "time_limit", 2: "infeasible", 3: "error", 4: "error"}.get(
        result.status, "error"
    )
    with open(args.solution, "w") as out:
        out.write(f"status {status}\n")
        if status == "optimal":
            out.write(f"objective {-result.fun:.9g}\n")
            values = np.round(result.x)
            for name, value in zip(variables, values):
                if value != 0 or name.startswith("y_"):
                    out.write(f"{name} {int(value)}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
