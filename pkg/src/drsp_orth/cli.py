"""Command line front end.

Every subcommand prints one ``key=value`` verdict line on stdout.  Errors go
to stderr as ``error=<Name> reason=<text>``.

Exit codes: 0 success / feasible / verified, 1 infeasible / not verified,
2 invalid input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io
from .canonical import feasibility, generate_ordered_type, simplify_to_ordered
from .core_types import TOL, ParameterVector, validate_semi_orthogonal, validate_special_orthogonal
from .drsp import MAX_QUBITS, simulate_drsp
from .errors import DrspError, MalformedMatrix, TooLarge
from .gf2 import dump
from .oracle import DEFAULT_SIGN_LIMIT, brute_force_signs
from .sign_solver import find_solution

#: Without --long the oracle refuses searches larger than 2**SHORT_LIMIT.
SHORT_LIMIT = 20


def _record(**kv) -> str:
    parts = []
    for k, v in kv.items():
        if isinstance(v, (list, tuple)):
            v = ",".join(map(str, v))
        elif isinstance(v, bool):
            v = str(v).lower()
        parts.append(f"{k}={v}")
    return " ".join(parts)


def _read(path: str):
    if path == "-":
        return io.loads(sys.stdin.read())
    try:
        return io.read_matrix(path)
    except OSError as exc:
        raise MalformedMatrix(f"cannot read {path}: {exc.strerror}") from None


def _emit(m, path: Optional[str], fmt: str) -> None:
    if path is None:
        sys.stdout.write(io.dumps(m, fmt))
    else:
        io.write_matrix(m, path, fmt)


def _write_witness(m, path: str, fmt: str) -> None:
    io.write_matrix(m, path, fmt)
    back = io.read_matrix(path)
    if back != m or not validate_special_orthogonal(back):
        raise DrspError(f"witness written to {path} failed re-verification")


def cmd_ordered(args) -> int:
    _emit(generate_ordered_type(args.n), args.output, args.format)
    return 0


def cmd_solve(args) -> int:
    m = _read(args.input)
    res = find_solution(m)
    if args.dump_system:
        Path(args.dump_system).write_text(dump(res.system))
        Path(args.dump_system + ".vars").write_text(res.table.sidecar())
    verdict = "feasible" if res.found else "infeasible"
    print(_record(verdict=verdict, n=m.n, rows=res.system.n_rows, cols=res.system.n_cols,
                  rank_full=res.rank_full, rank_coeff=res.rank_coeff))
    if res.found and args.output:
        _write_witness(res.matrix, args.output, args.format)
    elif res.found and args.print_witness:
        sys.stdout.write(io.dumps(res.matrix, args.format))
    return 0 if res.found else 1


def cmd_verify(args) -> int:
    m = _read(args.input)
    mode = m.mode if args.mode == "auto" else args.mode
    if mode == "special":
        if not m.is_special:
            raise MalformedMatrix("special verification needs signed cells")
        ok = validate_special_orthogonal(m)
    else:
        ok = validate_semi_orthogonal(m)
    print(_record(verdict="verified" if ok else "not-verified", mode=mode, n=m.n))
    return 0 if ok else 1


def cmd_simplify(args) -> int:
    m = _read(args.input)
    s = simplify_to_ordered(m)
    print(_record(verdict="simplified", n=m.n, row_perm=s.row_perm, col_perm=s.col_perm,
                  relabel=s.relabel, mapping_table=s.table.table))
    _emit(s.apply(m.strip_signs() if m.is_special else m), args.output, args.format)
    return 0


def cmd_feasibility(args) -> int:
    f = feasibility(args.n)
    kv = dict(verdict="feasible" if f.feasible else "infeasible", n=args.n, method=f.method)
    if f.rank_full is not None:
        kv.update(rank_full=f.rank_full, rank_coeff=f.rank_coeff)
    if f.feasible and args.output:
        _write_witness(f.witness, args.output, args.format)
        kv["witness"] = args.output
    print(_record(**kv))
    return 0 if f.feasible else 1


def cmd_oracle(args) -> int:
    if args.input is not None:
        m = _read(args.input)
    elif args.n is not None:
        m = generate_ordered_type(args.n)
    else:
        raise MalformedMatrix("oracle needs an input file or --n")
    limit = args.limit if args.long else min(args.limit, SHORT_LIMIT)
    search = brute_force_signs(m, limit=limit, max_witnesses=args.max_witnesses)
    if args.witnesses:
        Path(args.witnesses).write_text(json.dumps(
            [w.to_division_json(search.table) for w in search.witnesses]) + "\n")
    print(_record(verdict="feasible" if search.count else "infeasible", n=m.n,
                  variables=search.n_vars, count=search.count))
    return 0 if search.count else 1


def cmd_simulate(args) -> int:
    if not 1 <= args.n <= MAX_QUBITS:
        raise MalformedMatrix(f"simulate supports n in 1..{MAX_QUBITS}")
    witness = feasibility(args.n).witness
    rng = np.random.default_rng(args.seed)
    rows = []
    ok = True
    N = 2 ** args.n
    for trial in range(args.trials):
        psi = ParameterVector.random(N, rng).values
        for r in simulate_drsp(args.n, psi, witness):
            good = abs(r.probability - 1 / N) <= TOL and r.fidelity >= 1 - TOL
            ok &= good
            rows.append(dict(trial=trial, outcome=r.outcome, probability=r.probability, fidelity=r.fidelity))
    if args.format == "json":
        print(json.dumps(rows))
    else:
        print("trial outcome probability fidelity")
        for row in rows:
            print(f"{row['trial']} {row['outcome']} {row['probability']:.17g} {row['fidelity']:.17g}")
    print(_record(verdict="deterministic" if ok else "failed", n=args.n, trials=args.trials))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drsp-orth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("ordered", help="emit the ordered type of order 2**n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output")
    fmt(p)
    p.set_defaults(func=cmd_ordered)

    p = sub.add_parser("solve", help="find signs for a semi-orthogonal matrix")
    p.add_argument("input", help="matrix file, or - for stdin")
    p.add_argument("-o", "--output", help="write the witness here")
    p.add_argument("--print-witness", action="store_true")
    p.add_argument("--dump-system", metavar="PATH", help="write the augmented matrix and a .vars sidecar")
    fmt(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check semi or special orthogonality")
    p.add_argument("input")
    p.add_argument("--mode", choices=("auto", "semi", "special"), default="auto")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simplify", help="reduce to the ordered type")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    fmt(p)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("feasibility", help="existence verdict for n qubits")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", help="write the witness here")
    fmt(p)
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("oracle", help="exhaustive sign search")
    p.add_argument("input", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--limit", type=int, default=DEFAULT_SIGN_LIMIT)
    p.add_argument("--long", action="store_true", help=f"allow more than 2**{SHORT_LIMIT} assignments")
    p.add_argument("--max-witnesses", type=int, default=None)
    p.add_argument("--witnesses", metavar="PATH", help="dump witnesses as division lists")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="state-vector run of the preparation protocol")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        print(_record(error="InvalidArgument", reason="n must be >= 1"), file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except DrspError as exc:
        reason = str(exc).replace("\n", " ")
        print(f"error={type(exc).__name__} reason={reason}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
