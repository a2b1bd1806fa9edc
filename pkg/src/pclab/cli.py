"""Command-line front end.

Subcommands generate the ordering and parity families, build and
re-check the closed-form refutations, validate proof files, apply the
proof transformations, run the reduction-operator lemma checks, and
sweep proof-size experiments into CSV tables.  Everything downstream of
a fixed seed is deterministic, so artifact directories produced by two
identical invocations compare byte for byte.

Exit codes: 0 success, 1 a checked proof or lemma failed, 2 bad usage
or unreadable input, 3 a request exceeded an exhaustive-scale limit.
"""

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    BASES,
    BOOLEAN,
    DEFAULT_FIELD,
    FOURIER,
    Field,
    ScaleLimitExceeded,
    parse_var,
)
from .constructions import (
    fit_through_origin,
    lifted_refutation,
    loglog_fit,
    lop_resolution_refutation,
    pcr_upper_bound,
    tseitin_fourier_refutation,
)
from .degreelab import (
    ResidueOracle,
    bop_context,
    verify_all,
    verify_residue_operator,
    verify_residue_product,
    verify_residue_properties,
    verify_residue_support,
    verify_touch_extension,
    verify_touch_superset,
)
from .formulas import (
    cnf_to_axioms,
    gen_bop,
    gen_bop_lifted,
    gen_cycle_tseitin,
    gen_lop,
    read_axioms,
    read_dimacs,
    write_axioms,
    write_dimacs,
)
from .proofs import (
    check_pc,
    check_resolution,
    quadratic_degree,
    read_pcproof,
    read_resproof,
    write_pcproof,
    write_resproof,
)
from .transforms import (
    cluster_proof,
    qdeg_to_deg,
    random_pairing,
    read_clustermap,
    read_restriction,
    res_to_pcr,
    restrict_proof,
    split,
    write_clustermap,
)


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def parse_range(text: str) -> List[int]:
    """Accepts "4", "4..12", and comma-joined mixtures of both."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"no values in range {text!r}")
    return out


# ---------------------------------------------------------------------------
# gen


def _cmd_gen(args) -> int:
    if args.family == "tseitin-cycle":
        ax = gen_cycle_tseitin(args.n, field=Field(args.field))
        write_axioms(ax, args.out)
        print(f"wrote {args.out}: {len(ax.polys)} axioms over {len(ax.universe)} variables")
        return 0
    if args.family == "lop":
        cnf = gen_lop(args.n)
    elif args.family == "bop":
        cnf = gen_bop(args.n)
    else:
        cnf = gen_bop_lifted(args.n, args.ell)
    if args.axioms:
        ax = cnf_to_axioms(cnf, args.basis, Field(args.field), twins=not args.no_twins)
        write_axioms(ax, args.out)
        print(f"wrote {args.out}: {len(ax.polys)} axioms over {len(ax.universe)} variables")
    else:
        write_dimacs(cnf, args.out)
        print(
            f"wrote {args.out} and {args.out}.names: "
            f"{len(cnf.clauses)} clauses over {len(cnf.universe)} variables"
        )
    return 0


# ---------------------------------------------------------------------------
# refute


def _write_manifest(outdir: str, manifest: Dict[str, object]) -> None:
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        fh.write(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _cmd_refute(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    manifest: Dict[str, object] = {"family": args.family, "n": args.n}
    if args.family in ("lop", "lifted"):
        if args.family == "lop":
            rproof = lop_resolution_refutation(args.n)
        else:
            rproof = lifted_refutation(args.n, args.ell)
            manifest["ell"] = args.ell
        write_dimacs(rproof.cnf, os.path.join(args.out, "formula.cnf"))
        write_resproof(rproof, os.path.join(args.out, "proof.res"), "formula.cnf")
        report = check_resolution(read_resproof(os.path.join(args.out, "proof.res")))
        manifest.update(
            clauses=len(rproof.cnf.clauses),
            lines=report.num_lines,
            max_width=report.max_width,
            valid=report.valid,
            refutation=report.is_refutation,
            files={
                "formula": "formula.cnf",
                "names": "formula.cnf.names",
                "proof": "proof.res",
            },
        )
    else:
        if args.family == "pcr-upper":
            proof = pcr_upper_bound(args.n, args.ell)
            manifest["ell"] = args.ell
        else:
            proof = tseitin_fourier_refutation(args.n)
        write_axioms(proof.axioms, os.path.join(args.out, "axioms.txt"))
        write_pcproof(proof, os.path.join(args.out, "proof.pc"), "axioms.txt")
        back = read_pcproof(os.path.join(args.out, "proof.pc"))
        report = check_pc(back)
        manifest.update(
            basis=proof.basis,
            field=proof.field.p,
            axioms=len(proof.axioms.polys),
            lines=report.num_lines,
            size_monomials=report.size,
            degree=report.degree,
            valid=report.valid,
            refutation=report.is_refutation,
            files={"axioms": "axioms.txt", "proof": "proof.pc"},
        )
        if proof.basis == FOURIER and report.valid:
            manifest["quadratic_degree"] = quadratic_degree(back)
    _write_manifest(args.out, manifest)
    ok = bool(manifest["valid"]) and bool(manifest["refutation"])
    print(("valid refutation" if ok else "INVALID output") + f" in {args.out}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# check


def _cmd_check(args) -> int:
    with open(args.proof) as fh:
        head = fh.readline().split()
    kind = head[0] if head else ""
    if kind == "pcproof":
        axioms = read_axioms(args.formula) if args.formula else None
        report = check_pc(read_pcproof(args.proof, axioms=axioms))
        if not report.valid:
            print(f"INVALID at L{report.first_bad_line + 1}: {report.message}")
            return 1
        tag = "refutation" if report.is_refutation else "derivation"
        print(f"valid {tag}: lines={report.num_lines} size={report.size} degree={report.degree}")
    elif kind == "resproof":
        cnf = read_dimacs(args.formula) if args.formula else None
        report = check_resolution(read_resproof(args.proof, cnf=cnf))
        if not report.valid:
            print(f"INVALID at L{report.first_bad_line + 1}: {report.message}")
            return 1
        tag = "refutation" if report.is_refutation else "derivation"
        print(f"valid {tag}: lines={report.num_lines} width={report.max_width}")
    else:
        raise ValueError(f"unrecognized proof header in {args.proof}")
    if args.refutation and not report.is_refutation:
        print("not a refutation")
        return 1
    return 0


# ---------------------------------------------------------------------------
# transform


def _write_pc_artifacts(proof, outdir: str) -> int:
    os.makedirs(outdir, exist_ok=True)
    write_axioms(proof.axioms, os.path.join(outdir, "axioms.txt"))
    write_pcproof(proof, os.path.join(outdir, "proof.pc"), "axioms.txt")
    report = check_pc(read_pcproof(os.path.join(outdir, "proof.pc")))
    if not report.valid:
        print(f"INVALID at L{report.first_bad_line + 1}: {report.message}")
        return 1
    tag = "refutation" if report.is_refutation else "derivation"
    print(f"valid {tag}: lines={report.num_lines} size={report.size} degree={report.degree}")
    return 0


def _cmd_split(args) -> int:
    proof = read_pcproof(args.proof)
    out = split(proof, parse_var(args.var), prune_dead=args.prune_dead)
    return _write_pc_artifacts(out, args.out)


def _cmd_qdeg2deg(args) -> int:
    return _write_pc_artifacts(qdeg_to_deg(read_pcproof(args.proof)), args.out)


def _cmd_restrict(args) -> int:
    proof = read_pcproof(args.proof)
    rho = read_restriction(args.restriction)
    out, _ = restrict_proof(proof, rho)
    return _write_pc_artifacts(out, args.out)


def _cmd_cluster(args) -> int:
    proof = read_pcproof(args.proof)
    if args.map:
        cmap = read_clustermap(args.map)
    else:
        ax = proof.axioms
        if ax.n is None or ax.ell is None:
            raise ValueError("axiom system lacks (n, ell) parameters; pass --map instead")
        cmap = random_pairing(ax.n, ax.ell, args.seed)
        os.makedirs(args.out, exist_ok=True)
        write_clustermap(cmap, os.path.join(args.out, "cluster.map"))
    return _write_pc_artifacts(cluster_proof(proof, cmap), args.out)


def _cmd_res2pcr(args) -> int:
    rproof = read_resproof(args.proof)
    return _write_pc_artifacts(res_to_pcr(rproof, Field(args.field)), args.out)


# ---------------------------------------------------------------------------
# verify-lemmas


def _cmd_verify_lemmas(args) -> int:
    oracle = ResidueOracle(bop_context(args.n, args.ell))
    if args.which == "all":
        reports = verify_all(args.n, args.ell, seed=args.seed, oracle=oracle)
    elif args.which == "properties":
        reports = verify_residue_properties(args.n, args.ell, seed=args.seed, oracle=oracle)
    elif args.which == "operator":
        reports = (verify_residue_operator(args.n, args.ell, oracle=oracle),)
    elif args.which == "extension":
        reports = (verify_touch_extension(args.n, args.ell, oracle=oracle),)
    elif args.which == "superset":
        reports = (verify_touch_superset(args.n, args.ell, oracle=oracle),)
    elif args.which == "support":
        reports = (verify_residue_support(args.n, args.ell, oracle=oracle),)
    else:
        reports = (verify_residue_product(args.n, args.ell, seed=args.seed, oracle=oracle),)
    for rep in reports:
        print(rep)
    return 0 if all(rep.ok for rep in reports) else 1


# ---------------------------------------------------------------------------
# experiment

_EXP_HEADER = ("family", "n", "ell", "clauses", "proof_size_monomials", "degree", "qdeg", "seconds")


def _experiment_row(task: Tuple[str, int, Optional[int], bool]) -> List[str]:
    family, n, ell, timings = task
    t0 = time.perf_counter()
    if family == "pcr-upper":
        cnf = gen_bop_lifted(n, ell)
        report = check_pc(pcr_upper_bound(n, ell))
        row = [family, n, ell, len(cnf.clauses), report.size, report.degree, ""]
    elif family == "lop":
        rproof = lop_resolution_refutation(n)
        report = check_pc(res_to_pcr(rproof))
        row = [family, n, "", len(rproof.cnf.clauses), report.size, report.degree, ""]
    else:
        proof = tseitin_fourier_refutation(n)
        report = check_pc(proof)
        row = [family, n, "", len(proof.axioms.polys), report.size, report.degree,
               quadratic_degree(proof)]
    if not (report.valid and report.is_refutation):
        raise ValueError(f"{family} n={n} did not produce a valid refutation")
    dt = time.perf_counter() - t0
    row.append(f"{dt:.3f}" if timings else "")
    return [str(x) for x in row]


def _summary_lines(family: str, tasks, rows) -> List[str]:
    notes: List[str] = []

    def slope_of(pts) -> Optional[float]:
        if len({x for x, _ in pts}) < 2:
            return None
        s, _ = loglog_fit([x for x, _ in pts], [y for _, y in pts])
        return s

    if family == "pcr-upper":
        for ell in sorted({t[2] for t in tasks}):
            pts = [(t[1], int(r[4])) for t, r in zip(tasks, rows) if t[2] == ell]
            s = slope_of(pts)
            if s is not None:
                notes.append(f"pcr-upper ell={ell} size loglog slope={s:.9f}")
        if len({t[2] for t in tasks}) > 1:
            xs = [t[1] ** 3 * t[2] ** 2 for t in tasks]
            ys = [int(r[3]) for r in rows]
            c, rel = fit_through_origin(xs, ys)
            notes.append(f"pcr-upper clauses/(n^3*ell^2) C={c:.9f} rel_rms={rel:.9f}")
    elif family == "lop":
        s = slope_of([(t[1], int(r[3])) for t, r in zip(tasks, rows)])
        if s is not None:
            notes.append(f"lop clauses loglog slope={s:.9f}")
    else:
        s = slope_of([(t[1], int(r[4])) for t, r in zip(tasks, rows)])
        if s is not None:
            notes.append(f"tseitin size loglog slope={s:.9f}")
    return notes


def _cmd_experiment(args) -> int:
    ns = parse_range(args.n)
    ells = parse_range(args.ell) if args.family == "pcr-upper" else [None]
    tasks = [(args.family, n, ell, args.timings) for ell in ells for n in ns]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_experiment_row, tasks))
    else:
        rows = [_experiment_row(t) for t in tasks]
    notes = _summary_lines(args.family, tasks, rows)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_EXP_HEADER)
        writer.writerows(rows)
        for note in notes:
            fh.write(f"# {note}\n")
    print(f"wrote {args.out}: {len(rows)} rows")
    for note in notes:
        print(note)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    seed_default = _env_int("PCLAB_SEED", 0)
    field_default = _env_int("PCLAB_FIELD", DEFAULT_FIELD.p)
    jobs_default = _env_int("PCLAB_JOBS", 1)
    basis_default = os.environ.get("PCLAB_BASIS", BOOLEAN)
    if basis_default not in BASES:
        raise ValueError(f"PCLAB_BASIS must be one of {BASES}, got {basis_default!r}")

    parser = argparse.ArgumentParser(
        prog="pclab",
        description="generate, refute, check, and transform polynomial calculus instances",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a formula family instance to disk")
    g.add_argument("family", choices=("lop", "bop", "bop-lifted", "tseitin-cycle"))
    g.add_argument("--n", type=int, required=True, help="vertices (or cycle length)")
    g.add_argument("--ell", type=int, default=1, help="gadget copies per edge (bop-lifted)")
    g.add_argument("--out", required=True, help="output path")
    g.add_argument("--axioms", action="store_true",
                   help="write the polynomial translation instead of DIMACS")
    g.add_argument("--basis", choices=BASES, default=basis_default,
                   help="encoding for --axioms")
    g.add_argument("--field", type=int, default=field_default, help="odd prime field order")
    g.add_argument("--no-twins", action="store_true",
                   help="translate negated literals as 1-x instead of twin variables")
    g.set_defaults(func=_cmd_gen)

    r = sub.add_parser("refute", help="build a refutation and emit a checked artifact directory")
    r.add_argument("family", choices=("lop", "lifted", "pcr-upper", "tseitin"))
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--ell", type=int, default=1, help="gadget copies (lifted, pcr-upper)")
    r.add_argument("--out", required=True, help="output directory")
    r.set_defaults(func=_cmd_refute)

    c = sub.add_parser("check", help="validate a proof file")
    c.add_argument("proof", help="pcproof or resproof file")
    c.add_argument("--formula", help="override the formula path recorded in the header")
    c.add_argument("--refutation", action="store_true",
                   help="fail unless the last line is the contradiction")
    c.set_defaults(func=_cmd_check)

    t = sub.add_parser("transform", help="rewrite a proof file")
    tsub = t.add_subparsers(dest="transform", required=True)

    ts = tsub.add_parser("split", help="eliminate one variable by case split")
    ts.add_argument("--proof", required=True)
    ts.add_argument("--var", required=True, help="variable token, e.g. 'x(1,2,1)'")
    ts.add_argument("--prune-dead", action="store_true")
    ts.add_argument("--out", required=True, help="output directory")
    ts.set_defaults(func=_cmd_split)

    tq = tsub.add_parser("qdeg2deg", help="rebalance lines to the quadratic-degree bound")
    tq.add_argument("--proof", required=True)
    tq.add_argument("--out", required=True, help="output directory")
    tq.set_defaults(func=_cmd_qdeg2deg)

    tr = tsub.add_parser("restrict", help="apply a partial assignment")
    tr.add_argument("--proof", required=True)
    tr.add_argument("--restriction", required=True, help="restriction file")
    tr.add_argument("--out", required=True, help="output directory")
    tr.set_defaults(func=_cmd_restrict)

    tc = tsub.add_parser("cluster", help="merge paired gadget copies into cluster variables")
    tc.add_argument("--proof", required=True)
    tc.add_argument("--map", help="cluster map file; omit to draw a seeded random pairing")
    tc.add_argument("--seed", type=int, default=seed_default)
    tc.add_argument("--out", required=True, help="output directory")
    tc.set_defaults(func=_cmd_cluster)

    t2 = tsub.add_parser("res2pcr", help="simulate a resolution proof in the Boolean system")
    t2.add_argument("--proof", required=True, help="resproof file")
    t2.add_argument("--field", type=int, default=field_default)
    t2.add_argument("--out", required=True, help="output directory")
    t2.set_defaults(func=_cmd_res2pcr)

    v = sub.add_parser("verify-lemmas", help="run the reduction-operator lemma checks")
    v.add_argument("--which", default="all",
                   choices=("all", "properties", "operator", "extension",
                            "superset", "support", "product"))
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--ell", type=int, default=1)
    v.add_argument("--seed", type=int, default=seed_default)
    v.set_defaults(func=_cmd_verify_lemmas)

    e = sub.add_parser("experiment", help="sweep refutation sizes into a CSV table")
    e.add_argument("--family", required=True, choices=("pcr-upper", "lop", "tseitin"))
    e.add_argument("--n", required=True, help="range, e.g. '4..12' or '3,5,9'")
    e.add_argument("--ell", default="1", help="range of gadget copies (pcr-upper)")
    e.add_argument("--out", required=True, help="CSV path")
    e.add_argument("--jobs", type=int, default=jobs_default)
    e.add_argument("--timings", action="store_true",
                   help="fill the seconds column (breaks byte-reproducibility)")
    e.set_defaults(func=_cmd_experiment)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ScaleLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
