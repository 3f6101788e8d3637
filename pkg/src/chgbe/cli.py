"""Command-line front end: sampling runs, eigenvalue computation, density
evaluation, the verification suites, and data export.

Exit codes for `verify`: 0 all checks passed, 1 a deterministic check
failed, 2 only statistical checks failed (rerun with a fresh seed before
suspecting a bug).  Default seed comes from CHGBE_SEED when set.

Sampling is reproducible and thread-count independent: reps are processed
in fixed chunks and chunk i always draws from stream id i.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import densities as dn
from . import eig as eg
from . import io as tio
from . import models as md
from . import verify as vf
from .rng import RngStream

CHUNK = 1024


def _default_seed():
    return int(os.environ.get("CHGBE_SEED", "1"))


def build_parser():
    ap = argparse.ArgumentParser(prog="chgbe", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", help="sample Jacobi entries or eigenvalue configurations")
    ps.add_argument("--beta", type=float, required=True)
    ps.add_argument("--m", type=int, required=True)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--kind", choices=md.KINDS, default="none")
    ps.add_argument("--l", default="1.0", help="coupling strength, a number or 'chi'")
    ps.add_argument("--reps", type=int, default=1)
    ps.add_argument("--seed", type=int, default=None)
    ps.add_argument("--out", required=True)
    ps.add_argument("--format", choices=("csv", "json"), default="csv")
    ps.add_argument("--threads", type=int, default=1)
    ps.add_argument("--dense", action="store_true",
                    help="sample via the dense model (beta must be 1, 2 or 4)")

    pe = sub.add_parser("eig", help="eigenvalues of perturbed matrices from a Jacobi CSV")
    pe.add_argument("--input", required=True)
    pe.add_argument("--out", required=True)
    pe.add_argument("--format", choices=("csv", "json"), default="csv")

    pd = sub.add_parser("density", help="closed-form density utilities")
    dsub = pd.add_subparsers(dest="density_command", required=True)
    pde = dsub.add_parser("eval", help="log density of eigenvalue configurations")
    pde.add_argument("--input", required=True)
    pde.add_argument("--out", required=True)
    pde.add_argument("--beta", type=float, required=True)
    pde.add_argument("--m", type=int, required=True)
    pde.add_argument("--n", type=int, required=True)
    pde.add_argument("--kind", choices=("herm", "antiherm"), required=True)
    pde.add_argument("--l-mode", choices=("fixed", "chi"), default="fixed")
    pde.add_argument("--l", type=float, default=None)
    dsub.add_parser("check-norm", help="run the normalization quadrature table")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=sorted(vf.SUITES))
    pv.add_argument("--seed", type=int, default=None)
    pv.add_argument("--trials", type=int, default=None, help="jacobian comparison points")
    pv.add_argument("--reps", type=int, default=None, help="Monte Carlo sample size")
    pv.add_argument("--parity", choices=("even", "odd"), default=None)
    pv.add_argument("--kind", choices=("herm", "antiherm"), default=None)
    pv.add_argument("--s", type=int, default=None)
    pv.add_argument("--report", default=None, help="write the JSON report here")

    px = sub.add_parser("export", help="convert or bin data files")
    px.add_argument("--input", required=True)
    px.add_argument("--out", required=True)
    px.add_argument("--to", choices=("csv", "json", "hist", "hexbin"), required=True)
    px.add_argument("--bins", type=int, default=100)
    px.add_argument("--column", default=None, help="column to bin (hist)")

    return ap


def _sample_meta(args, seed):
    return {
        "tool": "chgbe sample",
        "schema": tio.SCHEMA_VERSION,
        "beta": args.beta,
        "m": args.m,
        "n": args.n,
        "kind": args.kind,
        "l": args.l,
        "reps": args.reps,
        "seed": seed,
        "dense": args.dense,
    }


def cmd_sample(args):
    seed = args.seed if args.seed is not None else _default_seed()
    params = md.EnsembleParams(beta=args.beta, m=args.m, n=args.n)
    chi_l = isinstance(args.l, str) and args.l.strip() == "chi"
    lval = None if chi_l else float(args.l)
    if args.kind != "none" and not chi_l and not lval > 0:
        raise SystemExit("--l must be positive for perturbed sampling")
    if args.dense and args.beta not in (1, 2, 4):
        raise SystemExit("--dense requires beta in {1, 2, 4}")

    chunks = [(i, min(CHUNK, args.reps - i * CHUNK)) for i in range((args.reps + CHUNK - 1) // CHUNK)]

    def run_chunk(spec):
        idx, count = spec
        rng = RngStream(seed, idx)
        if args.kind == "none":
            entries, _ = md.sample_jacobi_batch(params, rng, count)
            return ("jacobi", idx, entries)
        if chi_l:
            from .rng import sample_chi

            ls = np.sqrt(2.0) * sample_chi(params.beta * params.m / 2.0, rng, size=count)
        else:
            ls = np.full(count, lval)
        if args.dense:
            pts = []
            for r in range(count):
                d = md.sample_dense(params, rng, kind=args.kind, l=float(ls[r]))
                rep = md.dense_reduction_check(d)
                pts.append(rep.dense_eigs)
            return ("eigs", idx, np.array(pts))
        entries, _ = md.sample_jacobi_batch(params, rng, count)
        if args.kind == "herm":
            eigs = eg.hermitian_eigs_batch(entries, lval) if not chi_l else None
            if chi_l:
                eigs = np.array(
                    [eg.hermitian_eigs_batch(entries[r : r + 1], float(ls[r]))[0] for r in range(count)]
                )
            z = eg.alternating_order_batch(eigs).astype(complex)
        else:
            if chi_l:
                z = np.array(
                    [eg.nonhermitian_eigs_batch(entries[r : r + 1], float(ls[r]))["points"][0] for r in range(count)]
                )
            else:
                z = eg.nonhermitian_eigs_batch(entries, lval)["points"]
        return ("eigs", idx, z)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(run_chunk, chunks))
    else:
        results = [run_chunk(c) for c in chunks]
    results.sort(key=lambda t: t[1])

    meta = _sample_meta(args, seed)
    rows = []
    if results and results[0][0] == "jacobi":
        columns = ("rep", "j", "a_j")
        for _, idx, entries in results:
            for r in range(entries.shape[0]):
                rep_id = idx * CHUNK + r
                for j in range(entries.shape[1]):
                    rows.append((rep_id, j + 1, float(entries[r, j])))
    else:
        columns = ("rep", "idx", "re", "im")
        for _, idx, z in results:
            for r in range(z.shape[0]):
                rep_id = idx * CHUNK + r
                for j in range(z.shape[1]):
                    zz = complex(z[r, j])
                    rows.append((rep_id, j, float(zz.real), float(zz.imag)))
    tio.write_table(args.out, columns, rows, meta, fmt=args.format)
    print("wrote %s (%d rows)" % (args.out, len(rows)))
    return 0


def _group_by_rep(columns, rows):
    by = {}
    icol = {c: k for k, c in enumerate(columns)}
    for parts in rows:
        rep = int(parts[icol["rep"]])
        by.setdefault(rep, []).append(parts)
    return by, icol


def cmd_eig(args):
    meta, columns, rows = tio.read_table(args.input)
    if "a_j" not in columns:
        raise SystemExit("eig expects a Jacobi entries file with columns rep,j,a_j")
    kind = meta.get("kind", "herm")
    if kind == "none":
        kind = "herm"
    lspec = meta.get("l", "1.0")
    by, icol = _group_by_rep(columns, rows)
    out_rows = []
    for rep_id in sorted(by):
        entries = np.array(
            [float(p[icol["a_j"]]) for p in sorted(by[rep_id], key=lambda q: int(q[icol["j"]]))]
        )
        J = md.JacobiMatrix(entries)
        l = float(lspec) if lspec != "chi" else 1.0
        pj = md.perturb(J, l, kind)
        if kind == "herm":
            cfg, _ = eg.eig_hermitian(pj)
            for j, zz in enumerate(cfg.z):
                out_rows.append((rep_id, j, float(zz), 0.0, "real"))
        else:
            cfg = eg.eig_nonhermitian(pj)
            j = 0
            for y in cfg.imag_points:
                out_rows.append((rep_id, j, 0.0, float(y), "imag"))
                j += 1
            for x, y in cfg.pairs:
                out_rows.append((rep_id, j, float(x), float(y), "pair"))
                j += 1
                out_rows.append((rep_id, j, float(-x), float(y), "pair"))
                j += 1
    meta_out = dict(meta)
    meta_out["tool"] = "chgbe eig"
    tio.write_table(args.out, ("rep", "idx", "re", "im", "class"), out_rows, meta_out, fmt=args.format)
    print("wrote %s (%d rows)" % (args.out, len(out_rows)))
    return 0


def cmd_density_eval(args):
    meta, columns, rows = tio.read_table(args.input)
    params = md.EnsembleParams(beta=args.beta, m=args.m, n=args.n)
    if args.l_mode == "fixed":
        if args.l is None:
            raise SystemExit("--l is required with --l-mode fixed")
        dp = dn.DensityParams(params, mode="fixed", l=args.l)
    else:
        dp = dn.DensityParams(params, mode="chi")
    by, icol = _group_by_rep(columns, rows)
    out_rows = []
    for rep_id in sorted(by):
        pts = sorted(by[rep_id], key=lambda q: int(q[icol["idx"]]))
        z = np.array([complex(float(p[icol["re"]]), float(p[icol["im"]])) for p in pts])
        if args.kind == "herm":
            val = dn.hermitian_logdensity(z.real, dp)
        else:
            val = dn.nonhermitian_logdensity(z, dp)
        out_rows.append((rep_id, float(val)))
    meta_out = dict(meta)
    meta_out.update({"tool": "chgbe density eval", "kind": args.kind, "l_mode": args.l_mode})
    tio.write_table(args.out, ("rep", "logpdf"), out_rows, meta_out)
    print("wrote %s (%d rows)" % (args.out, len(out_rows)))
    return 0


def cmd_density_check_norm(args):
    res = vf.check_normalizations()
    for k, v in res.metrics["values"].items():
        print("%-24s %.8f  %s" % (k, v, "ok" if abs(v - 1) < 1e-5 else "FAIL"))
    total = res.metrics["values"]["nonherm pair"] + res.metrics["values"]["nonherm imag"]
    print("%-24s %.8f  %s" % ("nonherm total", total, "ok" if abs(total - 1) < 1e-5 else "FAIL"))
    print(res.line())
    return 0 if res.passed else 1


def cmd_verify(args):
    seed = args.seed if args.seed is not None else _default_seed()
    kwargs = {}
    jac = {}
    if args.trials is not None:
        jac["trials"] = args.trials
    if args.parity is not None:
        jac["parities"] = (args.parity,)
    if args.kind is not None:
        jac["kinds"] = (args.kind,)
    if args.s is not None:
        jac["sizes"] = (args.s,)
    if jac:
        kwargs["check_jacobians"] = jac
    if args.reps is not None:
        for name in (
            "check_distributional_equivalence",
            "check_spectral_measure_law",
            "check_eigenvalue_locations",
            "check_hermitian_law",
            "check_nonhermitian_law",
        ):
            kwargs[name] = {"reps": args.reps}
    results = vf.run_suite(args.suite, seed=seed, **kwargs)
    for r in results:
        print(r.line())
    report = {
        "suite": args.suite,
        "seed": seed,
        "criteria": [
            {
                "criterion": r.criterion,
                "passed": bool(r.passed),
                "statistical": bool(r.statistical),
                "detail": r.detail,
                "seconds": round(float(r.seconds), 3),
            }
            for r in results
        ],
    }
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(report, fh, indent=1)
            fh.write("\n")
    hard_fail = any((not r.passed) and (not r.statistical) for r in results)
    stat_fail = any((not r.passed) and r.statistical for r in results)
    if hard_fail:
        return 1
    if stat_fail:
        return 2
    return 0


def cmd_export(args):
    meta, columns, rows = tio.read_table(args.input)
    meta_out = dict(meta)
    meta_out["tool"] = "chgbe export"
    if args.to in ("csv", "json"):
        typed = []
        for parts in rows:
            out = []
            for c, v in zip(columns, parts):
                if c in ("rep", "idx", "j", "count"):
                    out.append(int(v))
                elif c == "class":
                    out.append(v)
                else:
                    out.append(float(v))
            typed.append(tuple(out))
        tio.write_table(args.out, columns, typed, meta_out, fmt=args.to)
    elif args.to == "hist":
        col = args.column or ("re" if "re" in columns else columns[-1])
        k = columns.index(col)
        vals = [float(p[k]) for p in rows]
        tio.write_table(args.out, ("bin_lo", "bin_hi", "count"),
                        tio.histogram_rows(vals, args.bins), meta_out)
    else:
        kx, ky = columns.index("re"), columns.index("im")
        xs = [float(p[kx]) for p in rows]
        ys = [float(p[ky]) for p in rows]
        tio.write_table(args.out, ("x", "y", "count"), tio.hexbin_rows(xs, ys, args.bins), meta_out)
    print("wrote %s" % args.out)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "sample":
        return cmd_sample(args)
    if args.command == "eig":
        return cmd_eig(args)
    if args.command == "density":
        if args.density_command == "eval":
            return cmd_density_eval(args)
        return cmd_density_check_norm(args)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "export":
        return cmd_export(args)
    raise SystemExit(2)


if __name__ == "__main__":
    sys.exit(main())
