"""Command-line front end.

Exit codes: 0 success, 2 inconclusive result, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys

import mpmath as mp

from .dilog import PrecisionCfg
from .field import make_field
from .ideals import class_group, primes_above
from .pipeline import (
    RunConfig,
    FieldResult,
    divide_beta_geo,
    export_results,
    find_generator,
    import_results,
    load_complex,
    save_complex,
)
from .relations import FormalSum, RelationCertificate, verify_certificate
from .sunits import exceptional_sunits, sunit_basis
from .zeta import dgamma, zeta_report

INCONCLUSIVE = 2


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def cmd_field(args):
    ctx = make_field(args.d)
    _emit({"d": ctx.d, "discriminant": ctx.D, "conductor": ctx.conductor,
           "omega": "sqrt(D/4)" if ctx.omega_kind == 0 else "(1+sqrt(D))/2",
           "torsion_units": ctx.n_tor})


def cmd_classgroup(args):
    cg = class_group(make_field(args.d))
    _emit({"h": cg.h, "forms": [list(f) for f in cg.forms], "structure": cg.structure})


def cmd_sunits(args):
    ctx = make_field(args.d)
    primes = [int(p) for p in args.primes.split(",")]
    basis = sunit_basis(ctx, primes_above(ctx, primes))
    out = {
        "d": args.d,
        "S": [P.label() for P in basis.S],
        "generators": [g.to_json() for g in basis.gens],
        "val_matrix": basis.val_matrix,
    }
    if args.exceptional:
        exc = exceptional_sunits(basis, args.bound)
        out["exceptional"] = [
            {"x": e.x.to_json(),
             "exponents_x": [e.ex[0], list(e.ex[1])],
             "exponents_1mx": [e.ex1m[0], list(e.ex1m[1])]}
            for e in exc
        ]
    _emit(out)


def cmd_tessellate(args):
    from .voronoi import enumerate_perfect, tessellation_volume

    ctx = make_field(args.d)
    cc = load_complex(ctx)
    if cc is None:
        cc = enumerate_perfect(ctx)
        save_complex(ctx, cc)
    census = cc.census()
    census["volume"] = mp.nstr(tessellation_volume(cc, PrecisionCfg(bits=args.bits)), 30)
    _emit(census)


def cmd_betageo(args):
    from .voronoi import beta_geo, enumerate_perfect

    ctx = make_field(args.d)
    cc = load_complex(ctx)
    if cc is None:
        cc = enumerate_perfect(ctx)
        save_complex(ctx, cc)
    res = beta_geo(ctx, cc, PrecisionCfg(bits=args.bits))
    _emit({
        "d": args.d,
        "beta_geo": res.beta.to_json(),
        "dsig_over_2pi": mp.nstr(res.dsig_over_2pi, 30),
        "minus_12_zeta_prime": mp.nstr(res.zeta_target, 30),
        "beta_q": res.beta_q.to_json() if res.beta_q is not None else None,
        "m_lcm": res.m_lcm,
        "e_min": res.e_min,
        "half_weight_variant": res.tilde_beta.to_json() if res.tilde_beta else None,
    })


def cmd_zeta(args):
    rep = zeta_report(make_field(args.d), PrecisionCfg(bits=args.bits))
    digits = int(args.bits * 0.3)
    _emit({"d": args.d, "L2": mp.nstr(rep.L2, digits), "zeta2": mp.nstr(rep.zeta2, digits),
           "zeta_prime_minus1": mp.nstr(rep.zprime, digits), "vol": mp.nstr(rep.vol, digits),
           "bits": rep.bits})


def cmd_k2order(args):
    ctx = make_field(args.d)
    with open(args.gamma) as fh:
        gamma = FormalSum.from_json(ctx, json.load(fh))
    value, nearest, residual = dgamma(ctx, gamma, args.M, PrecisionCfg(bits=args.bits))
    _emit({"d": args.d, "M": args.M, "value": mp.nstr(value, 30),
           "nearest": nearest, "residual": mp.nstr(residual, 10)})
    return 0 if residual < 1e-6 else INCONCLUSIVE


def cmd_find_generator(args):
    cfg = RunConfig(d=args.d, M=args.M, bound=args.bound, bits=args.bits,
                    primes=[int(p) for p in args.primes.split(",")] if args.primes else None)
    res = find_generator(cfg)
    _emit(res.to_json())
    return 0 if res.provenance == "direct-search" else INCONCLUSIVE


def cmd_divide(args):
    cfg = RunConfig(d=args.d, M=args.M, bound=args.bound, bits=args.bits,
                    budget=args.budget,
                    primes=[int(p) for p in args.primes.split(",")] if args.primes else None)
    res = divide_beta_geo(cfg)
    _emit(res.to_json())
    return 0 if res.provenance == "division" else INCONCLUSIVE


def cmd_certify(args):
    from .relations import express_as_relations, orbit_closure

    ctx = make_field(args.d)
    with open(args.target) as fh:
        target = FormalSum.from_json(ctx, json.load(fh))
    cert, obstruction = express_as_relations(target, orbit_closure(target.support()),
                                             budget=args.budget)
    if cert is None:
        _emit({"status": "no-certificate", "obstruction": obstruction})
        return INCONCLUSIVE
    with open(args.relations_out, "w") as fh:
        json.dump(cert.to_json(), fh, indent=1)
    _emit({"status": "ok", "five_terms": len(cert.five_terms),
           "two_terms": len(cert.two_terms), "out": args.relations_out})


def cmd_verify_cert(args):
    ctx = make_field(args.d)
    with open(args.cert) as fh:
        cert = RelationCertificate.from_json(ctx, json.load(fh))
    ok = verify_certificate(cert)
    _emit({"valid": bool(ok)})
    return 0 if ok else 1


def cmd_export(args):
    results = []
    for path in args.results:
        with open(path) as fh:
            results.append(FieldResult.from_json(json.load(fh)))
    export_results(results, args.out)
    _emit({"written": args.out, "records": len(results)})


def cmd_import_check(args):
    res = import_results(args.table)
    _emit({"records": len(res), "fields": [r.d for r in res]})


def build_parser():
    p = argparse.ArgumentParser(prog="k3gen")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("field", cmd_field, help="field context constants")
    sp.add_argument("--d", type=int, required=True)

    sp = add("classgroup", cmd_classgroup, help="class group on reduced forms")
    sp.add_argument("--d", type=int, required=True)

    sp = add("sunits", cmd_sunits, help="S-unit basis and exceptional S-units")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--primes", required=True, help="comma-separated rational primes")
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("--exceptional", action="store_true")

    sp = add("tessellate", cmd_tessellate, help="cell census of the tessellation")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--bits", type=int, default=256)

    sp = add("betageo", cmd_betageo, help="the geometric Bloch element")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--bits", type=int, default=256)

    sp = add("zeta", cmd_zeta, help="L-value, zeta_k(2), zeta_k'(-1), volume")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--bits", type=int, default=256)

    sp = add("k2order", cmd_k2order, help="integrality test for a Bloch element")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--gamma", required=True, help="FormalSum JSON file")
    sp.add_argument("--bits", type=int, default=256)

    sp = add("find-generator", cmd_find_generator, help="direct generator search")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--M", type=int)
    sp.add_argument("--primes")
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("--bits", type=int, default=256)

    sp = add("divide", cmd_divide, help="divide beta_geo by M with a certificate")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--M", type=int)
    sp.add_argument("--primes")
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("--budget", type=int, default=0)
    sp.add_argument("--bits", type=int, default=256)

    sp = add("certify", cmd_certify, help="express a target as relation rows")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--relations-out", required=True)
    sp.add_argument("--budget", type=int, default=2)

    sp = add("verify-cert", cmd_verify_cert, help="recheck a relation certificate")
    sp.add_argument("cert")
    sp.add_argument("--d", type=int, required=True)

    sp = add("export", cmd_export, help="merge result records into a JSONL table")
    sp.add_argument("results", nargs="+")
    sp.add_argument("--out", required=True)

    sp = add("import-check", cmd_import_check, help="round-trip check a results table")
    sp.add_argument("table")

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = args.fn(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
