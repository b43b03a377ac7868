"""Command line front end: ``oaid <subcommand> ...``."""
import argparse
import json
import os
import sys
from fractions import Fraction

from . import enumer, estimand, ident, ratlin, verify
from .space import Spec, load_model

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _pair(text):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected t',t such as 1,0")
    return a, b


def _bits(text):
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma separated 0/1 list")
    if any(x not in (0, 1) for x in v):
        raise argparse.ArgumentTypeError("entries of c must be 0 or 1")
    return v


def _default_threads():
    try:
        return max(1, int(os.environ.get("OAID_THREADS", "1")))
    except ValueError:
        return 1


def build_parser():
    p = argparse.ArgumentParser(prog="oaid", description="Enumerate and verify outcome-agnostic "
                                "identification results for discrete instrument models.")
    sub = p.add_subparsers(dest="command", required=True)

    def spec_args(sp, required=True):
        sp.add_argument("-T", "--treatments", type=int, required=required)
        sp.add_argument("-Z", "--instruments", type=int, required=required)
        sp.add_argument("--dedup", choices=enumer.DEDUP_MODES, default="sequential")
        sp.add_argument("--threads", type=int, default=_default_threads())
        sp.add_argument("--cap", type=int, default=enumer.DEFAULT_ALPHA_CAP,
                        help="largest number of coefficient vectors to scan")
        sp.add_argument("--resume", metavar="PATH", help="continue from a checkpoint file")
        sp.add_argument("--checkpoint", metavar="PATH", help="write progress to this file")
        sp.add_argument("--checkpoint-every", type=int, default=None, metavar="N")

    sp = sub.add_parser("enumerate", help="run the search and write the catalog")
    spec_args(sp)
    sp.add_argument("--format", choices=("json", "latex", "text"), default="json")
    sp.add_argument("--out", metavar="PATH")

    sp = sub.add_parser("catalog", help="render a catalog (enumerating unless --from is given)")
    spec_args(sp, required=False)
    sp.add_argument("--from", dest="source", metavar="PATH", help="catalog JSON to render")
    sp.add_argument("--format", choices=("json", "latex", "text"), default="latex")
    sp.add_argument("--out", metavar="PATH")

    sp = sub.add_parser("counts", help="print model and collection counts")
    spec_args(sp)

    sp = sub.add_parser("verify", help="check every collection against the exact oracle")
    spec_args(sp, required=False)
    sp.add_argument("--from", dest="source", metavar="PATH", help="catalog JSON to verify")
    sp.add_argument("--seed", type=int, default=0, help="first seed")
    sp.add_argument("--seeds", type=int, default=100, help="number of seeds per collection")
    sp.add_argument("--out", metavar="PATH")

    sp = sub.add_parser("check", help="list identified parameters for one model")
    sp.add_argument("--model", required=True, metavar="PATH")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--pair", type=_pair)
    g.add_argument("--t", type=int)
    sp.add_argument("--format", choices=("text", "latex"), default="text")

    sp = sub.add_parser("witness", help="observationally equivalent pair showing non-identification")
    sp.add_argument("--model", required=True, metavar="PATH")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--c", type=_bits, required=True)

    sp = sub.add_parser("spectrum", help="print D_n and C_n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--brute-force-limit", type=int, default=ratlin.BRUTE_FORCE_LIMIT)
    sp.add_argument("--threads", type=int, default=_default_threads())
    return p


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _catalog(args):
    if getattr(args, "source", None):
        with open(args.source) as fh:
            return estimand.catalog_from_json(json.load(fh))
    if args.treatments is None or args.instruments is None:
        raise ValueError("give -T and -Z, or --from")
    spec = Spec(args.instruments, args.treatments)
    records = enumer.algorithm2_part1(spec, cap=args.cap, threads=args.threads,
                                      checkpoint=args.checkpoint, resume=args.resume,
                                      checkpoint_every=args.checkpoint_every)
    return enumer.algorithm2_part2(records, spec, args.dedup)


def _fmt(v):
    return "(" + ", ".join(estimand.format_coef(x) for x in v) + ")"


def cmd_enumerate(args):
    cat = _catalog(args)
    _write(estimand.emit_catalog(cat, args.format), args.out)
    print("%d models, %d collections" % enumer.summary_counts(cat), file=sys.stderr)
    return EXIT_OK


def cmd_catalog(args):
    _write(estimand.emit_catalog(_catalog(args), args.format), args.out)
    return EXIT_OK


def cmd_counts(args):
    print("%d %d" % enumer.summary_counts(_catalog(args)))
    return EXIT_OK


def cmd_verify(args):
    cat = _catalog(args)
    records = verify.verify_catalog(cat, range(args.seed, args.seed + args.seeds))
    _write(verify.report_lines(records), args.out)
    failed = sum(r["status"] != "pass" for r in records)
    print("%d checks, %d failed" % (len(records), failed), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_check(args):
    model = load_model(args.model)
    binary = model.spec.n_treatments
    if args.pair:
        colls = ident.binary_collections(model, *args.pair)
        print("%d binary collection(s) for (t',t)=%s" % (len(colls), args.pair))
        for c in colls:
            print("c=%s alpha_t'=%s alpha_t=%s" % (_fmt(c.c), _fmt(c.alpha_t_prime), _fmt(c.alpha_t)))
            print("  " + estimand.render_formula(estimand.build_te_estimand(c, binary), args.format))
    else:
        combos = ident.binary_combinations(model, args.t)
        print("%d binary combination(s) for t=%d" % (len(combos), args.t))
        for c in combos:
            print("c=%s alpha=%s" % (_fmt(c.c), _fmt(c.alpha)))
            print("  " + estimand.render_formula(estimand.build_mean_estimand(c, binary), args.format))
    return EXIT_OK


def _latent_json(lat):
    return {"group_probs": [str(p) for p in lat.group_probs],
            "group_means": [[str(m) for m in row] for row in lat.group_means]}


def cmd_witness(args):
    model = load_model(args.model)
    if len(args.c) != len(model.groups):
        raise ValueError("c must have one entry per group")
    pair = verify.non_identification_witness(model, args.t, args.c)
    if pair is None:
        print("none: c is in the row space of A^[%d], so the mean is identified" % args.t)
        return EXIT_OK
    a, b = pair
    gap = verify.target_parameter(b, args.c, args.t) - verify.target_parameter(a, args.c, args.t)
    print(json.dumps({"first": _latent_json(a), "second": _latent_json(b), "target_gap": str(gap)},
                     indent=1, sort_keys=True))
    return EXIT_OK


def cmd_spectrum(args):
    d = ratlin.determinant_spectrum(args.n, args.brute_force_limit, args.threads)
    c = sorted({Fraction(a, b) for a in d for b in d if b})
    print("D_%d = {%s}" % (args.n, ", ".join(str(x) for x in sorted(d))))
    print("C_%d = {%s}" % (args.n, ", ".join(str(x) for x in c)))
    return EXIT_OK


COMMANDS = {"enumerate": cmd_enumerate, "catalog": cmd_catalog, "counts": cmd_counts,
            "verify": cmd_verify, "check": cmd_check, "witness": cmd_witness,
            "spectrum": cmd_spectrum}


def run(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("oaid: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError) as exc:
        print("oaid: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())
