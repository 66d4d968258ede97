"""Command-line interface tying the modules into reproducible experiments.

Exit codes: 0 success, 2 validation/usage, 3 work budget exceeded,
4 arithmetic range.  Errors print a single machine-parsable line
``error:<kind>:<message>`` on stderr.  All payloads are pure functions of
the parsed configuration: integers stay integers and non-integral reals are
fixed-precision decimal strings, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import density, forms, geometry, orbit
from .backend import BACKEND
from .errors import ArithmeticRangeError, BudgetError, ValidationError
from .quadruple import format_quadruple, parse_quadruple, reduce_to_root

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_ARITHMETIC = 4


def _default_threads() -> int:
    env = os.environ.get("APOLLONIAN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n", out)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that accepts quadruple values like '-1,2,2,3'."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d+(,-?\d+)*$")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the result to this file instead of stdout")
    p.add_argument("--threads", type=int, default=None, help="worker count (default: cores)")
    p.add_argument("--budget", type=int, default=forms.DEFAULT_BUDGET,
                   help="work cap in units of 1e6 inner-loop iterations")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="apollonian", description="integer Apollonian packing toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce a quadruple to its root")
    p.add_argument("--quadruple", required=True)
    p.add_argument("--allow-imprimitive", action="store_true")
    _add_common(p)

    p = sub.add_parser("enumerate", help="stream circle creations as CSV")
    p.add_argument("--root", required=True)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--max-word-length", type=int, default=None)
    _add_common(p)

    for name in ("kappa", "multiplicity"):
        p = sub.add_parser(name, help="tally summary of curvatures up to X")
        p.add_argument("--root", required=True)
        p.add_argument("--X", type=int, required=True)
        _add_common(p)

    p = sub.add_parser("delta-fit", help="growth exponent of the circle count")
    p.add_argument("--root", required=True)
    p.add_argument("--X-list", required=True, help="ascending comma-separated bounds")
    _add_common(p)

    p = sub.add_parser("tangency-form", help="shifted form of the first coordinate")
    p.add_argument("--quadruple", required=True)
    _add_common(p)

    p = sub.add_parser("values", help="value set of a quadruple's tangency form")
    p.add_argument("--quadruple", required=True)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--no-coprime", action="store_true")
    p.add_argument("--quadrant", choices=("nonneg", "full"), default="full")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_common(p)

    p = sub.add_parser("u0", help="distinct integers represented by a form")
    p.add_argument("--form", required=True, help="'A,2B,C'")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--no-coprime", action="store_true")
    _add_common(p)

    p = sub.add_parser("spin-check", help="spin image of a 2x2 integer matrix")
    p.add_argument("--matrix", required=True, help="'a,b,c,d' row-major, det ±1")
    _add_common(p)

    p = sub.add_parser("change-of-vars", help="verify the variable-chain identities")
    p.add_argument("--quadruple", required=True)
    _add_common(p)

    p = sub.add_parser("intersect", help="exact intersection of two value sets")
    p.add_argument("--quadruple-a", required=True)
    p.add_argument("--quadruple-b", required=True)
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--no-coprime", action="store_true")
    p.add_argument("--quadrant", choices=("nonneg", "full"), default="nonneg")
    _add_common(p)

    p = sub.add_parser("sigma-p", help="local density of the difference form")
    p.add_argument("--quadruple-a", required=True)
    p.add_argument("--quadruple-b", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("singular-series", help="truncated product of local densities")
    p.add_argument("--quadruple-a", required=True)
    p.add_argument("--quadruple-b", required=True)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("b2s", help="sums of two squares in a progression")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("density", help="run the full density experiment")
    p.add_argument("--root", required=True)
    p.add_argument("--a0-index", type=int, default=1)
    p.add_argument("--X", type=int, default=10**6)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--a-min", type=int, default=50)
    p.add_argument("--a-max", type=int, default=100)
    p.add_argument("--no-coprime", action="store_true")
    p.add_argument("--quadrant", choices=("nonneg", "full"), default="nonneg")
    p.add_argument("--pairs-csv", help="also write the pairwise intersection table as CSV")
    _add_common(p)

    p = sub.add_parser("render", help="write an SVG of the packing")
    p.add_argument("--root", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=10)
    _add_common(p)

    return ap


def _run(args) -> None:
    threads = args.threads if getattr(args, "threads", None) else _default_threads()
    cmd = args.command

    if cmd == "reduce":
        v = parse_quadruple(args.quadruple)
        root, trace = reduce_to_root(v, require_primitive=not args.allow_imprimitive)
        _emit_json({"root": format_quadruple(root), "word": list(trace.word)}, args.out)

    elif cmd == "enumerate":
        root = parse_quadruple(args.root)
        lines = ["curvature,parent_word_length,generator_index"]
        for em in orbit.walk(root, args.X, max_word_length=args.max_word_length):
            lines.append(f"{em.curvature},{em.parent_word_length},{em.gen_index}")
        _emit("\n".join(lines) + "\n", args.out)

    elif cmd in ("kappa", "multiplicity"):
        root = parse_quadruple(args.root)
        _emit_json(orbit.summary(root, args.X, threads=threads), args.out)

    elif cmd == "delta-fit":
        root = parse_quadruple(args.root)
        bounds = [int(x) for x in args.X_list.split(",")]
        fit = orbit.delta_fit(root, bounds, threads=threads)
        _emit_json(
            {
                "slope": f"{fit.slope:.9f}",
                "residual": f"{fit.residual:.9f}",
                "points": [[b, n] for b, n in fit.points],
            },
            args.out,
        )

    elif cmd == "tangency-form":
        tf = forms.tangency_form(parse_quadruple(args.quadruple))
        _emit_json({"form": str(tf.form), "shift": tf.shift, "disc": tf.form.disc}, args.out)

    elif cmd == "values":
        tf = forms.tangency_form(parse_quadruple(args.quadruple))
        vs = forms.value_set(
            tf, args.X, coprime=not args.no_coprime,
            nonneg=args.quadrant == "nonneg", budget=args.budget,
        )
        if args.format == "csv":
            _emit("\n".join(str(int(v)) for v in vs) + "\n", args.out)
        else:
            _emit_json({"count": int(len(vs)), "values": [int(v) for v in vs]}, args.out)

    elif cmd == "u0":
        f = forms.BinaryQuadraticForm.parse(args.form)
        u = forms.count_distinct_values(f, args.X, coprime=not args.no_coprime,
                                        budget=args.budget)
        _emit_json({"form": str(f), "X": args.X, "U0": u}, args.out)

    elif cmd == "spin-check":
        nums = [int(x) for x in args.matrix.split(",")]
        if len(nums) != 4:
            raise ValidationError("matrix must be 'a,b,c,d'")
        m = ((nums[0], nums[1]), (nums[2], nums[3]))
        image = forms.spin_map(m)
        _emit_json(
            {
                "image": [list(row) for row in image],
                "preserves_disc_form": forms.preserves_disc_form(image),
            },
            args.out,
        )

    elif cmd == "change-of-vars":
        _emit_json(forms.verify_change_of_variables(parse_quadruple(args.quadruple)), args.out)

    elif cmd == "intersect":
        tfa = forms.tangency_form(parse_quadruple(args.quadruple_a))
        tfb = forms.tangency_form(parse_quadruple(args.quadruple_b))
        kwargs = dict(coprime=not args.no_coprime, nonneg=args.quadrant == "nonneg",
                      budget=args.budget)
        n = density.intersection_exact(tfa, tfb, args.X, **kwargs)
        bits_a = forms.value_bits(tfa.form, tfa.shift, args.X, **kwargs)
        bits_b = forms.value_bits(tfb.form, tfb.shift, args.X, **kwargs)
        from .tally import popcount

        _emit_json(
            {"intersection": n, "size_a": popcount(bits_a), "size_b": popcount(bits_b)},
            args.out,
        )

    elif cmd == "sigma-p":
        qf = density.QuaternaryForm(
            forms.tangency_form(parse_quadruple(args.quadruple_a)),
            forms.tangency_form(parse_quadruple(args.quadruple_b)),
        )
        sigma = density.local_density(qf, args.p, args.k, budget=args.budget)
        _emit_json(
            {
                "p": args.p,
                "k": args.k,
                "sigma": str(sigma),
                "sigma_float": f"{float(sigma):.9f}",
                "case": density.classify_prime(args.p, qf.fa.shift, qf.fb.shift),
            },
            args.out,
        )

    elif cmd == "singular-series":
        qf = density.QuaternaryForm(
            forms.tangency_form(parse_quadruple(args.quadruple_a)),
            forms.tangency_form(parse_quadruple(args.quadruple_b)),
        )
        rep = density.singular_series(qf, args.p_max, k=args.k, budget=args.budget)
        _emit_json(rep.as_dict(), args.out)

    elif cmd == "b2s":
        b = density.count_two_squares(args.x, args.q, args.r, budget=args.budget)
        _emit_json({"x": args.x, "q": args.q, "r": args.r, "B": b}, args.out)

    elif cmd == "density":
        cfg = density.ExperimentConfig(
            root=parse_quadruple(args.root),
            a0_index=args.a0_index,
            bound=args.X,
            eta=args.eta,
            a_lo=args.a_min,
            a_hi=args.a_max,
            coprime=not args.no_coprime,
            nonneg=args.quadrant == "nonneg",
            threads=threads,
            budget=args.budget,
        )
        rep = density.run_density_experiment(cfg)
        if args.pairs_csv:
            rows = ["a,a_prime,intersection"]
            rows += [f"{a},{b},{n}" for a, b, n in rep["pairwise_intersections"]]
            with open(args.pairs_csv, "w") as fh:
                fh.write("\n".join(rows) + "\n")
        _emit_json(rep, args.out)

    elif cmd == "render":
        if args.depth > args.max_depth:
            raise ValidationError(f"depth {args.depth} exceeds --max-depth {args.max_depth}")
        placements = geometry.layout_packing(parse_quadruple(args.root), args.depth)
        _emit(geometry.svg_document(placements), args.out)

    else:  # pragma: no cover
        raise ValidationError(f"unknown command {cmd}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _run(args)
    except ValidationError as exc:
        print(f"error:usage:{exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"error:budget:{exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ArithmeticRangeError as exc:
        print(f"error:arithmetic:{exc}", file=sys.stderr)
        return EXIT_ARITHMETIC
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
