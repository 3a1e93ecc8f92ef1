"""Command-line front end: one query or one sweep per invocation, deterministic output.

Exit status: 0 success, 2 malformed command line, 3 violated arithmetic
constraint, 4 disagreement between independent computations.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import __version__
from .distinction_engine import PROVENANCE, CrossCheckError, distinction_report
from .endo_invariants import (
    BetaClass,
    EndoClassInvariants,
    InnerFormSpec,
    InvolutionSpec,
    Quad,
    admissible_degrees,
    rep_invariants,
)
from .verification import ALPHA_LABELS, SweepRanges, _base, alpha_class, run_sweep

EXIT_PARSE = 2
EXIT_CONSTRAINT = 3
EXIT_CROSSCHECK = 4

MODES = ("invariants", "exists", "count", "epsilon", "verdict", "verify", "sweep")
QUERY_MODES = MODES[:5]

# report fields shown by each query mode
MODE_FIELDS = {
    "invariants": ("m", "c", "g", "c0", "l", "t", "alpha_in_norm", "admissible_N"),
    "exists": ("tau_char_exists",),
    "count": ("tau_char_exists", "char_class_count"),
    "epsilon": ("w_sign", "w_sign_formulary", "e_K"),
    "verdict": ("tau_char_exists", "e_K", "verdict"),
}


class ConstraintError(ValueError):
    pass


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _quad_list(text: str) -> tuple[Quad, ...]:
    try:
        return tuple(Quad(x.strip()) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list from unram,ram, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="innerdist",
        description="Distinction invariants for cuspidal representations of inner forms of GL_2n over p-adic fields.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--mode", choices=MODES, default="invariants")
    out = ap.add_mutually_exclusive_group()
    out.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    out.add_argument("--table", dest="fmt", action="store_const", const="table", help="aligned text table")
    ap.set_defaults(fmt="json")

    q = ap.add_argument_group("query")
    q.add_argument("--p", type=int, help="residue characteristic, odd prime")
    q.add_argument("--f0", type=int, default=1, help="residue degree of F over Q_p")
    q.add_argument("--r", type=int, help="the group is GL_r(D)")
    q.add_argument("--d", type=int, help="reduced degree of the division algebra D")
    q.add_argument("--deg", type=int, help="[E:F]; checked against e*f")
    q.add_argument("--e", type=int, help="ramification index of E/F, prime to p")
    q.add_argument("--f", type=int, help="residue degree of E/F")
    q.add_argument("--quad", choices=[x.value for x in Quad], help="type of E/E0")
    q.add_argument("--alpha", choices=sorted(ALPHA_LABELS), help="square class defining the involution")
    q.add_argument("--zeta", type=int, default=0, help="exponent of zeta in pi_E^e = pi_F zeta")
    q.add_argument("--beta-val", type=int, help="valuation of beta in E")
    q.add_argument("--beta-zeta", type=int, help="exponent of the residue unit of beta")
    q.add_argument("--N", type=int, help="degree of the cuspidal support over E, needed with beta")
    q.add_argument("--delta", type=int, help="parametric degree, for representation invariants")
    q.add_argument("--s", type=int, help="level zero: segment length for the epsilon sign")
    q.add_argument("--chi-trivial-on-norms", type=_bool, help="level zero, s = 2n: chi trivial on norms from K")
    q.add_argument("--symplectic", type=_bool, help="whether the parameter is symplectic")

    s = ap.add_argument_group("sweep")
    s.add_argument("--primes", type=_int_list, default=(3, 5, 7), help="comma-separated odd primes")
    s.add_argument("--f0s", type=_int_list, default=(1,), help="comma-separated base residue degrees")
    s.add_argument("--two-n-max", type=int, default=8, help="largest 2n = r d")
    s.add_argument("--e-max", type=int, default=4, help="largest ramification index of E/F")
    s.add_argument("--f-max", type=int, default=4, help="largest residue degree of E/F")
    s.add_argument("--quads", type=_quad_list, default=(Quad.UNRAMIFIED, Quad.RAMIFIED), help="comma-separated types of E/E0")
    s.add_argument("--zeta-limit", type=int, default=SweepRanges.zeta_limit, help="enumerate all zeta below this unit-group order, sample above")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    return ap


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ConstraintError(f"mode {args.mode} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _query_dict(args: argparse.Namespace) -> dict[str, Any]:
    keys = ("p", "f0", "r", "d", "deg", "e", "f", "quad", "alpha", "zeta", "beta_val", "beta_zeta", "N", "delta", "s", "chi_trivial_on_norms", "symplectic")
    out = {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
    out["mode"] = args.mode
    return out


def run_query(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, str]]:
    _require(args, "p", "r", "d", "quad", "alpha")
    base = _base(args.p, args.f0)
    if (args.r * args.d) % 2:
        raise ConstraintError(f"r*d = {args.r * args.d} must be even")
    inner = InnerFormSpec.of(args.r, args.d)
    quad = Quad(args.quad)
    if quad is Quad.NULL:
        e = 1 if args.e is None else args.e
        f = 1 if args.f is None else args.f
    else:
        _require(args, "e", "f")
        e, f = args.e, args.f
    deg = e * f if args.deg is None else args.deg
    if deg != e * f:
        raise ConstraintError(f"--deg {deg} does not equal e*f = {e * f}")
    if quad is not Quad.NULL and e % args.p == 0:
        raise ConstraintError(f"e = {e} is divisible by p = {args.p}; only tame towers are modeled")
    endo = EndoClassInvariants(deg, e, f, quad)
    inv = InvolutionSpec(alpha_class(base, args.alpha))

    beta = None
    if (args.beta_val is None) != (args.beta_zeta is None):
        raise ConstraintError("--beta-val and --beta-zeta go together")
    if args.beta_val is not None:
        if quad is Quad.NULL:
            raise ConstraintError("beta only exists at positive level")
        _require(args, "N")
        beta = BetaClass(args.beta_val, base.residue.extension(f).unit(args.beta_zeta))
    elif args.N is not None:
        raise ConstraintError("--N only applies together with beta")
    if quad is not Quad.NULL and (args.s is not None or args.chi_trivial_on_norms is not None):
        raise ConstraintError("--s and --chi-trivial-on-norms only apply at level zero")

    rep = distinction_report(
        base, inner, endo, inv,
        zeta=args.zeta, beta=beta, N=args.N, symplectic=args.symplectic,
        s=args.s, chi_trivial_on_norms=args.chi_trivial_on_norms,
    )
    full = rep.as_dict()
    full["admissible_N"] = admissible_degrees(inner, endo) if quad is not Quad.NULL else None
    fields = list(MODE_FIELDS[args.mode])
    if args.mode == "epsilon" and quad is Quad.NULL and full["e_K"] is None:
        raise ConstraintError("the level zero epsilon sign needs --s")
    if args.mode == "invariants" and args.delta is not None:
        if quad is Quad.NULL:
            raise ConstraintError("representation invariants need positive level")
        ri = rep_invariants(inner, endo, args.delta, beta)
        full.update(delta=ri.delta, s=ri.s, b=ri.b, t_pi=ri.t_pi, conductor=ri.conductor)
        fields += ["delta", "s", "b", "t_pi", "conductor"]
    report = {k: full[k] for k in fields}
    prov = {k: _provenance(k, quad, inv) for k in report}
    return report, prov


def _provenance(key: str, quad: Quad, inv: InvolutionSpec) -> str:
    if key == "tau_char_exists":
        if quad is Quad.NULL:
            return PROVENANCE["tau_char_exists_level0"]
        if inv.is_sigma_case:
            return PROVENANCE["tau_char_exists_sigma"]
    if key == "e_K" and quad is Quad.NULL:
        return PROVENANCE["e_K_level0"]
    return PROVENANCE[key]


def run_sweep_mode(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, str], bool]:
    if args.mode == "verify":
        ranges = SweepRanges()
    else:
        if any(x < 3 for x in args.primes):
            raise ConstraintError("sweep primes must be odd primes")
        ranges = SweepRanges(
            primes=args.primes, f0s=args.f0s, two_n_max=args.two_n_max,
            e_max=args.e_max, f_max=args.f_max, quads=args.quads, zeta_limit=args.zeta_limit,
        )
    if args.jobs < 1:
        raise ConstraintError("--jobs must be at least 1")
    res = run_sweep(ranges, jobs=args.jobs)
    summary = res.summary()
    summary["ranges"] = {
        "primes": list(ranges.primes), "f0s": list(ranges.f0s), "two_n_max": ranges.two_n_max,
        "e_max": ranges.e_max, "f_max": ranges.f_max,
        "quads": [q.value for q in ranges.quads], "zeta_limit": ranges.zeta_limit,
    }
    prov = {"checks": "cross-checks of closed forms against tower computations"}
    return summary, prov, not res.failures


def _table(doc: dict[str, Any]) -> str:
    rows: list[tuple[str, str]] = []

    def walk(prefix: str, obj: Any) -> None:
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        else:
            rows.append((prefix, json.dumps(obj, sort_keys=True)))

    walk("", {k: v for k, v in doc.items() if k != "provenance"})
    width = max(len(k) for k, _ in rows)
    lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
    for k in sorted(doc["provenance"]):
        lines.append(f"{('by.' + k).ljust(width)}  {doc['provenance'][k]}")
    return "\n".join(lines)


def render(doc: dict[str, Any], fmt: str) -> str:
    if fmt == "table":
        return _table(doc)
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    ok = True
    try:
        if args.mode in QUERY_MODES:
            report, prov = run_query(args)
            query = _query_dict(args)
        else:
            report, prov, ok = run_sweep_mode(args)
            query = {"mode": args.mode}
    except CrossCheckError as exc:
        print(f"innerdist: cross-check failure: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except ValueError as exc:
        print(f"innerdist: constraint violated: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    doc = {"query": query, "report": report, "provenance": prov, "version": __version__}
    print(render(doc, args.fmt))
    return 0 if ok else EXIT_CROSSCHECK


if __name__ == "__main__":
    sys.exit(main())
