"""``relkit`` command line interface.

Exit codes:

    0  success
    1  verify: at least one property failed
    2  decomposition computed but it is not of Lebesgue type
    3  unreadable input or bad command line
    4  dimension mismatch
    5  a matrix that must be a nonnegative contraction is not one
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import complementation as cm
from . import lebesgue as lb
from . import pairs as pr
from .errors import DimensionMismatch, InvalidContraction, InvalidInput, NotPseudoOrthogonal
from .matrixio import matrix_to_json, read_matrix, validate
from .properties import PROPERTIES, run_property
from .relation import LinearRelation
from .subspace import DEFAULT_TOL, Subspace, Tolerances, orthonormalize

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NOT_LEBESGUE = 2
EXIT_PARSE = 3
EXIT_DIMENSION = 4
EXIT_CONTRACTION = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def tolerances_from_env(environ=None) -> Tolerances:
    """Default tolerances, with ``RELKIT_TOLERANCE`` replacing ``tau_member``."""
    environ = os.environ if environ is None else environ
    raw = environ.get("RELKIT_TOLERANCE")
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    try:
        return DEFAULT_TOL.with_member(float(raw))
    except ValueError as exc:
        raise UsageError(f"RELKIT_TOLERANCE: {exc}") from None


# -- JSON helpers ----------------------------------------------------------------


def _tol_json(tol: Tolerances) -> dict:
    return {"rank": tol.rank, "orth": tol.orth, "member": tol.member, "psd": tol.psd}


def _sub_json(S: Subspace) -> dict:
    return {"ambient_dim": S.ambient_dim, "dim": S.dim, "basis": matrix_to_json(S.basis)}


def _rel_json(T: LinearRelation, tol: Tolerances) -> dict:
    dom, ran, ker, mul = T.parts(tol)
    return {
        "dim_h": T.dim_h,
        "dim_k": T.dim_k,
        "dim": T.dim,
        "graph": matrix_to_json(T.graph.basis),
        "dims": {"dom": dom.dim, "ran": ran.dim, "ker": ker.dim, "mul": mul.dim},
    }


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if np.isfinite(x) else None


def _emit(report: dict, schema: str, out) -> None:
    validate(report, schema)
    out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


# -- commands --------------------------------------------------------------------


def cmd_decompose_relation(args, tol: Tolerances, out) -> int:
    if args.graph is not None:
        if args.phi is not None or args.psi is not None:
            raise UsageError("give either --graph or --phi/--psi, not both")
        if args.dim_h is None:
            raise UsageError("--graph needs --dim-h")
        T = LinearRelation.from_graph(read_matrix(args.graph), args.dim_h, tol)
    elif args.phi is not None and args.psi is not None:
        T = pr.relation_of_pair(pr.OperatorPair(read_matrix(args.phi), read_matrix(args.psi)), tol)
    else:
        raise UsageError("need --graph FILE --dim-h N, or --phi FILE --psi FILE")

    if args.k is None:
        K, source = T.mul(tol).projector(), "lebesgue"
    else:
        K, source = read_matrix(args.k), "given"
    d = lb.classify(lb.decompose(T, K, tol), tol)
    add = lb.addendum_check(T, d.K, tol)

    overlap = None
    if d.pseudo_orthogonal:
        try:
            ro = lb.range_overlap(T, d.K, tol)
        except NotPseudoOrthogonal:
            ro = None
        if ro is not None:
            overlap = {
                "direct": _sub_json(ro.direct),
                "via_M": _sub_json(ro.via_M),
                "M": _sub_json(ro.M),
                "distance": ro.distance,
                "full_range": ro.full_range,
                "clos_distance": _num(ro.clos_distance),
            }
    cert = d.certificates
    report = {
        "command": "decompose-relation",
        "dim_h": T.dim_h,
        "dim_k": T.dim_k,
        "K_source": source,
        "K": matrix_to_json(d.K),
        "T": _rel_json(T, tol),
        "T1": _rel_json(d.T1, tol),
        "T2": _rel_json(d.T2, tol),
        "flags": {
            "strict": d.strict,
            "pseudo_orthogonal": d.pseudo_orthogonal,
            "lebesgue_type": bool(d.lebesgue_type),
            "orthogonal": bool(d.orthogonal),
        },
        "conditions": {
            "direct_sum": d.direct_sum,
            "mul_invariant": d.mul_invariant,
            "reconstruction_gap": d.reconstruction_gap,
            "t1_closable": cert["t1_closable"],
            "t2_singular": cert["t2_singular"],
            "ran_x_in_dom_adjoint": cert["ran_x_in_dom_adjoint"],
            "ran_k_cap_dom_adjoint_in_ker_adjoint": cert["ran_k_cap_dom_adjoint_in_ker_adjoint"],
            "conditions_agree": cert["conditions_agree"],
            "weak_b_prime": add.weak_b_prime,
        },
        "overlap": overlap,
        "tolerances": _tol_json(tol),
    }
    _emit(report, "relation-report", out)
    return EXIT_OK if d.lebesgue_type else EXIT_NOT_LEBESGUE


def cmd_decompose_pair(args, tol: Tolerances, out) -> int:
    p = pr.OperatorPair(read_matrix(args.phi), read_matrix(args.psi))
    lp = pr.lebesgue_pair(p, tol)
    if args.k is None:
        d, source = lp, "lebesgue"
    else:
        d, source = pr.pair_decompose(p, read_matrix(args.k), tol), "given"
    R = residual = None
    if np.linalg.norm(lp.Psi1, 2) > tol.member:
        R_mat = pr.radon_nikodym(p.with_psi(lp.Psi1), tol)
        R = matrix_to_json(R_mat)
        residual = float(np.linalg.norm(lp.Psi1 - R_mat @ p.Phi, 2))
    report = {
        "command": "decompose-pair",
        "dim_e": p.dim_e,
        "dim_h": p.dim_h,
        "dim_k": p.dim_k,
        "K_source": source,
        "K": matrix_to_json(d.K),
        "Psi1": matrix_to_json(d.Psi1),
        "Psi2": matrix_to_json(d.Psi2),
        "Psi_reg": matrix_to_json(lp.Psi1),
        "Psi_sing": matrix_to_json(lp.Psi2),
        "radon_nikodym": R,
        "radon_nikodym_residual": residual,
        "D_space": _sub_json(pr.D_space(p, tol)),
        "flags": {
            "psi_regular": pr.is_regular(p, tol),
            "psi_singular": pr.is_singular_pair(p, tol),
            "regular_part": d.regular_part,
            "singular_part": d.singular_part,
            "pseudo_orthogonal": d.pseudo_orthogonal,
            "lebesgue_type": d.lebesgue_type,
        },
        "conditions": {"mul_direct": d.mul_direct, "weak_b_prime": d.weak_b_prime, **d.certificates},
        "tolerances": _tol_json(tol),
    }
    _emit(report, "pair-report", out)
    return EXIT_OK if d.lebesgue_type else EXIT_NOT_LEBESGUE


def cmd_complement(args, tol: Tolerances, out) -> int:
    X = read_matrix(args.x)
    if X.shape[0] != X.shape[1]:
        raise InvalidContraction(f"expected a square matrix, got shape {X.shape}")
    P = cm.ContractionPair(X, tol=tol)
    k = cm.klemma_report(P)
    o = cm.overlap_space(P)
    w = cm.W_projection(P)
    v = cm.V_model(P)
    ps = cm.parallel_sum(P.X, P.Y, tol)
    report = {
        "command": "complement",
        "n": P.n,
        "X": matrix_to_json(P.X),
        "Y": matrix_to_json(P.Y),
        "subspaces": {
            "ran_x": _sub_json(orthonormalize(P.X, tol, scale=1.0)),
            "ran_y": _sub_json(orthonormalize(P.Y, tol, scale=1.0)),
            "ker_xy": _sub_json(k.ker_xy),
            "ran_x_cap_ran_y": _sub_json(k.ran_x_cap_ran_y),
            "ran_xy": _sub_json(k.ran_xy),
            "ran_sqrt_cap": _sub_json(k.ran_sqrt_cap),
            "ran_sqrt_xy": _sub_json(k.ran_sqrt_xy),
        },
        "identities": {
            "distances": k.distances,
            "commutator_residual": k.commutator_residual,
            "kernels_orthogonal": k.kernels_orthogonal,
            "passed": k.passed(tol),
        },
        "overlap": {
            "basis": _sub_json(o.basis),
            "gram": matrix_to_json(o.gram()) if o.dim else None,
            "intersection_distance": o.intersection_distance,
            "inner_product_residual": _num(o.inner_product_residual),
        },
        "w_model": {
            "isometry_residual": w.isometry_residual,
            "idempotent_residual": w.idempotent_residual,
            "hermitian_residual": w.hermitian_residual,
            "block_residual": w.block_residual,
            "kernel_distance": w.kernel_distance,
            "kernel_dim": w.kernel.dim,
            "surjective": w.surjective,
            "x_is_projection": w.x_is_projection,
        },
        "v_model": {
            "isometry_residual": v.isometry_residual,
            "uw_residual": v.uw_residual,
            "unitary_residual": v.unitary_residual,
            "adjoint_residual": v.adjoint_residual,
            "projection_residual": v.projection_residual,
            "kernel_dim": v.kernel_dim,
            "surjective": v.surjective,
        },
        "parallel_sum": {"matrix": matrix_to_json(ps), "norm": float(np.linalg.norm(ps, 2))},
        "tolerances": _tol_json(tol),
    }
    _emit(report, "complement-report", out)
    return EXIT_OK


def verify_report(seed: int, trials: int, max_dim: int, tol: Tolerances, keys=None) -> dict:
    props = {}
    for key in sorted(keys or PROPERTIES):
        r = run_property(key, seed, trials, max_dim, tol)
        props[key] = {
            "trials": r.trials,
            "passed": r.passed,
            "worst_residual": r.worst_residual,
            "failures": r.failures[:20],
        }
    return {
        "command": "verify",
        "seed": seed,
        "trials": trials,
        "max_dim": max_dim,
        "tolerances": _tol_json(tol),
        "properties": props,
        "all_passed": all(p["passed"] == p["trials"] for p in props.values()),
    }


def cmd_verify(args, tol: Tolerances, out) -> int:
    keys = None
    if args.property:
        keys = [k for k in PROPERTIES if any(k.startswith(prefix) for prefix in args.property)]
        if not keys:
            raise UsageError(f"no property matches {args.property}")
    report = verify_report(args.seed, args.trials, args.max_dim, tol, keys)
    _emit(report, "verify-report", out)
    return EXIT_OK if report["all_passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relkit", description="Linear relations, complementation and Lebesgue type decompositions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose-relation", help="split a relation T = (I-K)T + KT")
    p.add_argument("--graph", help="matrix whose columns span the graph of T in H x K")
    p.add_argument("--dim-h", type=_positive_int, help="dimension of H (rows of the graph belonging to H)")
    p.add_argument("--phi", help="Phi of an operator pair generating T")
    p.add_argument("--psi", help="Psi of an operator pair generating T")
    p.add_argument("--k", help="contraction K; defaults to the projection onto mul T")
    p.set_defaults(func=cmd_decompose_relation)

    p = sub.add_parser("decompose-pair", help="split Psi = (I-K)Psi + K Psi relative to Phi")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--k", help="contraction K; defaults to the Lebesgue projection")
    p.set_defaults(func=cmd_decompose_pair)

    p = sub.add_parser("complement", help="range spaces of X and Y = I - X")
    p.add_argument("--x", "-x", required=True, help="nonnegative contraction X")
    p.set_defaults(func=cmd_complement)

    p = sub.add_parser("verify", help="run the randomized property suites")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--max-dim", type=_positive_int, default=8)
    p.add_argument("--property", action="append", help="only run properties with this key prefix")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        tol = tolerances_from_env()
        return args.func(args, tol, out)
    except UsageError as exc:
        err.write(f"relkit: {exc}\n")
        return EXIT_PARSE
    except DimensionMismatch as exc:
        err.write(f"relkit: dimension mismatch: {exc}\n")
        return EXIT_DIMENSION
    except InvalidContraction as exc:
        err.write(f"relkit: not a nonnegative contraction: {exc}\n")
        return EXIT_CONTRACTION
    except InvalidInput as exc:
        err.write(f"relkit: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
