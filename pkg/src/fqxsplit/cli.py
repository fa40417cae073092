"""Command-line frontend.

Commands: gen (instance with ground truth), split (full pipeline), maxorder
(either ring), reduce (lattice file), verify (independent re-check of an
isomorphism file).  All randomness flows through --seed; outputs are
byte-identical for identical inputs and seeds.

Exit codes: 0 success, 2 not split, 3 invalid input, 4 promise violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import algebra as algmod
from . import ff, lattice, linalg, order as ordermod, polyrat, split as splitmod
from .errors import (
    DegenerateSeed,
    FqxsplitError,
    NotSplit,
    PromiseViolation,
    ValidationError,
)
from .polyrat import Poly, RatFunc


def _dump(obj, path):
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def gen_instance(p: int, e: int, n: int, max_deg: int, seed: int):
    """Structure constants of a seeded conjugate of M_n plus the ground truth.

    Samples Q over F_q[x] with entry degrees <= max_deg until invertible
    (at most 100 attempts) and rewrites the matrix-unit constants in the
    basis f_k = sum_l Q[l][k] E_l.
    """
    field = ff.make_field(p, e)
    rnd = random.Random(seed)
    m = n * n
    E = algmod.matrix_units_algebra(field, n)
    for _attempt in range(100):
        q_mat = [
            [
                RatFunc(Poly(field, [rnd.randrange(field.q) for _ in range(max_deg + 1)]))
                for _ in range(m)
            ]
            for _ in range(m)
        ]
        if linalg.determinant(q_mat):
            break
    else:
        raise DegenerateSeed("no invertible change of basis after 100 samples")
    q_inv = linalg.inverse(q_mat)
    gamma = []
    for i in range(m):
        block = []
        fi = [q_mat[l][i] for l in range(m)]
        for j in range(m):
            fj = [q_mat[l][j] for l in range(m)]
            block.append(linalg.mat_vec(q_inv, E.mul_coords(fi, fj)))
        gamma.append(block)
    A = algmod.StructureAlgebra(field, gamma)
    truth = {
        "p": p,
        "e": e,
        "n": n,
        "max_deg": max_deg,
        "seed": seed,
        "Q": [[polyrat.ratfunc_to_json(q_mat[i][j]) for j in range(m)] for i in range(m)],
    }
    if e > 1:
        truth["modulus"] = list(field.modulus)
    return A, truth


def _cmd_gen(args) -> int:
    A, truth = gen_instance(args.p, args.e, args.n, args.max_deg, args.seed)
    _dump(A.to_json(), args.output)
    truth_path = args.truth
    if truth_path is None:
        stem = args.output[:-5] if args.output.endswith(".json") else args.output
        truth_path = stem + ".truth.json"
    _dump(truth, truth_path)
    return 0


def _cmd_split(args) -> int:
    A = algmod.algebra_from_json(_load(args.input), check_associativity=args.check_associativity)
    result = splitmod.split_pipeline(A, seed=args.seed)
    _dump(splitmod.isomorphism_to_json(result), args.output)
    return 0


def _cmd_maxorder(args) -> int:
    A = algmod.algebra_from_json(_load(args.input), check_associativity=args.check_associativity)
    if args.ring == "fx":
        order = ordermod.maximal_order_fqx(A, seed=args.seed)
    else:
        order = ordermod.maximal_order_infinity(A, seed=args.seed)
    _dump(ordermod.order_to_json(order), args.output)
    return 0


def _cmd_reduce(args) -> int:
    field = ff.make_field(args.p, args.e)
    data = _load(args.input)
    basis = lattice.lattice_from_json(field, data)
    reduced, cert = lattice.reduce_basis(basis)
    out = lattice.lattice_to_json(reduced)
    out["od_before"] = cert.od_before
    out["od_after"] = cert.od_after
    _dump(out, args.output)
    return 0


def _cmd_verify(args) -> int:
    A = algmod.algebra_from_json(_load(args.instance))
    n, idem, images, left = splitmod.isomorphism_from_json(A.field, _load(args.isomorphism))
    if n != A.n:
        raise ValidationError(f"file claims n = {n}, algebra has n = {A.n}")
    if len(images) != A.m or len(idem) != A.m:
        raise ValidationError("wrong number of coordinates in isomorphism file")
    e = A.elem(idem)
    if (e * e).coords != e.coords:
        raise ValidationError("claimed idempotent does not square to itself")
    if A.rank(e) != 1:
        raise ValidationError("claimed idempotent does not have rank 1")
    if len(left) != n:
        raise ValidationError("left ideal basis has wrong size")
    if linalg.rank([list(v) for v in left]) != n:
        raise ValidationError("left ideal basis is dependent")
    splitmod._verify_homomorphism(A, images)
    print("verified")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fqxsplit",
        description="explicit isomorphisms of structure-constant algebras with M_n(F_q(x))",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance with ground truth")
    g.add_argument("-p", type=int, required=True, help="prime characteristic")
    g.add_argument("-e", type=int, default=1, help="field extension degree")
    g.add_argument("-n", type=int, required=True, help="matrix size")
    g.add_argument("--max-deg", type=int, default=1, help="degree bound for the change of basis")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", default="instance.json")
    g.add_argument("--truth", default=None, help="ground-truth output path")
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("split", help="run the full pipeline on an instance file")
    s.add_argument("input")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--check-associativity", action="store_true")
    s.add_argument("-o", "--output", default="isomorphism.json")
    s.set_defaults(func=_cmd_split)

    mo = sub.add_parser("maxorder", help="compute a maximal order")
    mo.add_argument("input")
    mo.add_argument("--ring", choices=["fx", "infty"], required=True)
    mo.add_argument("--seed", type=int, default=0)
    mo.add_argument("--check-associativity", action="store_true")
    mo.add_argument("-o", "--output", default="order.json")
    mo.set_defaults(func=_cmd_maxorder)

    r = sub.add_parser("reduce", help="reduce a lattice basis file")
    r.add_argument("input")
    r.add_argument("-p", type=int, required=True, help="prime characteristic")
    r.add_argument("-e", type=int, default=1, help="field extension degree")
    r.add_argument("-o", "--output", default="reduced.json")
    r.set_defaults(func=_cmd_reduce)

    v = sub.add_parser("verify", help="independently re-check an isomorphism file")
    v.add_argument("instance")
    v.add_argument("isomorphism")
    v.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotSplit as exc:
        print(f"not split: {exc}", file=sys.stderr)
        return 2
    except PromiseViolation as exc:
        print(f"promise violation: {exc}", file=sys.stderr)
        return 4
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 3
    except FqxsplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
