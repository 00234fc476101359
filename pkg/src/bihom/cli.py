"""Command-line front end: ``bihom <subcommand> --input FILE ...``.

Checks print (or write with --output) an audit document and exit 0 only when
every non-advisory check passes.  Constructions write a manifest bundle for
the result (with whatever it references) and exit 0.  Library errors map to
the ``exit_code`` of their class.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import algebra as alg
from . import manifest as mf
from . import operators as ops
from . import representation as rp
from .errors import BiHomError, ManifestError, UnresolvedReference
from .gradecore import Audit, GradedMap, qarray, qzeros, suspend_space

CHECKS_FAILED = 1


class Context:
    def __init__(self, args):
        self.args = args
        self.objects = mf.load_manifests(args.input)
        self.docs = {doc["name"]: doc for _, doc in mf.read_documents(args.input)}

    def pick(self, *types, name: str | None = None):
        """The named object, else the last loaded object of one of ``types``."""
        name = name or self.args.subject
        if name:
            if name not in self.objects:
                raise UnresolvedReference(f"no manifest named '{name}'")
            obj = self.objects[name]
            if not isinstance(obj, types):
                raise ManifestError(f"'{name}' has the wrong kind for this subcommand")
            return name, obj
        found = [(n, o) for n, o in self.objects.items() if isinstance(o, types)]
        if not found:
            kinds = ", ".join(t.__name__ for t in types)
            raise UnresolvedReference(f"inputs contain no {kinds}")
        return found[-1]

    def pick_all(self, *types):
        return [(n, o) for n, o in self.objects.items() if isinstance(o, types)]

    def input_docs(self, names):
        return [self.docs[n] for n in names if n in self.docs]


# --------------------------------------------------------------------------
# output helpers


def emit_audit(ctx: Context, audits, names, extra=None) -> int:
    doc = mf.audit_document(audits, ctx.input_docs(names), extra)
    text = mf.canonical(doc) if ctx.args.report == "machine" else mf.render_text(doc)
    write(ctx.args.output, text)
    return 0 if doc["passed"] else CHECKS_FAILED


def emit_objects(ctx: Context, objects) -> int:
    text = mf.save(None, objects)
    write(ctx.args.output, text)
    return 0


def emit_construction(ctx: Context, obj, default_name: str) -> int:
    name = ctx.args.name or getattr(obj, "name", "") or default_name
    return emit_objects(ctx, mf.with_dependencies(obj, name))


def write(path, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def parse_matrix(raw: str, rows: int, cols: int, where: str):
    """JSON row-major matrix, or comma-separated diagonal entries."""
    raw = raw.strip()
    if raw.startswith("["):
        return mf.decode_matrix(json.loads(raw), rows, cols, where)
    entries = [mf.parse_scalar(v, where) for v in raw.split(",")]
    if len(entries) != rows or rows != cols:
        raise ManifestError(f"{where}: expected {rows} diagonal entries")
    m = qzeros((rows, cols))
    for i, v in enumerate(entries):
        m[i, i] = v
    return qarray(m)


# --------------------------------------------------------------------------
# subcommands


def cmd_check_algebra(ctx):
    name, J = ctx.pick(alg.BiHomJordanSuperalgebra)
    return emit_audit(ctx, [alg.verify_algebra(J)], [name])


def cmd_check_bimodule(ctx):
    name, B = ctx.pick(rp.Bimodule)
    return emit_audit(ctx, [rp.verify_bimodule(B)], [B.algebra.name, name])


def cmd_check_rep(ctx):
    name, R = ctx.pick(rp.Representation)
    return emit_audit(ctx, [rp.verify_representation(R)], [R.algebra.name, name])


def cmd_check_pre_jordan(ctx):
    name, P = ctx.pick(alg.BiHomPreJordanSuperalgebra)
    return emit_audit(ctx, [alg.verify_pre_jordan(P)], [name])


def cmd_check_oop(ctx):
    name, op = ctx.pick(ops.OOperator)
    extra = {"sign_crosscheck": ops.o_operator_sign_crosscheck(op.rep, op.T)}
    return emit_audit(ctx, [ops.verify_o_operator(op.rep, op.T)], [op.algebra.name, op.rep.name, name], extra)


def cmd_check_rb(ctx):
    name, op = ctx.pick(ops.OOperator)
    J = op.algebra
    R = GradedMap(J.space, J.space, op.parity, op.T.matrix)
    report = ops.verify_rota_baxter(J, R)
    extra = {"crosscheck": ops.rota_baxter_crosscheck(J, R)}
    return emit_audit(ctx, [Audit("rota-baxter", (report,))], [J.name, op.rep.name, name], extra)


def cmd_twist(ctx):
    _, J0 = ctx.pick(alg.BiHomJordanSuperalgebra)
    n = J0.dim
    a = GradedMap(J0.space, J0.space, 0, parse_matrix(ctx.args.a, n, n, "--a"))
    b = GradedMap(J0.space, J0.space, 0, parse_matrix(ctx.args.b, n, n, "--b"))
    out = alg.yau_twist(J0, a, b, name=f"{J0.name}-twisted")
    return emit_construction(ctx, out, "twisted")


def cmd_untwist(ctx):
    _, J = ctx.pick(alg.BiHomJordanSuperalgebra)
    out, audit = alg.untwist(J, ctx.args.s, ctx.args.t)
    emit_construction(ctx, out, "untwisted")
    sys.stderr.write(mf.render_text(mf.audit_document([audit])))
    return 0 if audit.passed else CHECKS_FAILED


def cmd_semidirect(ctx):
    _, obj = ctx.pick(rp.Bimodule, rp.Representation)
    B = rp.rep_to_bimodule(obj) if isinstance(obj, rp.Representation) else obj
    return emit_construction(ctx, rp.semidirect_product(B), "semidirect")


def cmd_direct_sum(ctx):
    reps = ctx.pick_all(rp.Representation)
    if len(reps) < 2:
        raise UnresolvedReference("direct-sum needs two representations")
    (_, R1), (_, R2) = reps[-2:]
    return emit_construction(ctx, rp.direct_sum_rep(R1, R2), "direct-sum")


def cmd_dual_rep(ctx):
    _, R = ctx.pick(rp.Representation)
    return emit_construction(ctx, rp.dual_rep(R), "dual")


def cmd_coadjoint(ctx):
    _, J = ctx.pick(alg.BiHomJordanSuperalgebra)
    return emit_construction(ctx, rp.coadjoint_rep(J), "coadjoint")


def cmd_coadjoint_semidirect(ctx):
    _, J = ctx.pick(alg.BiHomJordanSuperalgebra)
    return emit_construction(ctx, rp.coadjoint_semidirect(J), "coadjoint-semidirect")


def cmd_reverse_rep(ctx):
    _, R = ctx.pick(rp.Representation)
    return emit_construction(ctx, rp.parity_reverse_rep(R), "reversed")


def _phi(ctx, R1, R2):
    raw = ctx.args.phi or "swap"
    if raw == "swap":
        return rp.block_swap(R1)
    if raw == "suspension-swap":
        return rp.suspension_swap(R1)
    if raw == "s":
        return suspend_space(R1.space)[1]
    m = mf.decode_matrix(json.loads(raw), R2.space.dim, R1.space.dim, "--phi")
    degree = ctx.args.parity or 0
    return GradedMap(R1.space, R2.space, degree, m)


def cmd_check_isom(ctx):
    reps = ctx.pick_all(rp.Representation)
    if ctx.args.self_reversing or len(reps) == 1:
        name, R = ctx.pick(rp.Representation)
        Phi = _phi(ctx, R, rp.parity_reverse_rep(R))
        return emit_audit(ctx, [rp.check_self_reversing(R, Phi)], [R.algebra.name, name])
    (n1, R1), (n2, R2) = reps[-2:]
    Phi = _phi(ctx, R1, R2)
    return emit_audit(ctx, [rp.check_rep_isomorphism(R1, R2, Phi)], [R1.algebra.name, n1, n2])


def cmd_pre_to_jordan(ctx):
    _, P = ctx.pick(alg.BiHomPreJordanSuperalgebra)
    return emit_construction(ctx, alg.pre_to_jordan(P), "associated")


def cmd_induce(ctx):
    _, op = ctx.pick(ops.OOperator)
    return emit_construction(ctx, ops.induce_pre_jordan(op), "induced")


def cmd_oop_suspend(ctx):
    name, op = ctx.pick(ops.OOperator)
    return emit_construction(ctx, ops.o_op_suspend(op), f"{name}-s")


def cmd_oop_extend(ctx):
    name, op = ctx.pick(ops.OOperator)
    return emit_construction(ctx, ops.o_op_extend(op), f"{name}-ext")


def cmd_oop_via_isom(ctx):
    name, op = ctx.pick(ops.OOperator)
    Phi = _phi(ctx, op.rep, rp.parity_reverse_rep(op.rep))
    return emit_construction(ctx, ops.o_op_via_isomorphism(op, Phi), f"{name}-hat")


def cmd_search_oop(ctx):
    name, R = ctx.pick(rp.Representation)
    coeffs = [mf.parse_scalar(c, "--coeffs") for c in ctx.args.coeffs.split(",")]
    parity = ctx.args.parity or 0
    found = ops.search_o_operators(R, parity, coeffs, budget=ctx.args.budget, jobs=ctx.args.jobs)
    objects = mf.with_dependencies(R, name)
    objects += [(f"{name}-T{parity}-{i}", op) for i, op in enumerate(found)]
    return emit_objects(ctx, objects)


COMMANDS = {
    "check-algebra": cmd_check_algebra,
    "check-bimodule": cmd_check_bimodule,
    "check-rep": cmd_check_rep,
    "check-pre-jordan": cmd_check_pre_jordan,
    "check-oop": cmd_check_oop,
    "check-rb": cmd_check_rb,
    "twist": cmd_twist,
    "untwist": cmd_untwist,
    "semidirect": cmd_semidirect,
    "direct-sum": cmd_direct_sum,
    "dual-rep": cmd_dual_rep,
    "coadjoint": cmd_coadjoint,
    "coadjoint-semidirect": cmd_coadjoint_semidirect,
    "reverse-rep": cmd_reverse_rep,
    "check-isom": cmd_check_isom,
    "pre-to-jordan": cmd_pre_to_jordan,
    "induce": cmd_induce,
    "oop-suspend": cmd_oop_suspend,
    "oop-extend": cmd_oop_extend,
    "oop-via-isom": cmd_oop_via_isom,
    "search-oop": cmd_search_oop,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bihom", description="Exact checks and constructions for BiHom-Jordan superalgebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--input", action="append", required=True, help="manifest file (repeatable)")
        p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--report", choices=("text", "machine"), default="text")
        p.add_argument("--subject", help="name of the manifest to act on (default: last suitable one)")
        p.add_argument("--name", help="name given to a constructed result")
        if cmd == "untwist":
            p.add_argument("--s", type=int, default=0)
            p.add_argument("--t", type=int, default=0)
        if cmd == "twist":
            p.add_argument("--a", required=True, help="matrix as JSON rows or comma-separated diagonal")
            p.add_argument("--b", required=True)
        if cmd in ("check-isom", "oop-via-isom"):
            p.add_argument("--phi", help="'swap', 'suspension-swap', 's', or a JSON matrix")
        if cmd == "check-isom":
            p.add_argument("--self-reversing", action="store_true")
        if cmd in ("search-oop", "check-isom"):
            p.add_argument("--parity", type=int, choices=(0, 1))
        if cmd == "search-oop":
            p.add_argument("--coeffs", default="-1,0,1")
            p.add_argument("--budget", type=int, default=3**12)
            p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args)
        return COMMANDS[args.command](ctx)
    except BiHomError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
