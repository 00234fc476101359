"""JSON manifests for domain objects and audit documents.

Canonical form: sorted keys, two-space indent, trailing newline, every scalar
as a string ("3", "-1/2") in lowest terms, structure constants as sorted
``[i, j, k, value]`` rows, matrices dense and row-major.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import BiHomJordanSuperalgebra, BiHomPreJordanSuperalgebra
from .errors import BiHomError, InvariantViolation, ManifestError, ParseError, UnresolvedReference
from .gradecore import Audit, GradedMap, Report, SuperProduct, SuperSpace, direct_sum_space, qarray
from .operators import OOperator
from .representation import Bimodule, Representation

KINDS = ("algebra", "pre_jordan", "bimodule", "representation", "o_operator")
VIOLATION_CAP = 100


# --------------------------------------------------------------------------
# scalars


def fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_scalar(raw, where: str) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise ParseError(f"{where}: scalars must be integers or 'p/q' strings, got {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if not isinstance(raw, str):
        raise ParseError(f"{where}: cannot read scalar {raw!r}")
    text = raw.strip()
    try:
        if "/" in text:
            num_s, den_s = text.split("/")
            num, den = int(num_s), int(den_s)
        else:
            num, den = int(text), 1
    except ValueError as exc:
        raise ParseError(f"{where}: malformed scalar {raw!r}") from exc
    if den <= 0:
        raise InvariantViolation(f"{where}: denominator of {raw!r} must be positive")
    q = Fraction(num, den)
    if q.numerator != num or q.denominator != den:
        raise InvariantViolation(f"{where}: {raw!r} is not in lowest terms")
    return q


# --------------------------------------------------------------------------
# encoding


def space_doc(V: SuperSpace) -> dict:
    if V.blocks:
        return {"blocks": [space_doc(b) for b in V.blocks]}
    return {"even_dim": V.even_dim, "odd_dim": V.odd_dim}


def matrix_doc(m: np.ndarray) -> list:
    return [[fmt(v) for v in row] for row in m]


def constants_doc(P: SuperProduct) -> list:
    return [[i, j, k, fmt(v)] for (i, j, k), v in sorted(P.table().items())]


def encode(obj, name: str | None = None, refs: dict | None = None) -> dict:
    """Manifest dict for a domain object.  ``refs`` maps referenced objects to names."""
    refs = refs or {}
    name = name or getattr(obj, "name", "") or "unnamed"

    def ref(target, default):
        for key, val in refs.items():
            if val is target:
                return key
        return getattr(target, "name", "") or default

    if isinstance(obj, BiHomJordanSuperalgebra):
        return {
            "kind": "algebra",
            "name": name,
            "space": space_doc(obj.space),
            "constants": constants_doc(obj.product),
            "alpha": matrix_doc(obj.alpha.matrix),
            "beta": matrix_doc(obj.beta.matrix),
        }
    if isinstance(obj, BiHomPreJordanSuperalgebra):
        return {
            "kind": "pre_jordan",
            "name": name,
            "space": space_doc(obj.space),
            "constants": constants_doc(obj.circ),
            "alpha": matrix_doc(obj.alpha.matrix),
            "beta": matrix_doc(obj.beta.matrix),
        }
    if isinstance(obj, Representation):
        return {
            "kind": "representation",
            "name": name,
            "algebra": ref(obj.algebra, "algebra"),
            "space": space_doc(obj.space),
            "rho": [matrix_doc(m) for m in obj.rho],
            "alphaV": matrix_doc(obj.alphaV.matrix),
            "betaV": matrix_doc(obj.betaV.matrix),
        }
    if isinstance(obj, Bimodule):
        return {
            "kind": "bimodule",
            "name": name,
            "algebra": ref(obj.algebra, "algebra"),
            "space": space_doc(obj.space),
            "left": [matrix_doc(m) for m in obj.left],
            "right": [matrix_doc(m) for m in obj.right],
            "alphaV": matrix_doc(obj.alphaV.matrix),
            "betaV": matrix_doc(obj.betaV.matrix),
        }
    if isinstance(obj, OOperator):
        return {
            "kind": "o_operator",
            "name": name,
            "representation": ref(obj.rep, "representation"),
            "parity": obj.parity,
            "T": matrix_doc(obj.T.matrix),
        }
    raise TypeError(f"cannot encode {type(obj).__name__}")


def canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def bundle(objects: list[tuple[str, object]]) -> dict:
    """A file holding several named objects; dependencies should precede dependents."""
    refs = {name: obj for name, obj in objects}
    return {"manifests": [encode(obj, name, refs) for name, obj in objects]}


def with_dependencies(obj, name: str) -> list[tuple[str, object]]:
    """Objects needed to reload ``obj`` on its own, dependencies first, uniquely named."""
    chain: list[tuple[str, object]] = []
    used: set[str] = set()

    def unique(base: str) -> str:
        cand, k = base, 2
        while cand in used:
            cand, k = f"{base}-{k}", k + 1
        used.add(cand)
        return cand

    deps = []
    cur = obj
    while True:
        deps.append(cur)
        if isinstance(cur, OOperator):
            cur = cur.rep
        elif isinstance(cur, (Representation, Bimodule)):
            cur = cur.algebra
        else:
            break
    defaults = {
        BiHomJordanSuperalgebra: "algebra",
        BiHomPreJordanSuperalgebra: "pre-jordan",
        Representation: "representation",
        Bimodule: "bimodule",
        OOperator: "operator",
    }
    for dep in reversed(deps):
        base = name if dep is obj else (getattr(dep, "name", "") or defaults[type(dep)])
        chain.append((unique(base), dep))
    return chain


def save(path, objects: list[tuple[str, object]]) -> str:
    doc = bundle(objects)
    if len(doc["manifests"]) == 1:
        doc = doc["manifests"][0]
    text = canonical(doc)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def digest(doc) -> str:
    return hashlib.sha256(canonical(doc).encode("utf-8")).hexdigest()


# --------------------------------------------------------------------------
# decoding


def _get(doc: dict, key: str, where: str):
    if key not in doc:
        raise ParseError(f"{where}: missing field '{key}'")
    return doc[key]


def decode_space(raw, where: str) -> SuperSpace:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: space must be an object")
    if "blocks" in raw:
        return direct_sum_space(*(decode_space(b, f"{where}.blocks[{i}]") for i, b in enumerate(raw["blocks"])))
    e, o = _get(raw, "even_dim", where), _get(raw, "odd_dim", where)
    if not (isinstance(e, int) and isinstance(o, int)) or e < 0 or o < 0:
        raise InvariantViolation(f"{where}: dimensions must be nonnegative integers")
    return SuperSpace(e, o)


def decode_matrix(raw, rows: int, cols: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != rows or any(not isinstance(r, list) or len(r) != cols for r in raw):
        raise InvariantViolation(f"{where}: expected a {rows}x{cols} matrix")
    return qarray([[parse_scalar(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(raw)], (rows, cols))


def decode_family(raw, n: int, m: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != n:
        raise InvariantViolation(f"{where}: expected {n} matrices")
    if n == 0:
        return qarray([], (0, m, m))
    return qarray(np.stack([decode_matrix(r, m, m, f"{where}[{i}]") for i, r in enumerate(raw)]), (n, m, m))


def decode_constants(raw, V: SuperSpace, where: str) -> SuperProduct:
    if not isinstance(raw, list):
        raise ParseError(f"{where}: constants must be a list")
    consts = {}
    for idx, row in enumerate(raw):
        loc = f"{where}[{idx}]"
        if not isinstance(row, list) or len(row) != 4 or not all(isinstance(v, int) and not isinstance(v, bool) for v in row[:3]):
            raise ParseError(f"{loc}: expected [i, j, k, value]")
        key = tuple(row[:3])
        if key in consts:
            raise InvariantViolation(f"{loc}: duplicate constant {key}")
        consts[key] = parse_scalar(row[3], loc)
    return SuperProduct.on(V, consts)


def _twist(doc, key, V: SuperSpace, where: str) -> GradedMap:
    if key not in doc:
        return GradedMap.identity(V)
    return GradedMap(V, V, 0, decode_matrix(doc[key], V.dim, V.dim, f"{where}.{key}"))


def _build(doc: dict, where: str, resolved: dict):
    kind = doc["kind"]
    name = doc["name"]

    def lookup(key: str, want):
        target = _get(doc, key, where)
        if target not in resolved:
            raise UnresolvedReference(f"{where}: '{key}' refers to unknown manifest '{target}'")
        obj = resolved[target]
        if not isinstance(obj, want):
            raise UnresolvedReference(f"{where}: '{target}' is not a {want.__name__}")
        return obj

    if kind in ("algebra", "pre_jordan"):
        V = decode_space(_get(doc, "space", where), f"{where}.space")
        P = decode_constants(_get(doc, "constants", where), V, f"{where}.constants")
        a, b = _twist(doc, "alpha", V, where), _twist(doc, "beta", V, where)
        cls = BiHomJordanSuperalgebra if kind == "algebra" else BiHomPreJordanSuperalgebra
        return cls(P, a, b, name)
    if kind in ("representation", "bimodule"):
        J = lookup("algebra", BiHomJordanSuperalgebra)
        V = decode_space(_get(doc, "space", where), f"{where}.space")
        aV, bV = _twist(doc, "alphaV", V, where), _twist(doc, "betaV", V, where)
        if kind == "representation":
            rho = decode_family(_get(doc, "rho", where), J.dim, V.dim, f"{where}.rho")
            return Representation(J, V, rho, aV, bV, name)
        left = decode_family(_get(doc, "left", where), J.dim, V.dim, f"{where}.left")
        right = decode_family(_get(doc, "right", where), J.dim, V.dim, f"{where}.right")
        return Bimodule(J, V, left, right, aV, bV, name)
    rep = lookup("representation", Representation)
    parity = _get(doc, "parity", where)
    if parity not in (0, 1):
        raise InvariantViolation(f"{where}: parity must be 0 or 1")
    T = decode_matrix(_get(doc, "T", where), rep.algebra.dim, rep.space.dim, f"{where}.T")
    return OOperator(rep, GradedMap(rep.space, rep.algebra.space, parity, T))


def read_documents(paths) -> list[tuple[str, dict]]:
    """(location, manifest dict) pairs in file order."""
    out = []
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"{path}: {exc.strerror}") from exc
        try:
            data = json.loads(text, parse_float=lambda s: float(s))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        docs = data["manifests"] if isinstance(data, dict) and "manifests" in data else [data]
        if not isinstance(docs, list):
            raise ParseError(f"{path}: 'manifests' must be a list")
        for i, doc in enumerate(docs):
            where = f"{path}#{i}"
            if not isinstance(doc, dict):
                raise ParseError(f"{where}: manifest must be an object")
            kind = _get(doc, "kind", where)
            if kind not in KINDS:
                raise ParseError(f"{where}: unknown kind {kind!r}")
            name = _get(doc, "name", where)
            if not isinstance(name, str) or not name:
                raise ParseError(f"{where}: name must be a nonempty string")
            out.append((f"{where} ({name})", doc))
    return out


def load_manifests(paths) -> dict:
    """Resolve every manifest in ``paths`` into validated domain objects, keyed by name."""
    names: dict = {}
    docs = []
    for where, doc in read_documents(paths):
        seen = names.get(doc["name"])
        if seen is not None:
            # the same object shipped alongside several dependents is harmless
            if canonical(seen) == canonical(doc):
                continue
            raise ManifestError(f"{where}: duplicate manifest name '{doc['name']}'")
        names[doc["name"]] = doc
        docs.append((where, doc))
    resolved: dict = {}
    order = {"algebra": 0, "pre_jordan": 0, "representation": 1, "bimodule": 1, "o_operator": 2}
    for where, doc in sorted(docs, key=lambda wd: order[wd[1]["kind"]]):
        try:
            resolved[doc["name"]] = _build(doc, where, resolved)
        except ManifestError:
            raise
        except BiHomError as exc:
            raise InvariantViolation(f"{where}: {exc}") from exc
    # keep file order for callers that pick "the last one"
    return {doc["name"]: resolved[doc["name"]] for _, doc in docs}


# --------------------------------------------------------------------------
# audit documents


def report_doc(r: Report, advisory: bool = False, cap: int = VIOLATION_CAP) -> dict:
    return {
        "identity": r.identity_name,
        "passed": r.passed,
        "advisory": advisory,
        "violation_count": len(r.violations),
        "truncated": len(r.violations) > cap,
        "violations": [{"tuple": list(t), "residual": [fmt(v) for v in vec]} for t, vec in r.violations[:cap]],
    }


def audit_document(audits: list[Audit], inputs: list[dict] | None = None, extra: dict | None = None) -> dict:
    checks = []
    for a in audits:
        for r in a.reports:
            checks.append({"subject": a.subject, **report_doc(r)})
        for r in a.advisory:
            checks.append({"subject": a.subject, **report_doc(r, advisory=True)})
    doc = {
        "tool_version": __version__,
        "inputs": [{"name": d["name"], "kind": d["kind"], "sha256": digest(d)} for d in (inputs or [])],
        "checks": checks,
        "passed": all(a.passed for a in audits),
    }
    if extra:
        doc["extra"] = extra
    return doc


def render_text(doc: dict) -> str:
    lines = [f"bihom {doc['tool_version']}"]
    for inp in doc["inputs"]:
        lines.append(f"input {inp['kind']} {inp['name']} sha256:{inp['sha256'][:16]}")
    for c in doc["checks"]:
        tag = "PASS" if c["passed"] else "FAIL"
        if c["advisory"]:
            tag = f"{tag} (advisory)"
        lines.append(f"{tag} {c['subject']}: {c['identity']} [{c['violation_count']} violation(s)]")
        for v in c["violations"][:10]:
            lines.append(f"    at {tuple(v['tuple'])}: ({', '.join(v['residual'])})")
        if c["violation_count"] > 10:
            lines.append(f"    ... {c['violation_count'] - 10} more")
    if "extra" in doc:
        lines.append("extra: " + json.dumps(doc["extra"], sort_keys=True))
    lines.append("overall: " + ("PASS" if doc["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"
