"""Text formats: ``.hsm`` matrices, ``.sg`` signed graphs, threshold expressions and records.

``.hsm``: line 1 is ``n``, then ``n`` lines of ``n`` integers.
``.sg``: line 1 is ``n m``, then ``m`` lines ``u v s`` with 1-based
``u < v`` and ``s`` one of ``+1 -1 1 + -`` (a Unicode minus is accepted).
Blank lines and ``#`` comments are ignored in both.

Records are JSON objects, one per line; matrix indices inside records
are 1-based like the file formats.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .blowup import BlowupDecomposition
from .errors import HollowSpecError, ParseError, PerfectSquare, ThresholdParseError
from .exactnum import (
    IntPolynomial,
    SpectralThreshold,
    lambda_prime,
    lambda_star,
    threshold_from_isolation,
    threshold_from_rational,
    threshold_sqrt,
)
from .matrixcore import HollowSymMatrix, MembershipStatus, MembershipVerdict
from .search import Certificate, FrontierResult, Section, SuiteReport, Verdict
from .signedgraph import SignedGraph

_SIGNS = {"+1": 1, "1": 1, "+": 1, "-1": -1, "-": -1, "−1": -1, "−": -1}


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _int(tok: str, source: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what}: {tok!r} is not an integer", source, line) from None


def parse_hsm(text: str, source: str = "<hsm>") -> HollowSymMatrix:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty matrix file", source, 1)
    lineno, toks = lines[0]
    if len(toks) != 1:
        raise ParseError("first line must hold the order n", source, lineno)
    n = _int(toks[0], source, lineno, "order")
    if n < 1:
        raise ParseError(f"order must be positive, got {n}", source, lineno)
    body = lines[1:]
    if len(body) != n:
        last = body[-1][0] if body else lineno
        raise ParseError(f"expected {n} matrix rows, found {len(body)}", source, last)
    rows = []
    for i, (lineno, toks) in enumerate(body):
        if len(toks) != n:
            raise ParseError(f"row {i + 1} has {len(toks)} entries, expected {n}", source, lineno)
        row = [_int(t, source, lineno, f"row {i + 1}") for t in toks]
        if row[i] != 0:
            raise ParseError(f"diagonal entry ({i + 1}, {i + 1}) is {row[i]}, not 0", source, lineno)
        for j in range(i):
            if rows[j][i] != row[j]:
                raise ParseError(
                    f"entry ({i + 1}, {j + 1}) = {row[j]} differs from ({j + 1}, {i + 1}) = {rows[j][i]}",
                    source,
                    lineno,
                )
        rows.append(row)
    return HollowSymMatrix(tuple(map(tuple, rows)))


def format_hsm(A: HollowSymMatrix) -> str:
    return f"{A.order}\n{A}\n"


def parse_sg(text: str, source: str = "<sg>") -> SignedGraph:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty graph file", source, 1)
    lineno, toks = lines[0]
    if len(toks) != 2:
        raise ParseError('first line must be "n m"', source, lineno)
    n = _int(toks[0], source, lineno, "vertex count")
    m = _int(toks[1], source, lineno, "edge count")
    if n < 1 or m < 0:
        raise ParseError(f"bad header n={n} m={m}", source, lineno)
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else lineno
        raise ParseError(f"expected {m} edge lines, found {len(body)}", source, last)
    edges = []
    seen = set()
    for lineno, toks in body:
        if len(toks) != 3:
            raise ParseError('edge lines are "u v s"', source, lineno)
        u = _int(toks[0], source, lineno, "vertex")
        v = _int(toks[1], source, lineno, "vertex")
        if not 1 <= u < v <= n:
            raise ParseError(f"need 1 <= u < v <= {n}, got u={u} v={v}", source, lineno)
        if toks[2] not in _SIGNS:
            raise ParseError(f"sign must be +1 or -1, got {toks[2]!r}", source, lineno)
        if (u, v) in seen:
            raise ParseError(f"repeated edge {u} {v}", source, lineno)
        seen.add((u, v))
        edges.append((u - 1, v - 1, _SIGNS[toks[2]]))
    return SignedGraph(n, frozenset(edges))


def format_sg(F: SignedGraph) -> str:
    lines = [f"{F.order} {len(F.edges)}"]
    lines += [f"{u + 1} {v + 1} {'+1' if s > 0 else '-1'}" for u, v, s in F.sorted_edges()]
    return "\n".join(lines) + "\n"


def load_subject(path: str | Path) -> HollowSymMatrix | SignedGraph:
    """Read a ``.hsm`` or ``.sg`` file, chosen by extension."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", str(path)) from None
    except UnicodeDecodeError:
        raise ParseError("file is not UTF-8 text", str(path)) from None
    if path.suffix == ".sg":
        return parse_sg(text, str(path))
    if path.suffix == ".hsm":
        return parse_hsm(text, str(path))
    raise ParseError("unknown extension, expected .hsm or .sg", str(path))


# thresholds

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def parse_threshold(expr: str) -> SpectralThreshold:
    """``INT``, ``INT/INT``, ``sqrt:INT``, ``star`` or ``prime``.

    ``sqrt:`` of a perfect square gives the rational threshold.
    """
    e = expr.strip()
    try:
        if e == "star":
            return lambda_star()
        if e == "prime":
            return lambda_prime()
        if e.startswith("sqrt:"):
            arg = e[5:]
            if not re.fullmatch(r"\d+", arg):
                raise ThresholdParseError(f"sqrt: needs a non-negative integer, got {arg!r}")
            try:
                return threshold_sqrt(int(arg))
            except PerfectSquare as exc:
                return threshold_from_rational(exc.root)
        if _RATIONAL.fullmatch(e):
            q = Fraction(e)
            return threshold_from_rational(q)
    except ThresholdParseError:
        raise
    except (HollowSpecError, ZeroDivisionError) as exc:
        raise ThresholdParseError(f"invalid threshold {expr!r}: {exc}") from None
    raise ThresholdParseError(f"cannot parse threshold {expr!r}; use INT, INT/INT, sqrt:INT, star or prime")


def threshold_record(t: SpectralThreshold) -> dict[str, Any]:
    return {
        "minpoly": str(t.minpoly),
        "coefficients": list(t.minpoly.coeffs),
        "interval": [str(t.isolation.lo), str(t.isolation.hi)],
        "approx": t.display,
    }


def threshold_from_record(rec: dict[str, Any]) -> SpectralThreshold:
    lo, hi = rec["interval"]
    return threshold_from_isolation(IntPolynomial(tuple(rec["coefficients"])), Fraction(lo), Fraction(hi))


# certificates

def _subject_record(subject: HollowSymMatrix | SignedGraph) -> dict[str, Any]:
    if isinstance(subject, SignedGraph):
        return {"kind": "graph", "order": subject.order,
                "edges": [[u + 1, v + 1, s] for u, v, s in subject.sorted_edges()]}
    return {"kind": "matrix", "rows": subject.to_lists()}


def _subject_from_record(rec: dict[str, Any]) -> HollowSymMatrix | SignedGraph:
    if rec["kind"] == "graph":
        return SignedGraph(rec["order"], frozenset((u - 1, v - 1, s) for u, v, s in rec["edges"]))
    if rec["kind"] == "matrix":
        return HollowSymMatrix(tuple(map(tuple, rec["rows"])))
    raise ValueError(f"unknown subject kind {rec['kind']!r}")


def certificate_record(cert: Certificate) -> dict[str, Any]:
    return {
        "type": "certificate",
        "subject": _subject_record(cert.subject),
        "threshold": threshold_record(cert.threshold),
        "verdict": cert.verdict.value,
        "subject_status": cert.subject_status.value,
        "evidence": [[i + 1, s.value] for i, s in cert.evidence],
    }


def certificate_from_record(rec: dict[str, Any]) -> Certificate:
    return Certificate(
        _subject_from_record(rec["subject"]),
        threshold_from_record(rec["threshold"]),
        Verdict(rec["verdict"]),
        MembershipStatus(rec["subject_status"]),
        tuple((i - 1, MembershipStatus(s)) for i, s in rec["evidence"]),
    )


def read_certificates(text: str, source: str = "<records>") -> list[Certificate]:
    """Certificates from a records stream; non-certificate records are skipped.

    Certificates nested in frontier records are included.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
            if rec.get("type") == "certificate":
                out.append(certificate_from_record(rec))
            elif rec.get("type") == "frontier":
                out.extend(certificate_from_record(c) for c in rec["certificates"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"bad record: {exc}", source, lineno) from None
    return out


def dumps(rec: dict[str, Any]) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


# other records

def verdict_record(v: MembershipVerdict, lam: SpectralThreshold) -> dict[str, Any]:
    return {
        "type": "membership",
        "threshold": threshold_record(lam),
        "status": v.status.value,
        "witness": None if v.witness is None else [i + 1 for i in v.witness],
    }


def multiplicity_string(mult: tuple[int, ...]) -> str:
    return " ".join(f"{u + 1}:{k}" for u, k in enumerate(mult))


def switching_string(D: tuple[int, ...]) -> str:
    return "".join("+" if d > 0 else "-" for d in D)


def decomposition_record(dec: BlowupDecomposition) -> dict[str, Any]:
    return {
        "type": "decomposition",
        "graph": format_sg(dec.graph),
        "multiplicities": multiplicity_string(dec.mult),
        "switching": switching_string(dec.switching),
        "index_map": [[u + 1, c] for u, c in dec.index_map],
    }


def frontier_record(res: FrontierResult) -> dict[str, Any]:
    return {
        "type": "frontier",
        "graph": format_sg(res.graph),
        "threshold": threshold_record(res.threshold),
        "cap": res.cap,
        "closed": res.closed,
        "reason": res.reason,
        "explored": res.explored,
        "minimal_bad": [list(a) for a in res.minimal_bad],
        "max_certified_order": res.max_certified_order,
        "certificates": [certificate_record(c) for c in res.certificates],
    }


def suite_record(rep: SuiteReport) -> list[dict[str, Any]]:
    recs = [{"type": "section", "name": s.name, "passed": s.passed, "detail": s.detail} for s in rep.sections]
    recs.append({"type": "summary", "passed": rep.passed})
    return recs


# text

def _subject_text(subject: HollowSymMatrix | SignedGraph) -> str:
    if isinstance(subject, SignedGraph):
        return "graph\n" + format_sg(subject).rstrip("\n")
    return "matrix\n" + format_hsm(subject).rstrip("\n")


def threshold_text(t: SpectralThreshold) -> str:
    return f"{t.display} (root of {t.minpoly} in {t.isolation})"


def verdict_text(v: MembershipVerdict) -> str:
    if v.witness is None:
        return v.status.value
    return f"{v.status.value}\nwitness: {' '.join(str(i + 1) for i in v.witness)}"


def certificate_text(cert: Certificate) -> str:
    lines = [
        f"verdict: {cert.verdict.value}",
        f"threshold: {threshold_text(cert.threshold)}",
        f"subject status: {cert.subject_status.value}",
        f"subject: {_subject_text(cert.subject)}",
    ]
    for i, s in cert.evidence:
        lines.append(f"delete {i + 1}: {s.value}")
    return "\n".join(lines)


def decomposition_text(dec: BlowupDecomposition) -> str:
    return "\n".join([
        "graph:",
        format_sg(dec.graph).rstrip("\n"),
        f"multiplicities: {multiplicity_string(dec.mult)}",
        f"switching: {switching_string(dec.switching)}",
        "index map: " + " ".join(f"{i + 1}->{u + 1}.{c}" for i, (u, c) in enumerate(dec.index_map)),
    ])


def frontier_text(res: FrontierResult) -> str:
    lines = [
        f"threshold: {threshold_text(res.threshold)}",
        f"cap: {res.cap}",
        f"closed: {'yes' if res.closed else 'no'} ({res.reason})",
        f"explored: {res.explored}",
        f"minimal bad vectors: {len(res.minimal_bad)}",
    ]
    for a, c in zip(res.minimal_bad, res.certificates):
        lines.append(f"  {multiplicity_string(a)}  order {sum(a)}  {c.verdict.value}")
    lines.append(f"largest certified order: {res.max_certified_order}")
    return "\n".join(lines)


def section_text(s: Section) -> str:
    return f"[{'PASS' if s.passed else 'FAIL'}] {s.name}: {s.detail}"


def suite_text(rep: SuiteReport) -> str:
    lines = [section_text(s) for s in rep.sections]
    lines.append("all sections passed" if rep.passed else "some sections FAILED")
    return "\n".join(lines)
