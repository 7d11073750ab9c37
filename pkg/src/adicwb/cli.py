"""Scenario-driven batch runner.

A scenario is a line-oriented text file (``#`` starts a comment)::

    ring R = QQ[x, y]
    context a = R (x, y)
    diagonal D = R
    module M over R = cyclic(y - x^2)
    module P over R = [
      x, y
      0, x
    ]
    complex T over R = torsion(a, M, 2)
    ind Q over Z = rationals
    check thm32 a M bound=4
    check serre D M N expect=2

Matrices list one row per line (entries separated by commas); rows index
generators and columns index relations.  ``run`` executes every check and
writes one JSON report whose bytes depend only on the scenario and bound.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import adic, theorems
from .adic import AdicContext, DiagonalContext
from .modcplx import Complex, FpModule, ModuleMap, free_resolution
from .rings import GF, QQ, ZZ, Matrix, PolyRing, QuotientRing, RingError, parse_element
from .towers import (
    DEFAULT_BOUND,
    FAILED,
    INCONCLUSIVE,
    VERIFIED,
    IndModule,
    ProModule,
    StabilizationReport,
    TowerMap,
    pro_iso_check,
)

EXIT_OK, EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_IO, EXIT_SCENARIO = 0, 1, 2, 3, 4
DEMOS = ("mgm", "serre", "cofinite", "wpr")


class ScenarioError(ValueError):
    """Malformed scenario; carries the 1-based line and column."""

    def __init__(self, msg: str, line: int = 0, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)
        self.line, self.col = line, col


# ------------------------------------------------------------------ syntax


@dataclass(frozen=True)
class Decl:
    """One declaration.  ``body`` is canonical text, so equal declarations
    compare equal regardless of the spacing used in the source."""

    kind: str  # ring, context, diagonal, module, complex, ind
    name: str
    ring: Optional[str]
    body: Any
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Check:
    kind: str
    args: Tuple[str, ...]
    options: Tuple[Tuple[str, str], ...]
    line: int = field(default=0, compare=False)

    def option(self, key: str, default=None):
        return dict(self.options).get(key, default)


@dataclass(frozen=True)
class Scenario:
    decls: Tuple[Decl, ...]
    checks: Tuple[Check, ...]

    def decl(self, name: str) -> Decl:
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)


# check kind -> (argument kinds, accepted options, description)
CHECKS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...], str]] = {
    "wpr": (("context",), ("bound",), "weak pro-regularity of the context's sequence"),
    "psi": (("context", "module"), ("bound", "n"), "completion of M against Koszul-stage completion"),
    "telkos": (("context", "object"), ("bound",), "telescope stages against Koszul stages, tensored with M"),
    "lemma31": (("context", "object"), ("bound",), "torsion of a free complex against torsion of its reductions"),
    "thm32": (("context", "object"), ("bound",), "torsion of the completion against torsion"),
    "thm33": (("context", "object"), ("bound",), "completion of the torsion against completion"),
    "mgm_tor": (("context", "object"), ("bound",), "round trip through torsion, with counit when certified"),
    "mgm_com": (("context", "object"), ("bound",), "round trip through completion, with unit when certified"),
    "thm41_torsion": (("diagonal", "module", "module"), ("bound",), "torsion of M ⊠ N restricted to the diagonal"),
    "thm41_fg": (("diagonal", "module", "module"), ("bound",), "Tor over A against Koszul homology of the diagonal"),
    "thm41_completed": (("diagonal", "module", "module"), ("bound",), "completion towers of the diagonal comparison"),
    "serre": (("diagonal", "module", "module"), ("bound", "expect"), "intersection multiplicity by both routes"),
    "thm51": (("context", "cofinite"), ("bound",), "finite generation of Ext against completion towers"),
    "zeromap": (("context", "module"), ("bound",), "the zero self-map of a completion tower (a false comparison)"),
}

_DECL = re.compile(r"^(ring|context|diagonal|module|complex|ind)\s+([A-Za-z_][A-Za-z_0-9]*)"
                   r"(?:\s+over\s+([A-Za-z_][A-Za-z_0-9]*))?\s*=\s*(.*)$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
_CALL = re.compile(r"^([a-z_]+)\s*(?:\((.*)\))?$")


def split_args(text: str) -> List[str]:
    """Split on commas outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last or out:
        out.append(last)
    return out


def parse_ring(text: str):
    """``ZZ``, ``QQ``, ``GF(p)``, ``QQ[x, y]``, ``GF(p)[x]``, ``BASE / (r1, ...)``."""
    text = text.strip()
    m = re.match(r"^(.*?)\s*/\s*\((.*)\)$", text)
    if m:
        base = parse_ring(m.group(1))
        rels = [parse_element(base, r) for r in split_args(m.group(2))]
        return QuotientRing(base, tuple(rels))
    m = re.match(r"^(QQ|GF\(\s*\d+\s*\))\s*\[(.*)\]$", text)
    if m:
        names = tuple(v.strip() for v in m.group(2).split(","))
        if not all(_NAME.match(v) for v in names):
            raise RingError(f"bad variable list {m.group(2)!r}")
        return PolyRing(parse_ring(m.group(1)), names)
    if text == "ZZ":
        return ZZ
    if text == "QQ":
        return QQ
    m = re.match(r"^GF\(\s*(\d+)\s*\)$", text)
    if m:
        return GF(int(m.group(1)))
    raise RingError(f"unknown ring {text!r}")


def _canon(R, text: str) -> str:
    return R.fmt(parse_element(R, text))


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.decls: List[Decl] = []
        self.checks: List[Check] = []
        self.rings: Dict[str, Any] = {}
        self.kinds: Dict[str, Decl] = {}

    def error(self, msg, lineno, line="", token=None):
        col = line.find(token) + 1 if token and token in line else 1
        raise ScenarioError(msg, lineno, col)

    def ref(self, name, kinds, lineno, line):
        d = self.kinds.get(name)
        if d is None:
            self.error(f"undeclared identifier {name!r}", lineno, line, name)
        if d.kind not in kinds:
            self.error(f"{name!r} is a {d.kind}, expected {' or '.join(kinds)}", lineno, line, name)
        return d

    def ring_of(self, d: Decl) -> str:
        return d.name if d.kind in ("ring",) else d.ring

    def parse(self) -> Scenario:
        i = 0
        while i < len(self.lines):
            raw = self.lines[i]
            line = raw.split("#", 1)[0].rstrip()
            lineno = i + 1
            i += 1
            if not line.strip():
                continue
            if line.lstrip().startswith("check"):
                self.checks.append(self.parse_check(line.strip(), lineno, raw))
                continue
            m = _DECL.match(line.strip())
            if not m:
                self.error("expected a declaration or a check", lineno, raw)
            kind, name, over, body = m.groups()
            if name in self.kinds:
                self.error(f"{name!r} declared twice", lineno, raw, name)
            if body.strip() == "[":
                rows = []
                while True:
                    if i >= len(self.lines):
                        self.error("unterminated matrix", lineno, raw)
                    r = self.lines[i].split("#", 1)[0].strip()
                    i += 1
                    if r == "]":
                        break
                    if r:
                        rows.append((r, i))
                body = rows
            decl = self.parse_decl(kind, name, over, body, lineno, raw)
            self.decls.append(decl)
            self.kinds[name] = decl
        return Scenario(tuple(self.decls), tuple(self.checks))

    def parse_decl(self, kind, name, over, body, lineno, raw) -> Decl:
        try:
            if kind == "ring":
                if over:
                    self.error("rings are not declared over anything", lineno, raw, "over")
                R = parse_ring(body)
                self.rings[name] = R
                return Decl(kind, name, None, str(R), lineno)
            if kind in ("context", "diagonal"):
                if over:
                    self.error(f"{kind} takes the ring after '='", lineno, raw, "over")
                m = re.match(r"^([A-Za-z_][A-Za-z_0-9]*)\s*(?:\((.*)\))?$", body.strip())
                if not m:
                    self.error(f"malformed {kind}", lineno, raw)
                rname = self.ref(m.group(1), ("ring",), lineno, raw).name
                R = self.rings[rname]
                if kind == "diagonal":
                    if m.group(2) is not None:
                        self.error("a diagonal takes only a polynomial ring", lineno, raw, "(")
                    if not isinstance(R, PolyRing):
                        self.error("a diagonal needs a polynomial ring", lineno, raw, m.group(1))
                    return Decl(kind, name, rname, "", lineno)
                if m.group(2) is None:
                    self.error("a context lists its generators in parentheses", lineno, raw)
                gens = tuple(_canon(R, g) for g in split_args(m.group(2)))
                if not gens:
                    self.error("a context needs at least one generator", lineno, raw)
                return Decl(kind, name, rname, gens, lineno)
            if not over:
                self.error(f"a {kind} is declared 'over' a ring", lineno, raw, name)
            rname = self.ref(over, ("ring",), lineno, raw).name
            R = self.rings[rname]
            if kind == "module":
                return Decl(kind, name, rname, self.module_body(R, body, lineno, raw), lineno)
            if kind == "complex":
                return Decl(kind, name, rname, self.complex_body(rname, body, lineno, raw), lineno)
            return Decl(kind, name, rname, self.ind_body(R, rname, body, lineno, raw), lineno)
        except RingError as e:
            self.error(str(e), lineno, raw)

    def module_body(self, R, body, lineno, raw):
        if isinstance(body, list):
            rows = []
            for text, ln in body:
                rows.append(tuple(_canon(R, e) for e in split_args(text)))
            for (_, ln), r in zip(body, rows):
                if len(r) != len(rows[0]):
                    self.error(f"row has {len(r)} entries, expected {len(rows[0])}",
                               ln, self.lines[ln - 1])
            return ("matrix", tuple(rows))
        m = _CALL.match(body.strip())
        if not m:
            self.error("malformed module", lineno, raw)
        fn, args = m.group(1), m.group(2)
        if fn == "zero" and args is None:
            return ("zero",)
        if fn == "free" and args is not None and args.strip().isdigit():
            return ("free", int(args))
        if fn == "cyclic" and args is not None:
            return ("cyclic", tuple(_canon(R, g) for g in split_args(args)))
        self.error(f"unknown module constructor {body.strip()!r}", lineno, raw)

    def complex_body(self, rname, body, lineno, raw):
        m = _CALL.match(body.strip())
        if not m or m.group(2) is None:
            self.error("malformed complex", lineno, raw)
        fn, args = m.group(1), split_args(m.group(2))
        if fn in ("torsion", "completion"):
            if len(args) != 3 or not args[2].isdigit() or int(args[2]) < 1:
                self.error(f"{fn}(context, module, level) expected", lineno, raw)
            c = self.ref(args[0], ("context",), lineno, raw)
            mod = self.ref(args[1], ("module", "complex"), lineno, raw)
            self.same_ring(rname, [c, mod], lineno, raw)
            return (fn, args[0], args[1], int(args[2]))
        if fn == "resolution":
            if len(args) != 1:
                self.error("resolution(module) expected", lineno, raw)
            self.same_ring(rname, [self.ref(args[0], ("module",), lineno, raw)], lineno, raw)
            return (fn, args[0])
        self.error(f"unknown complex constructor {fn!r}", lineno, raw, fn)

    def ind_body(self, R, rname, body, lineno, raw):
        m = _CALL.match(body.strip())
        if not m:
            self.error("malformed ind-module", lineno, raw)
        fn, args = m.group(1), m.group(2)
        if fn == "rationals" and args is None:
            return ("rationals",)
        if fn in ("prufer", "sums") and args is not None:
            return (fn, _canon(R, args))
        if fn == "constant" and args is not None:
            self.same_ring(rname, [self.ref(args.strip(), ("module",), lineno, raw)], lineno, raw)
            return (fn, args.strip())
        self.error(f"unknown ind-module constructor {body.strip()!r}", lineno, raw)

    def same_ring(self, rname, decls, lineno, raw):
        for d in decls:
            if self.ring_of(d) != rname:
                self.error(f"{d.name!r} lives over {self.ring_of(d)}, expected {rname}",
                           lineno, raw, d.name)

    def parse_check(self, line, lineno, raw) -> Check:
        words = line.split()
        if len(words) < 2:
            self.error("check needs a kind", lineno, raw)
        kind = words[1]
        if kind not in CHECKS:
            self.error(f"unknown check {kind!r}", lineno, raw, kind)
        argkinds, optnames, _ = CHECKS[kind]
        args = [w for w in words[2:] if "=" not in w]
        opts = [w.split("=", 1) for w in words[2:] if "=" in w]
        if len(args) != len(argkinds):
            self.error(f"check {kind} takes {len(argkinds)} arguments, got {len(args)}", lineno, raw)
        allowed = {"context": ("context",), "diagonal": ("diagonal",), "module": ("module",),
                   "object": ("module", "complex"), "cofinite": ("module", "ind")}
        decls = [self.ref(a, allowed[k], lineno, raw) for a, k in zip(args, argkinds)]
        self.same_ring(self.ring_of(decls[0]), decls[1:], lineno, raw)
        for k, v in opts:
            if k not in optnames:
                self.error(f"check {kind} has no option {k!r}", lineno, raw, k)
            if not re.match(r"^-?\d+$", v):
                self.error(f"option {k} needs an integer", lineno, raw, v)
            if k in ("bound", "n") and int(v) < 2:
                self.error(f"option {k} must be at least 2", lineno, raw, v)
        return Check(kind, tuple(args), tuple(sorted((k, str(int(v))) for k, v in opts)), lineno)


def parse_scenario(text: str) -> Scenario:
    return _Parser(text).parse()


def format_scenario(sc: Scenario) -> str:
    """Canonical text; ``parse_scenario(format_scenario(s)) == s``."""
    out = []
    for d in sc.decls:
        if d.kind == "ring":
            out.append(f"ring {d.name} = {d.body}")
        elif d.kind == "context":
            out.append(f"context {d.name} = {d.ring} ({', '.join(d.body)})")
        elif d.kind == "diagonal":
            out.append(f"diagonal {d.name} = {d.ring}")
        elif d.kind == "module":
            head = f"module {d.name} over {d.ring} = "
            tag = d.body[0]
            if tag == "matrix":
                out.append(head + "[")
                out.extend("  " + ", ".join(r) for r in d.body[1])
                out.append("]")
            elif tag == "zero":
                out.append(head + "zero")
            elif tag == "free":
                out.append(head + f"free({d.body[1]})")
            else:
                out.append(head + f"cyclic({', '.join(d.body[1])})")
        elif d.kind == "complex":
            args = ", ".join(str(a) for a in d.body[1:])
            out.append(f"complex {d.name} over {d.ring} = {d.body[0]}({args})")
        else:
            tag = d.body[0]
            rhs = tag if len(d.body) == 1 else f"{tag}({d.body[1]})"
            out.append(f"ind {d.name} over {d.ring} = {rhs}")
    for c in sc.checks:
        opts = "".join(f" {k}={v}" for k, v in c.options)
        out.append(f"check {c.kind} {' '.join(c.args)}{opts}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------- objects


def format_module(M: FpModule, name: str = "W", ring: str = "R") -> str:
    """A module as a scenario declaration, ready to paste back in."""
    R = M.ring
    head = f"module {name} over {ring} = "
    if M.ngens == 0:
        return head + "zero"
    if M.relations.ncols == 0:
        return head + f"free({M.ngens})"
    rows = ["  " + ", ".join(R.fmt(M.relations.rows[r][c]) for c in range(M.relations.ncols))
            for r in range(M.ngens)]
    return "\n".join([head + "["] + rows + ["]"])


class Environment:
    """Lazily built objects for the declarations of one scenario."""

    def __init__(self, sc: Scenario):
        self.sc = sc
        self.objs: Dict[str, Any] = {}

    def __getitem__(self, name: str):
        if name not in self.objs:
            self.objs[name] = self.build(self.sc.decl(name))
        return self.objs[name]

    def build(self, d: Decl):
        if d.kind == "ring":
            return parse_ring(d.body)
        R = self[d.ring]
        if d.kind == "context":
            return AdicContext(R, tuple(parse_element(R, g) for g in d.body))
        if d.kind == "diagonal":
            return DiagonalContext(R)
        tag = d.body[0]
        if d.kind == "module":
            if tag == "zero":
                return FpModule.zero(R)
            if tag == "free":
                return FpModule.free(R, d.body[1])
            if tag == "cyclic":
                return FpModule.cyclic(R, [parse_element(R, g) for g in d.body[1]])
            rows = d.body[1]
            m = Matrix.from_rows(R, [[parse_element(R, e) for e in r] for r in rows],
                                 len(rows[0]) if rows else 0)
            return FpModule.from_matrix(m)
        if d.kind == "complex":
            if tag == "resolution":
                return free_resolution(self[d.body[1]]).complex
            ctx, M, level = self[d.body[1]], self[d.body[2]], d.body[3]
            tower = adic.derived_torsion if tag == "torsion" else adic.derived_completion
            return tower(M, ctx).level(level)
        if tag == "rationals":
            return adic.rationals_ind(R)
        if tag == "prufer":
            return adic.prufer_ind(R, parse_element(R, d.body[1]))
        if tag == "sums":
            return adic.sum_copies_ind(R, parse_element(R, d.body[1]))
        return IndModule.constant(self[d.body[1]])


def _report_instance(kind: str, inst: theorems.TheoremInstance) -> Dict[str, Any]:
    return {"theorem": inst.theorem, "status": inst.verdict.status, "level": inst.verdict.level,
            "detail": inst.verdict.detail, "witness": inst.verdict.witness,
            "trace": list(inst.trace)}


def _zero_map(ctx: AdicContext, M: FpModule, bound: int) -> theorems.TheoremInstance:
    tw = adic.completion_tower(M, ctx)
    f = TowerMap(tw, tw, lambda n: ModuleMap.zero(tw.level(n), tw.level(n)))
    r = pro_iso_check(f, bound)
    return theorems.TheoremInstance("ZERO", {"M": M.fmt()}, bound, r,
                                    [f"zero self-map of the completion tower: {r.status}"])


def _single(theorem: str, r: StabilizationReport, trace: List[str]) -> theorems.TheoremInstance:
    return theorems.TheoremInstance(theorem, {}, 0, r, trace)


def execute(env: Environment, check: Check, bound: int) -> theorems.TheoremInstance:
    a = [env[x] for x in check.args]
    k = check.kind
    if k == "wpr":
        r = adic.wpr_check(a[0], bound)
        return _single("WPR", r, [f"wpr: {r.status} ({r.detail})"])
    if k == "psi":
        r = adic.psi_comparison(a[1], a[0], int(check.option("n", 3)))
        return _single("PSI", r, [f"psi: {r.status} ({r.detail})"])
    if k == "telkos":
        parts = {f"stage {j}": adic.telescope_koszul_check(a[0], j, a[1]) for j in range(1, bound + 1)}
        return _single("TELKOS", theorems.combine(parts),
                       [f"{key}: {r.status}" for key, r in parts.items()])
    if k == "lemma31":
        return theorems.check_lemma31(a[0], a[1], bound)
    if k == "thm32":
        return theorems.check_thm32(a[0], a[1], bound)
    if k == "thm33":
        return theorems.check_thm33(a[0], a[1], bound)
    if k in ("mgm_tor", "mgm_com"):
        return theorems.check_mgm(a[0], a[1], bound, k[4:])
    if k == "thm41_torsion":
        return theorems.check_thm41_torsion(a[0], a[1], a[2], bound)
    if k == "thm41_fg":
        return theorems.check_thm41_fg(a[0], a[1], a[2], bound)
    if k == "thm41_completed":
        return theorems.check_thm41_completed(a[0], a[1], a[2], bound)
    if k == "serre":
        chi = theorems.serre_chi(a[0], a[1], a[2])
        expect = check.option("expect")
        if expect is not None and int(expect) != chi:
            r = StabilizationReport(FAILED, None, None, f"chi = {chi}, expected {expect}")
        else:
            r = StabilizationReport(VERIFIED, 1, None, f"chi = {chi} by both routes")
        return theorems.TheoremInstance("SERRE", {}, bound, r, [r.detail], {"chi": chi})
    if k == "thm51":
        return theorems.check_thm51(a[0], a[1], bound)
    return _zero_map(a[0], a[1], bound)


def _witness_summary(w, ring_name: str):
    if w is None:
        return None
    if isinstance(w, FpModule):
        return format_module(w, "W", ring_name)
    if isinstance(w, dict):
        return {str(k): _witness_summary(v, ring_name) for k, v in sorted(w.items(), key=lambda kv: str(kv[0]))}
    return str(w)


def _digest(sc: Scenario, check: Check) -> str:
    """Hash of the check line plus every declaration it depends on."""
    need, todo = set(), list(check.args)
    while todo:
        n = todo.pop()
        if n in need:
            continue
        need.add(n)
        d = sc.decl(n)
        if d.ring:
            todo.append(d.ring)
        if d.kind in ("complex", "ind"):
            todo.extend(x for x in d.body[1:] if isinstance(x, str) and x in {e.name for e in sc.decls})
    sub = Scenario(tuple(d for d in sc.decls if d.name in need), (check,))
    return hashlib.sha256(format_scenario(sub).encode()).hexdigest()[:16]


def run_check(sc: Scenario, index: int, bound_override: Optional[int] = None,
              env: Optional[Environment] = None) -> Tuple[Dict[str, Any], float]:
    """One report record (JSON-ready) and its wall time."""
    check = sc.checks[index]
    bound = bound_override or int(check.option("bound", DEFAULT_BOUND))
    env = env or Environment(sc)
    ring_name = sc.decl(check.args[0]).ring or check.args[0]
    t = time.perf_counter()
    try:
        inst = execute(env, check, bound)
        rec = _report_instance(check.kind, inst)
        if inst.details:
            rec["details"] = json.loads(json.dumps(inst.details, default=str))
    except (theorems.PreconditionError, theorems.SerreMismatch, RingError) as e:
        rec = {"theorem": None, "status": FAILED, "level": None,
               "detail": f"{type(e).__name__}: {e}", "witness": None, "trace": []}
    rec["witness"] = _witness_summary(rec["witness"], ring_name)
    rec.update({"index": index, "check": check.kind, "args": list(check.args),
                "options": dict(check.options), "bound": bound, "digest": _digest(sc, check)})
    return rec, time.perf_counter() - t


def _worker(text: str, index: int, bound: Optional[int]):
    return run_check(parse_scenario(text), index, bound)


def run(sc: Scenario, bound: Optional[int] = None, jobs: int = 1,
        log=None) -> Tuple[Dict[str, Any], int]:
    """Execute every check; returns the report and the exit code."""
    n = len(sc.checks)
    if jobs > 1 and n > 1:
        text = format_scenario(sc)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(_worker, text, i, bound) for i in range(n)]
            results = [f.result() for f in futs]
    else:
        env = Environment(sc)
        results = [run_check(sc, i, bound, env) for i in range(n)]
    records = []
    for rec, secs in results:
        records.append(rec)
        if log is not None:
            print(f"[{rec['index']}] {rec['check']} {' '.join(rec['args'])}: {rec['status']} "
                  f"({secs:.2f}s)", file=log)
    counts = {s: sum(1 for r in records if r["status"] == s)
              for s in (VERIFIED, FAILED, INCONCLUSIVE)}
    summary = {"total": n, "passed": counts[VERIFIED], "failed": counts[FAILED],
               "inconclusive": counts[INCONCLUSIVE]}
    code = EXIT_FAILED if counts[FAILED] else EXIT_INCONCLUSIVE if counts[INCONCLUSIVE] else EXIT_OK
    return {"checks": records, "summary": summary}, code


def dump_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def demo_text(name: str) -> str:
    if name not in DEMOS:
        raise ValueError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    return resources.files("adicwb").joinpath("scenarios", f"{name}.scn").read_text("utf-8")


# --------------------------------------------------------------------- main


def _execute_text(text: str, args) -> int:
    try:
        sc = parse_scenario(text)
    except ScenarioError as e:
        print(f"scenario error: {e}", file=sys.stderr)
        return EXIT_SCENARIO
    report, code = run(sc, args.bound, args.jobs, log=sys.stderr)
    out = dump_report(report)
    try:
        if args.report:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    except OSError as e:
        print(f"cannot write report: {e}", file=sys.stderr)
        return EXIT_IO
    s = report["summary"]
    print(f"{s['passed']} verified, {s['failed']} failed, {s['inconclusive']} inconclusive",
          file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adicwb", description="Run adic completion/torsion checks.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def run_opts(q):
        q.add_argument("--bound", type=int, default=None, help="override every check's bound")
        q.add_argument("--jobs", type=int, default=1, help="worker processes")
        q.add_argument("--report", default=None, help="write the JSON report here")

    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("file")
    run_opts(r)
    d = sub.add_parser("demo", help="run a shipped scenario")
    d.add_argument("name", choices=DEMOS)
    run_opts(d)
    sub.add_parser("list-checks", help="list check kinds")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "list-checks":
        for kind, (argk, opts, desc) in CHECKS.items():
            print(f"{kind:16s} {' '.join(argk):28s} [{', '.join(opts)}]  {desc}")
        return EXIT_OK
    if getattr(args, "bound", None) is not None and args.bound < 2:
        print("--bound must be at least 2", file=sys.stderr)
        return EXIT_SCENARIO
    if getattr(args, "jobs", 1) < 1:
        print("--jobs must be at least 1", file=sys.stderr)
        return EXIT_SCENARIO
    if args.cmd == "demo":
        return _execute_text(demo_text(args.name), args)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"cannot read scenario: {e}", file=sys.stderr)
        return EXIT_IO
    return _execute_text(text, args)
