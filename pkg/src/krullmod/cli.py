"""``krullmod`` command line: problem files in, versioned YAML reports out.

Problem file grammar, one directive per line, ``#`` starts a comment::

    field Q                      # or F7, F3[u]/(u^2), F3xF3
    vars 2 a b                   # count, then optional display names
    ideal: x1*x2 - 1; x1^2       # ';'-separated, may repeat, may be empty
    module rank 2                # instead of ideal:
    rel: x1, -x2                 # one relation row per line
    sample: x1 + 1, x2           # optional elements for the KDC checks

Exit codes: 0 ok, 1 input error, 2 a checked statement failed, 3 resource limit.
"""

from __future__ import annotations

import argparse
import logging
import random
import re
import sys
from dataclasses import dataclass, field

import yaml

from .autom import monicize
from .coeff import CoeffRing, DualNumbers, ProductField, parse_ring
from .config import limits
from .errors import KrullModError, ParseError, ResourceLimit
from .gb import FreeElem
from .krull import (HUNT_SEED, DimReport, catalog, check_fg_dim_equality, check_fixed_coordinate_profile,
                    check_kdc, check_torsion_dimension_drop, dim_descent, hunt_profile_mismatches,
                    random_sample)
from .modpres import ModulePresentation, is_torsion_module
from .nilrad import (check_artinian_profile, is_zero_module, n_dimension, n_torsion_profile, nil_data,
                     reduced_view)
from .poly import MINUS_INFINITY, Poly, parse_order, parse_poly

FORMAT = 1
EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_LIMIT = 0, 1, 2, 3

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


# -- problem files ---------------------------------------------------------------

@dataclass
class Problem:
    ring: CoeffRing
    nvars: int
    names: list[str]
    presentation: ModulePresentation
    sample: list[FreeElem] = field(default_factory=list)
    source: str = "<input>"


class _Reader:
    """Line-aware parsing state; positions in errors are 1-based columns."""

    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.ring: CoeffRing | None = None
        self.nvars: int | None = None
        self.names: list[str] = []
        self.ideal: list[Poly] | None = None
        self.rank: int | None = None
        self.rels: list[FreeElem] = []
        self.sample: list[tuple[int, int, str]] = []

    def fail(self, msg, line, col=None):
        raise ParseError(f"{self.source}: {msg}", col, line)

    def _translate(self, text: str) -> str:
        """Rewrite display names to ``x<i>`` keeping string length stable enough for columns."""
        if not self.names or self.names == [f"x{i + 1}" for i in range(self.nvars)]:
            return text
        index = {nm: i + 1 for i, nm in enumerate(self.names)}
        return _IDENT.sub(lambda mt: f"x{index[mt.group()]}" if mt.group() in index else mt.group(), text)

    def poly(self, text: str, line: int, col: int) -> Poly:
        try:
            return parse_poly(self._translate(text), self.ring, self.nvars)
        except ParseError as exc:
            self.fail(exc.message, line, col + (exc.pos or 0))

    def row(self, text: str, line: int, col: int, what: str) -> FreeElem:
        comps, offset = [], col
        for part in text.split(","):
            lead = len(part) - len(part.lstrip())
            if not part.strip():
                self.fail(f"empty entry in {what} row", line, offset)
            comps.append(self.poly(part.strip(), line, offset + lead))
            offset += len(part) + 1
        return FreeElem(comps)

    def need_header(self, line, col):
        if self.ring is None or self.nvars is None:
            self.fail("'field' and 'vars' must come first", line, col)

    def parse(self) -> Problem:
        for ln, raw in enumerate(self.text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            if not body.strip():
                continue
            col = len(body) - len(body.lstrip())
            stripped = body.strip()
            head, _, rest = stripped.partition(" ")
            if ":" in head:
                head, _, tail = stripped.partition(":")
                head, rest = head.strip(), tail
            key = head.lower()
            rest_col = col + len(stripped) - len(rest.lstrip()) if rest.strip() else col + len(stripped)
            rest = rest.strip()
            if key in ("field", "ring"):
                try:
                    self.ring = parse_ring(rest)
                except ParseError as exc:
                    self.fail(exc.message, ln, rest_col)
            elif key == "vars":
                parts = rest.split()
                if not parts or not parts[0].isdigit():
                    self.fail("'vars' needs a variable count", ln, rest_col)
                n = int(parts[0])
                if not 1 <= n <= 16:
                    self.fail("variable count must be in 1..16", ln, rest_col)
                names = parts[1:] or [f"x{i + 1}" for i in range(n)]
                if len(names) != n or len(set(names)) != n:
                    self.fail(f"'vars {n}' needs {n} distinct names", ln, rest_col)
                for nm in names:
                    if not _IDENT.fullmatch(nm) or nm == "u":
                        self.fail(f"bad variable name {nm!r}", ln, rest_col)
                self.nvars, self.names = n, names
            elif key == "ideal":
                self.need_header(ln, col)
                if self.rank is not None:
                    self.fail("a file has either 'ideal:' or 'module rank'", ln, col)
                self.ideal = self.ideal or []
                offset = rest_col
                for part in rest.split(";"):
                    lead = len(part) - len(part.lstrip())
                    if part.strip():
                        self.ideal.append(self.poly(part.strip(), ln, offset + lead))
                    offset += len(part) + 1
            elif key == "module":
                self.need_header(ln, col)
                mt = re.fullmatch(r"rank\s+(\d+)", rest)
                if mt is None or int(mt.group(1)) < 1:
                    self.fail("expected 'module rank <k>' with k >= 1", ln, rest_col)
                if self.ideal is not None or self.rank is not None:
                    self.fail("a file has either 'ideal:' or one 'module rank'", ln, col)
                self.rank = int(mt.group(1))
            elif key == "rel":
                if self.rank is None:
                    self.fail("'rel:' needs a preceding 'module rank'", ln, col)
                r = self.row(rest, ln, rest_col, "relation")
                if r.rank != self.rank:
                    self.fail(f"relation has {r.rank} entries, rank is {self.rank}", ln, rest_col)
                self.rels.append(r)
            elif key == "sample":
                self.need_header(ln, col)
                self.sample.append((ln, rest_col, rest))
            else:
                self.fail(f"unknown directive {head!r}", ln, col)
        if self.ring is None or self.nvars is None:
            self.fail("missing 'field' or 'vars' line", None)
        if self.rank is None:
            P = ModulePresentation.cyclic(self.ideal or [], self.ring, self.nvars)
        else:
            P = ModulePresentation(self.ring, self.nvars, self.rank, self.rels)
        sample = []
        for ln, c, text in self.sample:
            y = self.row(text, ln, c, "sample")
            if y.rank != P.rank:
                self.fail(f"sample has {y.rank} entries, rank is {P.rank}", ln, c)
            sample.append(y)
        return Problem(self.ring, self.nvars, self.names, P, sample, self.source)


def parse_problem(text: str, source: str = "<input>") -> Problem:
    return _Reader(text, source).parse()


def read_problem(path: str) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return parse_problem(text, path)


# -- reports ---------------------------------------------------------------------

def _dim(v):
    return "-inf" if v == MINUS_INFINITY else v


def _emit(doc: dict, out) -> None:
    out.write(yaml.safe_dump({"format": FORMAT, **doc}, sort_keys=False, allow_unicode=True, width=10**6))


def _problem_doc(pb: Problem) -> dict:
    doc = pb.presentation.to_dict()
    if pb.names != [f"x{i + 1}" for i in range(pb.nvars)]:
        doc["names"] = {f"x{i + 1}": nm for i, nm in enumerate(pb.names)}
    return doc


def _profile_doc(P: ModulePresentation) -> dict:
    rep = check_fixed_coordinate_profile(P)
    return {**rep.profile.to_dict(), "dim": rep.dim, "match": rep.match, "summary": rep.summary()}


def _artinian(P: ModulePresentation) -> bool:
    return isinstance(P.ring, (DualNumbers, ProductField))


def _reduced_pieces(P: ModulePresentation) -> list[ModulePresentation]:
    """Field-case presentations carrying the support of an artinian-coefficient module."""
    return reduced_view(P)


def _artinian_dim_doc(P: ModulePresentation, args) -> tuple[dict, bool]:
    red, lift = n_dimension(P, "reduce"), n_dimension(P, "lift")
    doc = {"nilradical": nil_data(P.ring).describe(), "dim": _dim(red),
           "dim_reduced": _dim(red), "dim_lift": _dim(lift), "agree": red == lift}
    pieces = [] if red == MINUS_INFINITY else _reduced_pieces(P)
    reps = [dim_descent(Q, strategy=args.strategy, strict=False, order=args.oracle_order) for Q in pieces]
    doc["reduced"] = [{"ring": Q.ring.descriptor(), **r.to_dict()} for Q, r in zip(pieces, reps)]
    return doc, red == lift and all(r.agree for r in reps)


def cmd_dim(args, out) -> int:
    pb = read_problem(args.file)
    P = pb.presentation
    if _artinian(P):
        doc, ok = _artinian_dim_doc(P, args)
        _emit({"command": "dim", "input": _problem_doc(pb), **doc}, out)
        return EXIT_OK if ok else EXIT_MISMATCH
    rep = dim_descent(P, strategy=args.strategy, strict=False, order=args.oracle_order)
    _emit({"command": "dim", "input": _problem_doc(pb), "dim": _dim(rep.dim_descent), **rep.to_dict()}, out)
    return EXIT_OK if rep.agree else EXIT_MISMATCH


def cmd_normalize(args, out) -> int:
    pb = read_problem(args.file)
    P = pb.presentation
    pieces = _reduced_pieces(P) if _artinian(P) else [P]
    chains = []
    for Q in pieces:
        if Q.is_zero_module():
            continue
        d = dim_descent(Q, strategy=args.strategy, strict=False, order=args.oracle_order).to_dict()
        chains.append({"ring": Q.ring.descriptor(), "chain": d["chain"], "composite": d.get("composite")})
    if len(pieces) == 1 and not _artinian(P):
        doc = {"command": "normalize", "chain": chains[0]["chain"] if chains else [],
               "composite": chains[0]["composite"] if chains else None}
    else:
        doc = {"command": "normalize", "pieces": chains}
    _emit(doc, out)
    return EXIT_OK


def cmd_profile(args, out) -> int:
    pb = read_problem(args.file)
    P = pb.presentation
    doc = {"command": "profile", "input": _problem_doc(pb)}
    if _artinian(P):
        if is_zero_module(P):
            doc.update({"zero_module": True, "summary": "zero module; no torsion profile"})
        else:
            prof, dim = n_torsion_profile(P, "lift"), n_dimension(P, "lift")
            match = prof.m_profile == dim
            doc.update({"nilradical": nil_data(P.ring).describe(), **prof.to_dict(), "dim": dim, "match": match,
                        "summary": f"{prof.summary()}; m_profile={prof.m_profile} dim={dim} "
                                   f"{'MATCH' if match else 'MISMATCH'}"})
    elif P.is_zero_module():
        doc.update({"zero_module": True, "summary": "zero module; no torsion profile"})
    else:
        doc.update(_profile_doc(P))
    _emit(doc, out)
    return EXIT_OK


def cmd_monicize(args, out) -> int:
    if args.file:
        pb = read_problem(args.file)
        ring, n = pb.ring, pb.nvars
        f = _Reader("", args.file)
        f.ring, f.nvars, f.names = ring, n, pb.names
        poly = f.poly(args.poly, None, 0)
    else:
        ring = parse_ring(args.field)
        n = args.vars
        poly = parse_poly(args.poly, ring, n)
        if n is None:
            n = poly.nvars
    if poly.nvars == 0:
        raise ParseError("monicize needs at least one variable (use --vars)")
    phi, g = monicize(poly, args.strategy)
    lead = g.coeffs_in_last()[-1]
    _emit({
        "command": "monicize",
        "input": {"ring": ring.descriptor(), "nvars": n, "poly": poly.format("x")},
        "strategy": args.strategy,
        "change": phi.to_dict(),
        "g": g.format("t"),
        "degree_in_last": g.degree_in(n),
        "leading_coefficient": lead.format("t"),
    }, out)
    return EXIT_OK


def _verify_one(name: str, P: ModulePresentation, sample, strategy, order, expected=None) -> dict:
    """Dimension agreement, profile threshold, torsion/dimension drop and KDC."""
    checks: dict[str, bool] = {}
    rep: DimReport = dim_descent(P, strategy=strategy, strict=False, order=order)
    checks["dim_agreement"] = rep.agree
    if expected is not None:
        checks["expected_dim"] = rep.dim_descent == expected
    row = {"name": name, "dim": _dim(rep.dim_descent), "steps": len(rep.steps)}
    if rep.dim_descent != MINUS_INFINITY:
        checks["post_chain_threshold"] = rep.profile_after.threshold == rep.dim_descent + 1
        checks["torsion_iff_dim_below_n"] = is_torsion_module(P, P.nvars) == (rep.dim_descent < P.nvars)
        drops, fg = True, True
        for s in rep.steps:
            Q = s.presentation
            if Q.is_zero_module():
                continue
            drops &= check_torsion_dimension_drop(Q).ok
            fg &= check_fg_dim_equality(P, Q)
        checks["torsion_dimension_drop"] = drops
        checks["fg_dim_equality"] = fg
    if sample:
        checks["kdc"] = all(check_kdc(P, m, sample).ok for m in range(P.nvars + 1))
    row["checks"] = checks
    row["ok"] = all(checks.values())
    return row


def _verify_artinian(name: str, P: ModulePresentation, sample, seed: int) -> dict:
    if is_zero_module(P):
        return {"name": name, "dim": "-inf", "checks": {}, "ok": True}
    rep = check_artinian_profile(P, sample or None, random.Random(seed))
    checks = {"routes_agree": not any("differs" in f for f in rep.failures),
              "dimension_range": not any("outside" in f for f in rep.failures),
              "post_chain_threshold": not any("threshold" in f for f in rep.failures),
              "s_torsion_free": rep.s_torsion_free is not False}
    return {"name": name, "dim": _dim(rep.dim_reduced), "checks": checks, "ok": rep.ok}


def cmd_verify(args, out) -> int:
    if not args.catalog and not args.files:
        raise ParseError("verify needs --catalog or problem files")
    rows = []
    if args.catalog:
        rng = random.Random(args.seed)
        for e in catalog():
            sample = random_sample(e.presentation, rng, count=args.sample)
            rows.append(_verify_one(e.name, e.presentation, sample, args.strategy, args.oracle_order,
                                    e.expected_dim))
    for path in args.files:
        pb = read_problem(path)
        if _artinian(pb.presentation):
            rows.append(_verify_artinian(path, pb.presentation, pb.sample, args.seed))
        else:
            rows.append(_verify_one(path, pb.presentation, pb.sample, args.strategy, args.oracle_order))
    ok = all(r["ok"] for r in rows)
    _emit({"command": "verify", "seed": args.seed, "cases": rows,
           "passed": sum(r["ok"] for r in rows), "failed": sum(not r["ok"] for r in rows), "ok": ok}, out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_hunt(args, out) -> int:
    ring = parse_ring(args.field)
    res = hunt_profile_mismatches(n=args.n, max_deg=args.deg, count=args.count, seed=args.seed,
                                  ring=ring, planted=not args.no_plant, workers=args.workers)
    _emit({"command": "hunt", "ring": ring.descriptor(), "planted": not args.no_plant,
           **res, "mismatch_count": len(res["mismatches"])}, out)
    return EXIT_OK


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=["lex", "grevlex"], default="grevlex",
                        help="monomial order the dimension oracle reads (default grevlex)")
    common.add_argument("--strategy", choices=["linear", "power"], default=None,
                        help="monicization strategy (default: linear for descent, power for monicize)")
    common.add_argument("--limit-terms", type=int, default=None, help="max terms per polynomial")
    common.add_argument("--limit-pairs", type=int, default=None, help="max critical pairs per basis")
    common.add_argument("--limit-bits", type=int, default=None, help="max coefficient bit size")
    common.add_argument("--debug-gb", action="store_true", help="log Groebner basis summaries to stderr")

    p = argparse.ArgumentParser(prog="krullmod", description="Krull dimension of finitely presented modules.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("dim", cmd_dim, "dimension report with chain, witnesses and profiles"),
                               ("normalize", cmd_normalize, "descent chain only"),
                               ("profile", cmd_profile, "fixed-coordinate torsion profile vs dimension")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("file")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("monicize", parents=[common], help="make a polynomial monic in the last variable")
    sp.add_argument("file", nargs="?", help="problem file supplying ring and variables")
    sp.add_argument("--poly", required=True, help="polynomial in x1..xn or the file's names")
    sp.add_argument("--field", default="Q", help="ring when no file is given (default Q)")
    sp.add_argument("--vars", type=int, default=None, help="variable count when no file is given")
    sp.set_defaults(func=cmd_monicize)

    sp = sub.add_parser("verify", parents=[common], help="run the checkers on the catalog and/or files")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--catalog", action="store_true", help="include the built-in 20-module catalog")
    sp.add_argument("--seed", type=int, default=0, help="seed for catalog sample elements")
    sp.add_argument("--sample", type=int, default=10, help="random sample elements per catalog module")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hunt", parents=[common], help="seeded search for fixed-coordinate profile mismatches")
    sp.add_argument("--n", type=int, default=2, help="variables per instance")
    sp.add_argument("--deg", type=int, default=2, help="max generator degree")
    sp.add_argument("--count", type=int, default=50, help="instances to draw")
    sp.add_argument("--seed", type=int, default=HUNT_SEED, help=f"default {HUNT_SEED}")
    sp.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on it")
    sp.add_argument("--field", default="F5", help="coefficient field (default F5)")
    sp.add_argument("--no-plant", action="store_true", help="do not make instance 0 the ideal <x1>")
    sp.set_defaults(func=cmd_hunt)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.strategy is None:
        args.strategy = "power" if args.command == "monicize" else "linear"
    args.oracle_order = parse_order(args.order)
    if args.debug_gb:
        handler = logging.StreamHandler(err)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        lg = logging.getLogger("krullmod.gb")
        lg.addHandler(handler)
        lg.setLevel(logging.DEBUG)
    overrides = {k: v for k, v in (("max_terms", args.limit_terms), ("max_pairs", args.limit_pairs),
                                   ("max_coeff_bits", args.limit_bits)) if v is not None}
    try:
        with limits(**overrides):
            return args.func(args, out)
    except ResourceLimit as exc:
        err.write(f"krullmod: resource limit: {exc}\n")
        return EXIT_LIMIT
    except (KrullModError, ValueError) as exc:
        err.write(f"krullmod: input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
