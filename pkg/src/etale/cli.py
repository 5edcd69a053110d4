"""Command line interface.

Exit codes: 0 success, 1 mismatch against bundled expectations (--check) or
no match, 2 usage error, 3 internal inconsistency or exhausted search.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import catalogue as cat
from .condensation import (DEFAULT_NIM_BUDGET, CondensationResult, condense, find_nimreps,
                           free_module_gram)
from .errors import EtaleError, InconsistentBranching, SearchBudgetExceeded
from .etale_classifier import (CERTIFIED, RULED_OUT, TRIVIAL, UNDETERMINED, AlgebraCandidate,
                               brute_force_candidates, classify, compare_with_published,
                               completely_anisotropic, enumerate_candidates, parse_algebra)
from .exactnum import Cyclo, format_scalar
from .fusion_ring import FusionRing, validate_ring
from .modular_data import (DEFAULT_NODE_BUDGET, ModularData, build_modular_data, count_mfcs,
                           enumerate_conformal, solve_characters, verify_modular)
from .physics import BUNDLED_REALIZATIONS, gapped_phase_report, load_realization, match_realization

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    fmt: str = "text"
    check: bool = False
    precision_cap: int | None = None
    node_budget: int = DEFAULT_NODE_BUDGET
    nim_budget: int = DEFAULT_NIM_BUDGET
    denom_bounds: dict = field(default_factory=dict)

    def denom_bound(self, name: str) -> int:
        if name in self.denom_bounds:
            return int(self.denom_bounds[name])
        return cat.DEFAULT_DENOM_BOUNDS.get(name, 12)


# ---------------------------------------------------------------------------
# output

class Report:
    """Collects titled tables and renders them in one format."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.sections: list[tuple[str, list[str], list[list]]] = []
        self.notes: list[str] = []

    def table(self, title: str, headers: Sequence[str], rows: Sequence[Sequence]):
        self.sections.append((title, list(headers), [list(r) for r in rows]))

    def note(self, text: str):
        self.notes.append(text)

    def render(self) -> str:
        if self.fmt == "json":
            out = {"tables": [{"title": t, "columns": h, "rows": [[_plain(c) for c in r] for r in rows]}
                              for t, h, rows in self.sections],
                   "notes": self.notes}
            return json.dumps(out, indent=2) + "\n"
        buf = io.StringIO()
        if self.fmt == "csv":
            w = csv.writer(buf, lineterminator="\n")
            for t, h, rows in self.sections:
                w.writerow([f"# {t}"])
                w.writerow(h)
                for r in rows:
                    w.writerow([_plain(c) for c in r])
            for n in self.notes:
                w.writerow([f"# {n}"])
            return buf.getvalue()
        for t, h, rows in self.sections:
            cells = [[_text(c) for c in r] for r in rows]
            widths = [max([len(h[k])] + [len(r[k]) for r in cells]) for k in range(len(h))]
            buf.write(f"{t}\n")
            buf.write("  ".join(h[k].ljust(widths[k]) for k in range(len(h))).rstrip() + "\n")
            buf.write("  ".join("-" * widths[k] for k in range(len(h))) + "\n")
            for r in cells:
                buf.write("  ".join(r[k].ljust(widths[k]) for k in range(len(h))).rstrip() + "\n")
            buf.write("\n")
        for n in self.notes:
            buf.write(n + "\n")
        return buf.getvalue()


def _text(c) -> str:
    if isinstance(c, Cyclo):
        return format_scalar(c)
    if isinstance(c, bool):
        return "Yes" if c else "No"
    if isinstance(c, (list, tuple)):
        return "(" + ",".join(_text(x) for x in c) + ")"
    return str(c)


def _plain(c):
    """Machine formats: exact scalars without the decimal approximation."""
    if isinstance(c, Cyclo):
        return format_scalar(c, approx=False)
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, (list, tuple)):
        return [_plain(x) for x in c]
    return c


# ---------------------------------------------------------------------------
# helpers

def _load_ring(arg: str) -> tuple[FusionRing, str | None]:
    """Catalogue name or path to a ring JSON file."""
    try:
        name = cat.canonical_name(arg)
        return cat.get_ring(name), name
    except KeyError:
        pass
    path = Path(arg)
    if path.is_file():
        try:
            ring = FusionRing.load(path)
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read ring file {arg}: {exc}") from None
        return ring, None
    raise UsageError(f"unknown ring {arg!r}; try 'rings list'")


def _characters(ring: FusionRing, name: str | None) -> list[tuple[Cyclo, ...]]:
    if name is not None:
        return list(cat.published_characters(name))
    return [tuple(c) for c in solve_characters(ring)]


def _md_labels(name: str) -> list[str]:
    return [f"d{c + 1} h{h + 1} {'+' if s > 0 else '-'}" for c, h, s in cat.published_mfcs(name)]


def _modular_data(name: str | None, arg, ring: FusionRing | None = None) -> list[tuple[str, ModularData]]:
    """Bundled MFCs by 1-based index (all when arg is None), or one file."""
    arg = None if arg is None else str(arg)
    if arg is not None and not arg.isdigit():
        try:
            md = cat.load_modular_data(arg)
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read modular data {arg}: {exc}") from None
        if ring is not None and md.ring != ring:
            raise UsageError(f"modular data in {arg} lives on a different ring")
        return [(Path(arg).name, md)]
    if name is None:
        raise UsageError("modular data is only bundled for catalogue rings; pass --md FILE")
    labels = _md_labels(name)
    if arg is None:
        return [(labels[k], cat.published_modular_data(name, k)) for k in range(len(labels))]
    index = int(arg)
    if not 1 <= index <= len(labels):
        raise UsageError(f"--md must lie in 1..{len(labels)} for {name}")
    return [(labels[index - 1], cat.published_modular_data(name, index - 1))]


def _algebra(ring: FusionRing, arg: str) -> AlgebraCandidate:
    try:
        return parse_algebra(ring, arg)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad algebra {arg!r}: {exc}") from None


def _vec(ring: FusionRing, rows) -> str:
    return " ".join("".join(str(int(x)) for x in row) for row in rows)


# ---------------------------------------------------------------------------
# commands

def cmd_rings(args, cfg: RunConfig, rep: Report) -> int:
    if args.action == "list":
        rows = []
        for name in cat.RING_NAMES:
            ring = cat.get_ring(name)
            rows.append([name, ring.rank, " ".join(ring.labels), ring.fpdim_total()])
        rep.table("Catalogue rings", ["ring", "rank", "objects", "FPdim"], rows)
        return EXIT_OK
    if not args.ring:
        raise UsageError(f"rings {args.action} needs a ring")
    ring, name = _load_ring(args.ring)
    if args.action == "export":
        text = ring.to_json()
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
            rep.note(f"wrote {args.output}")
        else:
            sys.stdout.write(text)
            rep.fmt = "none"
        return EXIT_OK
    report = validate_ring(ring)
    rows = []
    for i in range(ring.rank):
        rows.append([ring.labels[i]] + [ring.product_str(i, j) for j in range(ring.rank)])
    rep.table(f"Fusion rules of {ring.name or args.ring}", ["x"] + list(ring.labels), rows)
    fp = ring.fpdims()
    rep.table("Duals and FP dimensions", ["object", "dual", "FPdim"],
              [[ring.labels[i], ring.labels[ring.dual[i]], fp[i]] for i in range(ring.rank)])
    rep.note(f"FPdim(B) = {format_scalar(ring.fpdim_total())}")
    if report.ok:
        rep.note("all fusion ring axioms hold")
        return EXIT_OK
    for v in report.violations:
        rep.note(f"violation {v.rule}: {v.detail} {v.witness}")
    return EXIT_MISMATCH


def cmd_characters(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    chars = _characters(ring, name)
    rows = []
    for k, d in enumerate(chars):
        rows.append([k + 1] + list(d) + [sum((x * x for x in d), Cyclo.rational(0))])
    rep.table(f"Real characters (quantum dimension candidates) of {ring.name}",
              ["#"] + list(ring.labels) + ["sum d^2"], rows)
    if cfg.check and name is not None:
        derived = {tuple(c) for c in solve_characters(ring)}
        if derived != set(chars):
            rep.note("check: derived characters differ from the bundled list")
            return EXIT_MISMATCH
        rep.note("check: derived characters agree with the bundled list")
    return EXIT_OK


def cmd_conformal(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    chars = _characters(ring, name)
    if not 1 <= args.character <= len(chars):
        raise UsageError(f"--character must lie in 1..{len(chars)}")
    d = chars[args.character - 1]
    bound = args.denom_bound or cfg.denom_bound(name or "")
    hs = enumerate_conformal(ring, d, bound, cfg.node_budget)
    rows = [[k + 1] + [str(x) for x in h] for k, h in enumerate(hs)]
    rep.table(f"Conformal dimensions for character {args.character} (denominators <= {bound})",
              ["#"] + list(ring.labels), rows)
    if cfg.check and name is not None:
        pub = cat.published_conformal(name)[args.character - 1]
        if sorted(hs) != sorted(tuple(h) for h in pub):
            rep.note("check: enumeration differs from the bundled list")
            return EXIT_MISMATCH
        rep.note("check: enumeration agrees with the bundled list")
    return EXIT_OK


def cmd_mfcs(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    bound = args.denom_bound or cfg.denom_bound(name or "")
    result = count_mfcs(ring, bound, cfg.node_budget)
    chars = solve_characters(ring)
    rows = [[k + 1, tuple(d), n] for k, (d, n) in enumerate(zip(chars, result.per_character))]
    rep.table(f"MFCs on {ring.name} (denominators <= {bound})",
              ["character", "d", "MFCs"], rows)
    rep.note(f"total {result.total}: {result.factorization}")
    if cfg.check and name is not None:
        expected, fact = cat.PUBLISHED_MFC_COUNTS[name]
        if result.total != expected:
            rep.note(f"check: expected {expected} ({fact})")
            return EXIT_MISMATCH
        rep.note("check: count agrees with the bundled value")
    return EXIT_OK


def _condense_safe(md: ModularData, A: AlgebraCandidate, cfg: RunConfig) -> CondensationResult:
    return condense(md, A, cfg.nim_budget)


def _ba_name(res: CondensationResult) -> str:
    return "B" if res.algebra.is_trivial() else res.identified_BA


def cmd_classify(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    mds = _modular_data(name, None if args.all else args.md, ring)
    labels = ring.labels
    mismatch = False
    if len(mds) == 1 and not args.all:
        label, md = mds[0]
        verdicts = classify(md)
        rows = []
        for v in verdicts:
            reason = "; ".join(f"{r.rule}{list(r.witness) if r.witness else ''}" for r in v.reasons)
            rows.append([v.candidate.label(labels), v.status, v.candidate.fpdim,
                         v.dyslectic_fpdim, v.lagrangian, reason])
        rep.table(f"Candidates for {name} [{label}]",
                  ["A", "status", "FPdim(A)", "FPdim(B_A^0)", "Lagrangian", "reason"], rows)
        per_md = [(label, md, verdicts)]
    else:
        per_md = [(label, md, classify(md)) for label, md in mds]
    groups: dict[tuple, list[str]] = {}
    for label, md, verdicts in per_md:
        for v in verdicts:
            if v.status == RULED_OUT:
                continue
            ba, rank = "?", "?"
            if v.is_etale:
                res = _condense_safe(md, v.candidate, cfg)
                ba, rank = _ba_name(res), res.module_rank
            key = (v.candidate.label(labels), v.status, ba, rank, v.lagrangian)
            groups.setdefault(key, []).append(label)
    rows = [list(k) + [len(v)] for k, v in sorted(groups.items(), key=lambda kv: kv[0][0] != "1")]
    rep.table(f"Connected etale algebras in {name}",
              ["A", "status", "B_A", "rank(B_A)", "Lagrangian", "MFCs"], rows)
    aniso = {completely_anisotropic(v) for _, _, v in per_md}
    rep.note(f"completely anisotropic: {', '.join(sorted(_text(a) if a is not None else 'undetermined' for a in aniso))}")
    if cfg.check:
        expected = set(cat.PUBLISHED_TABLES[name])
        for label, md, verdicts in per_md:
            got = set()
            for v in verdicts:
                if v.is_etale:
                    res = _condense_safe(md, v.candidate, cfg)
                    got.add((v.candidate.label(labels), _ba_name(res), res.module_rank, v.lagrangian))
                elif v.status == UNDETERMINED:
                    got.add((v.candidate.label(labels), UNDETERMINED, None, v.lagrangian))
            if got != expected:
                mismatch = True
                rep.note(f"check: {label}: expected {sorted(expected)}, got {sorted(got, key=str)}")
        rep.note("check: " + ("MISMATCH" if mismatch else "all tables agree with the bundled results"))
    return EXIT_MISMATCH if mismatch else EXIT_OK


def cmd_modular(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    (label, md), = _modular_data(name, args.md or 1, ring)
    labels = ring.labels
    title = f"{name or ring.name} [{label}]"
    rep.table(f"Modular data {title}", ["object", "d", "h", "theta"],
              [[labels[k], md.d[k], md.h[k], md.theta[k]] for k in range(ring.rank)])
    rep.table("S~ (unnormalized S-matrix)", [""] + list(labels),
              [[labels[i]] + list(md.S_tilde[i]) for i in range(ring.rank)])
    rep.table("T (diagonal)", [""] + list(labels),
              [[labels[i]] + [md.theta[i] if i == j else Cyclo.rational(0) for j in range(ring.rank)]
               for i in range(ring.rank)])
    report = verify_modular(md)
    rep.note(f"D^2 = {format_scalar(md.global_dim_sq)}; dSign = {md.sign:+d}")
    rep.note(f"verification: {report}")
    if args.output:
        data = cat.modular_data_to_dict(md, name)
        Path(args.output).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        rep.note(f"wrote {args.output}")
    if cfg.check and not report.ok:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_candidates(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    cands = enumerate_candidates(ring)
    rows = [[c.label(ring.labels), c.n[1:], c.fpdim] for c in cands]
    rep.table(f"Algebra candidates in {ring.name} with FPdim(A)^2 <= FPdim(B)",
              ["A", "(n_2..n_r)", "FPdim(A)"], rows)
    brute = brute_force_candidates(ring)
    rep.note(f"{len(cands)} candidates; brute force over multiplicities <= 6 "
             f"{'agrees' if brute == [c.n for c in cands] else 'DISAGREES'}")
    status = EXIT_OK if brute == [c.n for c in cands] else EXIT_MISMATCH
    if name is not None:
        derived_only, printed_only = compare_with_published(
            [c.n[1:] for c in cands], cat.PUBLISHED_CANDIDATES.get(name, []))
        expected = cat.PUBLISHED_CANDIDATE_COUNTS[name]
        rep.note(f"printed count {expected}")
        if name in cat.PUBLISHED_CANDIDATES:
            for row in derived_only:
                rep.note(f"derived but not printed: {row}")
            for row in printed_only:
                rep.note(f"printed but violating the bound: {row}")
        if cfg.check and len(cands) != expected:
            rep.note("check: candidate count differs from the printed count")
            status = EXIT_MISMATCH
    return status


def cmd_condense(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    A = _algebra(ring, args.algebra)
    (label, md), = _modular_data(name, args.md or 1, ring)
    from .etale_classifier import classify_candidate
    verdict = classify_candidate(md, A)
    if verdict.status == RULED_OUT:
        raise UsageError(f"{A.label(ring.labels)} is not etale in {name} [{label}]: "
                         + "; ".join(r.rule for r in verdict.reasons))
    res = condense(md, A, cfg.nim_budget)
    n = res.module_rank
    mods = [f"m{k + 1}" for k in range(n)]
    rows = []
    for a in range(ring.rank):
        row = res.branching.rows[a]
        image = "+".join((mods[m] if c == 1 else f"{c}{mods[m]}") for m, c in enumerate(row) if c)
        rows.append([ring.labels[a], image])
    rep.table(f"Restriction b -> F(b) for A = {A.label(ring.labels)} in {name} [{label}]",
              ["b", "F(b)"], rows)
    rows = []
    for m in range(n):
        lifts = "+".join(ring.labels[k] for k in res.lifts(m))
        conf = m not in res.unconfined
        h = "" if conf else str(res.module_twists[m])
        rows.append([mods[m], lifts, res.module_dims[m], res.module_fpdims[m],
                     "confined" if conf else "unconfined", h])
    rep.table("Broken-phase sectors", ["module", "lifts", "d", "FPdim", "phase", "h"], rows)
    for i in range(ring.rank):
        M = res.nimrep.matrices[i]
        rep.table(f"NIM-rep n_{ring.labels[i]}", [""] + mods,
                  [[mods[m]] + list(M[m]) for m in range(n)])
    rep.table("Identification", ["category", "rank", "FPdim", "recognized"], [
        ["B_A", n, res.fpdim_BA, res.identified_BA],
        ["B_A^0", len(res.unconfined), res.fpdim_BA0, res.identified_BA0],
    ])
    if res.nimrep_count > 1 or res.alternatives > 1:
        rep.note(f"{res.nimrep_count} NIM-reps and {res.alternatives} module fusion rings fit; first shown")
    return EXIT_OK


def cmd_nimrep(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    A = _algebra(ring, args.algebra)
    if args.rank < 1:
        raise UsageError("--rank must be positive")
    reps = find_nimreps(ring, A, args.rank, cfg.nim_budget)
    mods = [f"m{k + 1}" for k in range(args.rank)]
    for k, nim in enumerate(reps):
        for i in range(ring.rank):
            M = nim.matrices[i]
            rep.table(f"NIM-rep {k + 1}: n_{ring.labels[i]}", [""] + mods,
                      [[mods[m]] + list(M[m]) for m in range(args.rank)])
    rep.note(f"{len(reps)} NIM-rep(s) of rank {args.rank} for A = {A.label(ring.labels)}")
    return EXIT_OK


def cmd_gsd(args, cfg: RunConfig, rep: Report) -> int:
    ring, name = _load_ring(args.ring)
    A = _algebra(ring, args.algebra)
    (label, md), = _modular_data(name, args.md or 1, ring)
    res = condense(md, A, cfg.nim_budget)
    report = gapped_phase_report(res.nimrep, ring)
    mods = [f"m{k + 1}" for k in range(report.gsd)]
    rows = []
    for b in report.broken:
        image = "+".join((mods[m] if c == 1 else f"{c}{mods[m]}") for m, c in enumerate(b.image) if c)
        rows.append([ring.labels[b.obj], mods[b.module], image])
    rep.table(f"Broken objects for the B_A phase, A = {A.label(ring.labels)} in {name} [{label}]",
              ["object", "module m", "object |> m"], rows)
    rep.note(f"GSD = {report.gsd}; spontaneously broken: {_text(report.ssb)}")
    return EXIT_OK


def _read_list(path: str, key: str):
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return [t for t in text.replace(",", " ").split() if t]
    if isinstance(data, dict):
        return data[key]
    return data


def cmd_match(args, cfg: RunConfig, rep: Report) -> int:
    from .exactnum import parse_scalar
    jobs = []
    if args.bundled:
        for fname in BUNDLED_REALIZATIONS:
            r = load_realization(name=fname)
            jobs.append((r.source, r.labels, r.dims, r.h))
    else:
        if not args.dims:
            raise UsageError("match needs --dims (and --h) or --bundled")
        try:
            dims = [parse_scalar(str(x)) for x in _read_list(args.dims, "dims")]
            hs = [Fraction(str(x)) for x in _read_list(args.h or args.dims, "h")]
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read input: {exc}") from None
        labels = tuple(f"#{k + 1}" for k in range(len(dims)))
        jobs.append((Path(args.dims).stem, labels, dims, hs))
    status = EXIT_OK
    for source, labels, dims, hs in jobs:
        if len(dims) != len(hs):
            raise UsageError("dims and h lists differ in length")
        m = match_realization(dims, hs, source=source)
        if m is None:
            rep.note(f"{source}: no match")
            status = EXIT_MISMATCH
            continue
        ring_labels = cat.get_ring(m.ring).labels if m.ring != "Vec" else ("1",)
        rep.table(f"{source}: {m.ring}, character {m.character + 1}, conformal vector {m.conformal + 1}",
                  ["object", "input"], m.pairs(ring_labels, labels))
    return status


def cmd_summary(args, cfg: RunConfig, rep: Report) -> int:
    rows = []
    mismatch = []
    for name in cat.RING_NAMES:
        ring = cat.get_ring(name)
        if args.enumerate:
            count = count_mfcs(ring, cfg.denom_bound(name), cfg.node_budget)
            total, fact = count.total, count.factorization
        else:
            mfcs = [cat.published_modular_data(name, k) for k in range(len(cat.published_mfcs(name)))]
            ok = [md for md in mfcs if verify_modular(md).ok]
            total = len(ok)
            per = {}
            for ci, _, _ in cat.published_mfcs(name):
                per[ci] = per.get(ci, 0) + 1
            from .modular_data import factorization_string
            fact = factorization_string(list(per.values()))
        verdict_sets = [classify(cat.published_modular_data(name, k))
                        for k in range(len(cat.published_mfcs(name)))]
        etale = sorted({v.candidate.label(ring.labels) for vs in verdict_sets for v in vs if v.is_etale},
                       key=lambda s: (s != "1", s))
        aniso = {completely_anisotropic(vs) for vs in verdict_sets}
        aniso_val = aniso.pop() if len(aniso) == 1 else None
        lag = any(v.lagrangian for vs in verdict_sets for v in vs if v.is_etale)
        ncand = len(enumerate_candidates(ring))
        rows.append([name, total, fact, ncand, ", ".join(etale), lag,
                     _text(aniso_val) if aniso_val is not None else "undetermined"])
        if cfg.check:
            exp_total, _ = cat.PUBLISHED_MFC_COUNTS[name]
            if total != exp_total:
                mismatch.append(f"{name}: {total} MFCs, expected {exp_total}")
            if aniso_val is not cat.PUBLISHED_ANISOTROPIC[name]:
                mismatch.append(f"{name}: anisotropy {aniso_val}, expected {cat.PUBLISHED_ANISOTROPIC[name]}")
            if lag:
                mismatch.append(f"{name}: Lagrangian algebra found")
    rep.table("Rank-6 multiplicity-free MFCs", ["ring", "MFCs", "count", "candidates",
                                                 "etale A", "Lagrangian", "completely anisotropic"], rows)
    if not args.enumerate:
        rep.note("MFC counts from verifying the bundled lists; pass --enumerate to recount by search")
    if cfg.check:
        for m in mismatch:
            rep.note("check: " + m)
        rep.note("check: " + ("MISMATCH" if mismatch else "summary agrees with the bundled results"))
    return EXIT_MISMATCH if mismatch else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _global_options(default) -> argparse.ArgumentParser:
    # subcommands get SUPPRESS defaults so they do not overwrite flags given earlier
    common = argparse.ArgumentParser(add_help=False, argument_default=default)
    common.add_argument("--format", choices=["text", "csv", "json"])
    common.add_argument("--check", action="store_true", default=default,
                        help="compare against bundled results; exit 1 on mismatch")
    common.add_argument("--config", help="JSON file with defaults (format, precision_cap, "
                                         "node_budget, nim_budget, denom_bounds)")
    common.add_argument("--precision-cap", type=int, help="bit cap for certified comparisons")
    common.add_argument("--budget", type=int, help="node budget for searches")
    return common


def build_parser() -> argparse.ArgumentParser:
    top = _global_options(None)
    common = _global_options(argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="etale", parents=[top],
                                description="Connected etale algebras in rank-6 modular fusion categories.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rings", parents=[common], help="list, show or export fusion rings")
    s.add_argument("action", choices=["list", "show", "export"])
    s.add_argument("ring", nargs="?")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_rings)

    s = sub.add_parser("mfcs", parents=[common], help="count MFCs on a ring")
    s.add_argument("action", choices=["count"])
    s.add_argument("ring")
    s.add_argument("--denom-bound", type=int)
    s.set_defaults(func=cmd_mfcs)

    s = sub.add_parser("characters", parents=[common], help="real characters of a ring")
    s.add_argument("ring")
    s.set_defaults(func=cmd_characters)

    s = sub.add_parser("conformal", parents=[common], help="conformal dimensions for a character")
    s.add_argument("ring")
    s.add_argument("--character", type=int, required=True, help="1-based character index")
    s.add_argument("--denom-bound", type=int)
    s.set_defaults(func=cmd_conformal)

    s = sub.add_parser("modular", parents=[common], help="d, h, S~ and T of one MFC, with verification")
    s.add_argument("ring")
    s.add_argument("--md", help="1-based index of a bundled MFC, or a modular-data file")
    s.add_argument("-o", "--output", help="write the modular data in file form")
    s.set_defaults(func=cmd_modular)

    s = sub.add_parser("candidates", parents=[common], help="algebra candidates under the FPdim bound")
    s.add_argument("ring")
    s.set_defaults(func=cmd_candidates)

    s = sub.add_parser("classify", parents=[common], help="classify connected etale algebras")
    s.add_argument("ring")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--md", help="1-based index of a bundled MFC, or a modular-data file")
    g.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("condense", parents=[common], help="condense an etale algebra")
    s.add_argument("ring")
    s.add_argument("--algebra", required=True)
    s.add_argument("--md", help="1-based index of a bundled MFC, or a modular-data file")
    s.set_defaults(func=cmd_condense)

    s = sub.add_parser("nimrep", parents=[common], help="NIM-reps compatible with an algebra")
    s.add_argument("ring")
    s.add_argument("--algebra", required=True)
    s.add_argument("--rank", type=int, required=True)
    s.set_defaults(func=cmd_nimrep)

    s = sub.add_parser("gsd", parents=[common], help="ground-state degeneracy and broken objects")
    s.add_argument("ring")
    s.add_argument("--algebra", required=True)
    s.add_argument("--md", help="1-based index of a bundled MFC, or a modular-data file")
    s.set_defaults(func=cmd_gsd)

    s = sub.add_parser("match", parents=[common], help="match (d, h) data to a catalogue MFC")
    s.add_argument("--dims")
    s.add_argument("--h")
    s.add_argument("--bundled", action="store_true", help="run the bundled realization files")
    s.set_defaults(func=cmd_match)

    s = sub.add_parser("summary", parents=[common], help="overview of all eight rings")
    s.add_argument("--enumerate", action="store_true", help="recount MFCs by search")
    s.set_defaults(func=cmd_summary)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        for key in ("precision_cap", "node_budget", "nim_budget", "denom_bounds"):
            if key in data:
                setattr(cfg, key, data[key])
        if "format" in data:
            cfg.fmt = data["format"]
    if args.format:
        cfg.fmt = args.format
    if args.check:
        cfg.check = True
    if args.precision_cap is not None:
        cfg.precision_cap = args.precision_cap
    if args.budget is not None:
        cfg.node_budget = cfg.nim_budget = args.budget
    if cfg.fmt not in ("text", "csv", "json"):
        raise UsageError(f"unknown format {cfg.fmt!r}")
    if cfg.node_budget <= 0 or cfg.nim_budget <= 0:
        raise UsageError("budgets must be positive")
    if cfg.precision_cap is not None:
        os.environ["ETALE_PRECISION_CAP"] = str(cfg.precision_cap)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        rep = Report(cfg.fmt)
        status = args.func(args, cfg, rep)
    except UsageError as exc:
        print(f"etale: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchBudgetExceeded as exc:
        print(f"etale: search budget exhausted: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InconsistentBranching, EtaleError) as exc:
        print(f"etale: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if rep.fmt != "none":
        sys.stdout.write(rep.render())
    return status


if __name__ == "__main__":
    sys.exit(main())
