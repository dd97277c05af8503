"""Command-line front end: ``rfgrowth <subcommand> [options]``.

Options may also come from a ``key = value`` file given with ``--config``;
flags on the command line win.  Errors are written to stderr as one JSON
object and map to distinct exit codes:

    2 usage, 3 input, 4 budget, 5 unsupported presentation,
    6 search exhausted, 7 domain/precondition, 8 violated bound.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import InputError, RFGrowthError, UnsupportedPresentation
from .finite.groups import DEFAULT_SCAN_BUDGET, parse_element, parse_target
from .finite.elements import parse_matrix
from .finite.homs import Homomorphism
from .words import DEFAULT_BALL_BUDGET, Presentation, parse_presentation

DEFAULTS = {
    "format": None, "limit": 200, "radius": 3, "kmax": 2, "jobs": 1, "cls": "GL",
    "ball_budget": DEFAULT_BALL_BUDGET, "scan_budget": DEFAULT_SCAN_BUDGET, "hom_budget": 2 * 10**7,
    "jmax": 4, "seed": 0,
}
FORMAT_DEFAULT = {"atlas": "json", "detect": "json", "growth": "csv", "certify": "json",
                  "induce": "json", "experiment": "csv"}


# --- output ----------------------------------------------------------------

def tagged(value, tag):
    return {"value": value, "tag": tag}


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


def _interval(iv, approx=False):
    if iv is None:
        return None
    d = iv.to_json()
    d["tag"] = "exact" if iv.is_point else "interval"
    if iv.is_point:
        d["value"] = _num(iv.lo)
    if approx:
        d["approx"] = True
    return d


def _exponents(pair, approx):
    if pair is None:
        return None
    lo, hi = pair
    d = {"lo": lo, "hi": hi, "tag": "interval", "meaning": "q^lo < x < q^hi"}
    if approx:
        d = {"exponent": lo, "tag": "interval", "approx": True, "meaning": "x grows like q^exponent"}
    return d


def emit_records(records, columns, fmt, out):
    if fmt == "json":
        json.dump(records, out, sort_keys=True, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            w.writerow(["" if r.get(c) is None else r.get(c) for c in columns])
    else:
        rows = [[str("" if r.get(c) is None else r.get(c)) for c in columns] for r in records]
        widths = [max([len(c)] + [len(row[i]) for row in rows]) for i, c in enumerate(columns)]
        out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
        for row in rows:
            out.write("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() + "\n")


def emit_document(doc, fmt, out):
    if fmt == "json":
        json.dump(doc, out, sort_keys=True, indent=2)
        out.write("\n")
        return
    flat = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            flat.append({"key": prefix, "value": json.dumps(v) if isinstance(v, list) else v})

    walk("", doc)
    emit_records(flat, ["key", "value"], fmt, out)


# --- inputs ------------------------------------------------------------------

def load_presentation(path) -> Presentation:
    if path is None:
        raise InputError("--pres is required")
    try:
        with open(path) as fh:
            p = parse_presentation(fh.read())
    except OSError as e:
        raise InputError(f"cannot read presentation {path!r}: {e.strerror}") from None
    if p.relators:
        try:
            p = p.with_certificate()
        except UnsupportedPresentation:
            pass  # word-problem-dependent commands will refuse it explicitly
    return p


_CONFIG_ALIASES = {"class": "cls"}


def read_config(path) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise InputError(f"cannot read config {path!r}: {e.strerror}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"config line {n}: expected key = value")
        key = key.strip().replace("-", "_")
        out[_CONFIG_ALIASES.get(key, key)] = value.strip()
    return out


def _split(text, sep=","):
    return [x.strip() for x in text.split(sep) if x.strip()]


# --- subcommands ----------------------------------------------------------------

def cmd_atlas(a, out):
    from .atlas import (FamilyId, atlas_entry, ratio, threshold_report, verify_family_inequalities)

    doc = {}
    if a.threshold is not None:
        rep = threshold_report(Fraction(a.threshold), a.include_sporadic, a.kind)
        doc["threshold"] = {"C": str(rep.C), "R": tagged(rep.R, "upper-bound"),
                            "contributions": rep.contributions, "kind": a.kind,
                            "include_sporadic": a.include_sporadic}
    if a.family is not None:
        f = FamilyId(a.family, a.n, a.q)
        e = atlas_entry(f)
        doc["entry"] = {
            "family": f.tag, "n": f.n, "q": f.q, "name": e.name,
            "order": tagged(e.order, "exact") if e.order is not None else None,
            "order_exponents": _exponents(e.order_exponents, e.approx),
            "m1": tagged(e.m1, "exact") if e.m1 is not None else None,
            "m1_exponents": _exponents(e.m1_exponents, e.approx),
            "r": _interval(e.r), "r_exceptions": [list(x) for x in e.r_exceptions],
            "r_fl": _interval(e.r_fl), "ratio_bounds": _interval(e.ratio_bounds, e.approx),
            "approx": e.approx, "flags": list(e.flags),
        }
        rr = ratio(f, a.scan_budget)
        doc["ratio"] = {"value": rr.value, "tag": rr.tag, "interval": _interval(rr.interval, rr.approx),
                        "passes": rr.passes}
        rep = verify_family_inequalities(f, a.scan_budget)
        doc["inequalities"] = [{"name": c.name, "detail": c.detail, "passed": c.passed} for c in rep.checks]
    if not doc:
        raise InputError("atlas needs --family or --threshold")
    emit_document(doc, a.format, out)


def _catalog(a):
    from .search import build_catalog
    return build_catalog(a.cls, int(a.limit))


def cmd_detect(a, out):
    from .search import detect

    p = load_presentation(a.pres)
    cat = _catalog(a)
    words = _split(a.words) if a.words else ([a.word] if a.word else [])
    if not words:
        raise InputError("detect needs --word or --words")
    recs = []
    for text in words:
        w = p.word(text)
        res = detect(w, p, cat, jobs=a.jobs, budget=a.hom_budget)
        recs.append({"word": p.alphabet.format_word(w), "class": cat.cls, "limit": cat.order_limit,
                     "value": res.order, "tag": res.tag,
                     "witness_group": str(res.group) if res.group else None,
                     "witness": json.dumps(res.witness.describe(), sort_keys=True) if res.witness else None,
                     "exhausted_flag": int(res.exhausted)})
    cols = ["word", "class", "limit", "value", "tag", "witness_group", "witness", "exhausted_flag"]
    if a.format == "json" and len(recs) == 1:
        r = dict(recs[0])
        r["witness"] = json.loads(r["witness"]) if r["witness"] else None
        emit_document(r, "json", out)
    else:
        emit_records(recs, cols, a.format, out)


def cmd_growth(a, out):
    from .search import growth

    p = load_presentation(a.pres)
    cat = _catalog(a)
    gens = [p.word(x) for x in _split(a.generators)] if a.generators else None
    tab = growth(p, int(a.radius), cat, generators=gens, jobs=a.jobs, ball_budget=a.ball_budget,
                 hom_budget=a.hom_budget)
    recs = [{"m": r.m, "class": tab.cls, "value": r.value,
             "argmax_word": p.alphabet.format_word(r.argmax) if r.argmax is not None else None,
             "witness_group": str(r.group) if r.group else None,
             "exhausted_flag": int(r.exhausted), "tag": r.tag} for r in tab.rows]
    emit_records(recs, ["m", "class", "value", "argmax_word", "witness_group", "exhausted_flag", "tag"],
                 a.format, out)


def cmd_certify(a, out):
    from .certify import common_multiple, lcm_length_audit, verify_witness

    p = load_presentation(a.pres)
    if not a.words:
        raise InputError("certify needs --words")
    T = [p.word(x) for x in _split(a.words)]
    cm = common_multiple(T, int(a.kmax), p)
    fmt = p.alphabet.format_word
    verdict = verify_witness(cm)
    audit = lcm_length_audit(cm, int(a.kmax))
    doc = {
        "common_multiple": fmt(cm.word),
        "length": tagged(len(cm.word), "exact"),
        "T": [fmt(w) for w in T],
        "k_used": tagged(cm.k_used, "exact"),
        "witnesses": [{"base": fmt(wit.base),
                       "factors": [{"conjugator": fmt(c), "sign": s} for c, s in wit.factors]}
                      for wit in cm.witnesses],
        "verified": verdict.ok,
        "first_failure": verdict.first_failure,
        "audit": {"d": audit.d, "t": audit.t, "fitted_constant": tagged(audit.fitted, "exact"),
                  "C0": audit.c0, "bound": tagged(audit.bound, "upper-bound")},
    }
    emit_document(doc, a.format, out)


def cmd_induce(a, out):
    from .induction import coset_structure, induce, rewrite, schreier_alphabet, schreier_generators

    p = load_presentation(a.pres)
    if a.target is None or a.images is None:
        raise InputError("induce needs --target and --images")
    G = parse_target(a.target)
    imgs = [parse_element(G, x) for x in _split(a.images, ";")]
    h = Homomorphism(p, G, imgs)
    cs = coset_structure(p, h)
    fmt = p.alphabet.format_word
    gens = schreier_generators(cs)
    doc = {"index": tagged(cs.index, "exact"),
           "transversal": [fmt(t) for t in cs.transversal],
           "schreier_generators": [fmt(s) for s in gens],
           "rank": tagged(len(gens), "exact")}
    if a.base is not None:
        if a.q is None:
            raise InputError("--base needs --q")
        base = [parse_matrix(x, a.q) for x in _split(a.base, ";")]
        rep = induce(cs, base)
        doc["field"] = f"GF({a.q})"
        doc["dimension"] = tagged(rep.dimension, "exact")
        doc["generator_images"] = {p.alphabet.names[g]: str(rep.generator_image(g + 1))
                                   for g in range(p.rank)}
        if a.word:
            w = p.word(a.word)
            doc["word"] = fmt(w)
            doc["word_image"] = str(rep.image(w))
    elif a.word:
        w = p.word(a.word)
        doc["word"] = fmt(w)
        doc["rewritten"] = schreier_alphabet(len(gens)).format_word(rewrite(cs, w))
    emit_document(doc, a.format, out)


def cmd_experiment(a, out):
    from .search import ratio_experiment

    p = load_presentation(a.pres)
    cat = _catalog(a)
    curve = ratio_experiment(p.word(a.gamma), p.word(a.gamma0), int(a.jmax), int(a.kmax), p, cat,
                             jobs=a.jobs, hom_budget=a.hom_budget, scan_budget=a.scan_budget)
    recs = []
    for r in curve.rows:
        recs.append({"j": r.j, "t_size": r.t_size, "eta_length": r.eta_length,
                     "fitted_cubic": round(r.fitted, 6), "witnesses_ok": int(r.witnesses_ok),
                     "value": r.detection.order, "tag": r.detection.tag,
                     "witness_group": str(r.detection.group) if r.detection.group else None,
                     "m1": r.m1, "ratio": None if r.ratio is None else round(r.ratio, 6),
                     "gamma0_image_order": r.gamma0_image_order,
                     "order_ok": None if r.order_ok is None else int(r.order_ok),
                     "exhausted_flag": int(r.detection.exhausted)})
    cols = ["j", "t_size", "eta_length", "fitted_cubic", "witnesses_ok", "value", "tag", "witness_group",
            "m1", "ratio", "gamma0_image_order", "order_ok", "exhausted_flag"]
    emit_records(recs, cols, a.format, out)


COMMANDS = {"atlas": cmd_atlas, "detect": cmd_detect, "growth": cmd_growth, "certify": cmd_certify,
            "induce": cmd_induce, "experiment": cmd_experiment}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rfgrowth", description="Residual finiteness growth toolkit")
    ap.add_argument("--version", action="version", version=f"rfgrowth {__version__}")
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--format", choices=["csv", "json", "table"])
    common.add_argument("--pres", help="presentation file (gens: ... / rels: ...)")
    common.add_argument("--class", dest="cls", choices=["ALL", "GL", "SIMPLE", "all", "gl", "simple"])
    common.add_argument("--limit", type=int, help="catalog order limit")
    common.add_argument("--jobs", type=int, help="worker threads for the catalog scan")
    common.add_argument("--ball-budget", type=int)
    common.add_argument("--scan-budget", type=int)
    common.add_argument("--hom-budget", type=int)
    common.add_argument("--seed", type=int, help="reserved; every algorithm is deterministic")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("atlas", parents=[common], help="family data, ratios and rank thresholds",
                       argument_default=argparse.SUPPRESS)
    s.add_argument("--family")
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--threshold", help="compute R(C) for this C")
    s.add_argument("--include-sporadic", action="store_true")
    s.add_argument("--kind", choices=["simple", "GL"])

    s = sub.add_parser("detect", parents=[common], help="smallest detecting catalog group",
                       argument_default=argparse.SUPPRESS)
    s.add_argument("--word")
    s.add_argument("--words", help="comma-separated words")

    s = sub.add_parser("growth", parents=[common], help="growth table over balls",
                       argument_default=argparse.SUPPRESS)
    s.add_argument("--radius", type=int)
    s.add_argument("--generators", help="alternative generating words, comma-separated")

    s = sub.add_parser("certify", parents=[common], help="common multiple with witnesses",
                       argument_default=argparse.SUPPRESS)
    s.add_argument("--words", help="comma-separated elements of T")
    s.add_argument("--kmax", type=int)

    s = sub.add_parser("induce", parents=[common], help="coset structure and induced representation",
                       argument_default=argparse.SUPPRESS)
    s.add_argument("--target", help="quotient group descriptor, e.g. Cyclic(2)")
    s.add_argument("--images", help="generator images separated by ';'")
    s.add_argument("--base", help="base matrices for the Schreier generators, separated by ';'")
    s.add_argument("--q", type=int)
    s.add_argument("--word")

    s = sub.add_parser("experiment", parents=[common], help="T_j common-multiple ratio curve",
                       argument_default=argparse.SUPPRESS)
    s.add_argument("--gamma")
    s.add_argument("--gamma0")
    s.add_argument("--jmax", type=int)
    s.add_argument("--kmax", type=int)
    return ap


_INT_KEYS = {"limit", "radius", "kmax", "jobs", "ball_budget", "scan_budget", "hom_budget", "jmax", "n", "q",
             "seed"}
_OPTIONAL = ("family", "n", "q", "threshold", "kind", "word", "words", "generators", "target", "images",
             "base", "gamma", "gamma0", "pres", "include_sporadic")


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge flags over config file values over built-in defaults."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, value in cfg.items():
        if not hasattr(args, key):
            if key in _INT_KEYS:
                try:
                    value = int(value)
                except ValueError:
                    raise InputError(f"config key {key} needs an integer") from None
            if key == "include_sporadic":
                value = value.lower() in ("1", "true", "yes")
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if not hasattr(args, key) or getattr(args, key) is None:
            setattr(args, key, value)
    for key in _OPTIONAL:
        if not hasattr(args, key):
            setattr(args, key, False if key == "include_sporadic" else None)
    if args.format is None:
        args.format = FORMAT_DEFAULT[args.command]
    if args.format not in ("csv", "json", "table"):
        raise InputError(f"unknown format {args.format!r}")
    if getattr(args, "kind", None) is None:
        args.kind = "simple"
    args.cls = str(args.cls).upper()
    for key in ("ball_budget", "scan_budget", "hom_budget", "jobs", "limit"):
        if getattr(args, key) <= 0:
            raise InputError(f"{key} must be positive")
    return args


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        args = resolve(args)
        COMMANDS[args.command](args, buf)
    except RFGrowthError as e:
        json.dump({"error": e.kind, "message": str(e), "exit_code": e.exit_code}, err, sort_keys=True)
        err.write("\n")
        return e.exit_code
    out.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
