"""Command-line interface.

Exit codes:
    0  success
    2  unreadable / malformed input, missing file, bad usage
    3  alignment cell budget exceeded
    4  empty reference (WER undefined)
    5  ruleset or reduced-form table syntax error
    6  manifest has no file shared by two versions
    7  synthetic injection plan cannot be satisfied
    8  output exists and --overwrite was not given

stdout carries data only; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .align import AlignmentBudgetError, CostModel, alignment_to_json
from .corpus import FormatError, NormalizationConfig, load_norm_config, parse_plaintext, read_transcript, tokenize_and_normalize
from .hypotheses import Category, RuleSyntaxError, load_ruleset
from .metrics import UndefinedWERError, wer
from .pipeline import ManifestError, NoSharedFilesError, compare, load_manifest, run_matrix
from .report import REPORT_CATEGORIES, build_matrix, build_pair_report, format_wer_line, pair_to_dict, render
from .synth import CapacityError, ground_truth_to_json, inject_differences

EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_EMPTY_REF = 4
EXIT_RULES = 5
EXIT_NO_SHARED = 6
EXIT_CAPACITY = 7
EXIT_EXISTS = 8


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--format", default=None, help="json, csv or text (matrix accepts a comma list)")
    g.add_argument("--norm-config", metavar="PATH", help="JSON normalization config")
    g.add_argument("--rules", metavar="PATH", help="rule file (default: shipped rules)")
    g.add_argument("--reduced-forms", metavar="PATH", help="reduced-form TSV table (default: shipped table)")
    g.add_argument("--costs", metavar="S,I,D", default="1,1,1", help="substitution,insertion,deletion costs")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for matrix runs (0 = all cores)")
    g.add_argument("--out", metavar="DIR", help="output directory")
    g.add_argument("--overwrite", action="store_true", help="replace existing output files")
    return p


def _pair_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("ref", help="reference transcript")
    p.add_argument("hyp", help="hypothesis transcript")
    p.add_argument("--ref-format", default="auto", choices=("auto", "plain", "coraal"))
    p.add_argument("--hyp-format", default="auto", choices=("auto", "plain", "coraal"))
    p.add_argument("--ref-version", default="ref")
    p.add_argument("--hyp-version", default="hyp")


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="transcript-diffs",
        description="Align transcript versions, decompose WER and attribute differences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", parents=[common], help="word alignment of two transcripts")
    _pair_args(p)
    p = sub.add_parser("wer", parents=[common], help="WER with S/D/I breakdown")
    _pair_args(p)
    p = sub.add_parser("categorize", parents=[common], help="attribute differences to hypotheses")
    _pair_args(p)
    p = sub.add_parser("matrix", parents=[common], help="all version pairs over a corpus manifest")
    p.add_argument("manifest", help="JSON array of {file_id, version_id, path, format}")
    p = sub.add_parser("synth", parents=[common], help="inject labelled differences into a text")
    p.add_argument("plan", help="JSON object mapping injection subtype to count")
    p.add_argument("base", help="plain-text base transcript")
    p.add_argument("--seed", type=int, default=0)
    return parser


# ----------------------------------------------------------------- helpers


def _config(args) -> NormalizationConfig:
    if not args.norm_config:
        return NormalizationConfig()
    try:
        return load_norm_config(args.norm_config)
    except FileNotFoundError:
        raise CliError(f"normalization config not found: {args.norm_config}", EXIT_INPUT) from None
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise CliError(f"{args.norm_config}: bad normalization config ({exc})", EXIT_INPUT) from None


def _costs(args) -> CostModel:
    try:
        return CostModel.parse(args.costs)
    except ValueError as exc:
        raise CliError(f"--costs: {exc}", EXIT_INPUT) from None


def _rules(args):
    for path in (args.rules, args.reduced_forms):
        if path and not Path(path).is_file():
            raise CliError(f"file not found: {path}", EXIT_INPUT)
    try:
        return load_ruleset(args.rules, args.reduced_forms)
    except RuleSyntaxError as exc:
        src = args.rules or "rules"
        raise CliError(f"{src}: {exc}", EXIT_RULES) from None


def _load_pair(args, cfg):
    out = []
    for path, fmt, version in (
        (args.ref, args.ref_format, args.ref_version),
        (args.hyp, args.hyp_format, args.hyp_version),
    ):
        p = Path(path)
        if not p.is_file():
            raise CliError(f"file not found: {path}", EXIT_INPUT)
        try:
            t = read_transcript(p, p.stem, version, fmt)
        except FormatError as exc:
            raise CliError(f"{path}: {exc}", EXIT_INPUT) from None
        out.append((t.key, tokenize_and_normalize(t, cfg)))
    return out


def _emit(args, data: bytes, filename: str) -> None:
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write(out_dir / filename, data, args.overwrite)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _write(path: Path, data: bytes, overwrite: bool) -> None:
    if path.exists() and not overwrite:
        raise CliError(f"{path} exists (use --overwrite)", EXIT_EXISTS)
    path.write_bytes(data)


def _check_format(fmt: str, allowed=("json", "csv", "text")) -> str:
    if fmt not in allowed:
        raise CliError(f"unknown --format {fmt!r} (expected one of {', '.join(allowed)})", EXIT_INPUT)
    return fmt


# ---------------------------------------------------------------- commands


def cmd_align(args) -> int:
    fmt = _check_format(args.format or "json", ("json", "text"))
    cfg, costs = _config(args), _costs(args)
    (rk, ref), (hk, hyp) = _load_pair(args, cfg)
    from .align import align

    try:
        a = align(ref, hyp, costs, ref_key=rk, hyp_key=hk)
    except AlignmentBudgetError as exc:
        raise CliError(str(exc), EXIT_BUDGET) from None
    if fmt == "json":
        _emit(args, alignment_to_json(a).encode("utf-8"), "alignment.json")
    else:
        lines = [f"cost {a.cost}"]
        for e in a.entries:
            r = ref[e.ref_index].norm if e.ref_index is not None else "*"
            h = hyp[e.hyp_index].norm if e.hyp_index is not None else "*"
            lines.append(f"{e.op.value:<5} {r}\t{h}")
        _emit(args, ("\n".join(lines) + "\n").encode("utf-8"), "alignment.txt")
    return 0


def cmd_wer(args) -> int:
    fmt = _check_format(args.format or "text", ("json", "text"))
    cfg, costs = _config(args), _costs(args)
    (rk, ref), (hk, hyp) = _load_pair(args, cfg)
    if not ref:
        raise CliError(f"{args.ref}: empty reference", EXIT_EMPTY_REF)
    from .align import align
    from .metrics import count_errors

    try:
        a = align(ref, hyp, costs, ref_key=rk, hyp_key=hk)
    except AlignmentBudgetError as exc:
        raise CliError(str(exc), EXIT_BUDGET) from None
    counts = count_errors(a)
    try:
        b = wer(counts)
    except UndefinedWERError:
        raise CliError(f"{args.ref}: empty reference", EXIT_EMPTY_REF) from None
    if fmt == "text":
        data = format_wer_line(b) + "\n"
    else:
        frag = counts.to_dict()
        frag.update({k: round(v, 6) for k, v in b.to_dict().items()})
        data = json.dumps(frag, indent=1) + "\n"
    _emit(args, data.encode("utf-8"), f"wer.{'json' if fmt == 'json' else 'txt'}")
    return 0


def cmd_categorize(args) -> int:
    fmt = _check_format(args.format or "json")
    cfg, costs = _config(args), _costs(args)
    rules = _rules(args)
    (rk, ref), (hk, hyp) = _load_pair(args, cfg)
    try:
        a, counts, att = compare(ref, hyp, rules, costs, rk, hk)
    except AlignmentBudgetError as exc:
        raise CliError(str(exc), EXIT_BUDGET) from None
    pr = build_pair_report([(counts, att)], rk[1], hk[1])
    if fmt == "json":
        doc = {
            "attribution": json.loads(att.to_json()),
            "pair_report": pair_to_dict(pr),
        }
        data = json.dumps(doc, indent=1, ensure_ascii=False) + "\n"
        _emit(args, data.encode("utf-8"), "categorize.json")
    elif fmt == "csv":
        _emit(args, render(build_matrix([pr]), "csv"), "categorize.csv")
    else:
        pcts = pr.category_pcts
        lines = [f"{pr.total_errors} differences"]
        lines += [f"{c.value:<16} {pcts[c]:5.1f}%" for c in REPORT_CATEGORIES]
        _emit(args, ("\n".join(lines) + "\n").encode("utf-8"), "categorize.txt")
    return 0


def _assumptions(cfg: NormalizationConfig, costs: CostModel) -> dict:
    return {
        "normalization": cfg.to_dict(),
        "costs": {"sub": costs.sub_cost, "ins": costs.ins_cost, "del": costs.del_cost},
        "wer_aggregation": "micro (counts summed over files)",
        "percentage_unit": "alignment entries",
        "summary_population": "unordered version pairs, both directions averaged; population sd",
    }


def cmd_matrix(args) -> int:
    formats = [f.strip() for f in (args.format or "json,csv,text").split(",") if f.strip()]
    for f in formats:
        _check_format(f)
    if not args.out:
        raise CliError("matrix needs --out DIR", EXIT_INPUT)
    cfg, costs = _config(args), _costs(args)
    rules = _rules(args)
    try:
        entries = load_manifest(args.manifest)
    except ManifestError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    out_dir = Path(args.out)
    names = [f"matrix.{ {'text': 'txt'}.get(f, f)}" for f in formats] + ["run_metadata.json"]
    if not args.overwrite:
        for n in names:
            if (out_dir / n).exists():
                raise CliError(f"{out_dir / n} exists (use --overwrite)", EXIT_EXISTS)
    assumptions = _assumptions(cfg, costs)
    try:
        m = run_matrix(entries, rules, cfg, costs, jobs=args.jobs, assumptions=assumptions)
    except FormatError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    except AlignmentBudgetError as exc:
        raise CliError(str(exc), EXIT_BUDGET) from None
    except NoSharedFilesError as exc:
        raise CliError(str(exc), EXIT_NO_SHARED) from None

    out_dir.mkdir(parents=True, exist_ok=True)
    for f, n in zip(formats, names):
        _write(out_dir / n, render(m, f), True)
    manifest_bytes = Path(args.manifest).read_bytes()
    meta = {
        "tool": "transcript-diffs",
        "tool_version": __version__,
        "manifest": Path(args.manifest).name,
        "manifest_sha256": hashlib.sha256(manifest_bytes).hexdigest(),
        "ruleset_sha256": rules.sha256,
        "rules": args.rules or "(shipped default)",
        "reduced_forms": args.reduced_forms or "(shipped default)",
        "n_rules": len(rules),
        "versions": list(m.versions),
        "files": sorted({e.file_id for e in entries}),
        "formats": formats,
        "assumptions": assumptions,
    }
    _write(out_dir / "run_metadata.json", (json.dumps(meta, indent=2, ensure_ascii=False) + "\n").encode("utf-8"), True)
    print(f"wrote {len(names)} file(s) to {out_dir}", file=sys.stderr)
    return 0


def _tokens_to_text(tokens, per_line: int = 15) -> str:
    words = [t.surface for t in tokens]
    lines = [" ".join(words[i:i + per_line]) for i in range(0, len(words), per_line)]
    return "\n".join(lines) + ("\n" if lines else "")


def cmd_synth(args) -> int:
    if not args.out:
        raise CliError("synth needs --out DIR", EXIT_INPUT)
    cfg = _config(args)
    rules = _rules(args)
    for path in (args.plan, args.base):
        if not Path(path).is_file():
            raise CliError(f"file not found: {path}", EXIT_INPUT)
    try:
        plan = json.loads(Path(args.plan).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.plan}: invalid JSON ({exc})", EXIT_INPUT) from None
    if not isinstance(plan, dict) or not all(isinstance(v, int) for v in plan.values()):
        raise CliError(f"{args.plan}: plan must map subtype names to integer counts", EXIT_INPUT)
    try:
        base = parse_plaintext(Path(args.base).read_bytes(), Path(args.base).stem, "original")
    except FormatError as exc:
        raise CliError(f"{args.base}: {exc}", EXIT_INPUT) from None
    tokens = tokenize_and_normalize(base, cfg)
    try:
        mutated, edits = inject_differences(tokens, plan, args.seed, cfg=cfg, reserved=rules.vocabulary())
    except CapacityError as exc:
        raise CliError(str(exc), EXIT_CAPACITY) from None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "original.txt": _tokens_to_text(tokens),
        "mutated.txt": _tokens_to_text(mutated),
        "ground_truth.json": ground_truth_to_json(edits, plan, args.seed),
    }
    if not args.overwrite:
        for name in files:
            if (out_dir / name).exists():
                raise CliError(f"{out_dir / name} exists (use --overwrite)", EXIT_EXISTS)
    for name, text in files.items():
        _write(out_dir / name, text.encode("utf-8"), True)
    return 0


COMMANDS = {
    "align": cmd_align,
    "wer": cmd_wer,
    "categorize": cmd_categorize,
    "matrix": cmd_matrix,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"transcript-diffs: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
