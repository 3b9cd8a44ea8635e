"""Regenerate tests/fixtures/corpus/, the bundled multi-version synthetic corpus.

The base text is cut into three files.  Version ``v0`` is the untouched text;
``v1`` and ``v2`` apply differently seeded injection plans, and ``v2`` only
covers two of the three files so that the matrix has an uneven file count.
"""
import json
import sys
from pathlib import Path

from transcript_diffs.corpus import parse_plaintext, tokens_from_words
from transcript_diffs.hypotheses import load_ruleset
from transcript_diffs.synth import inject_differences

ROOT = Path(__file__).resolve().parents[1]
BASE = ROOT / "tests" / "fixtures" / "base_text.txt"
OUT = ROOT / "tests" / "fixtures" / "corpus"

PLANS = {
    "v1": {"filler_insertions": 3, "filler_deletions": 1, "contraction_swaps": 2, "copula_deletions": 1},
    "v2": {"restart_insertions": 2, "reduced_form_swaps": 2, "was_were": 1, "repetition_insertions": 1},
}
FILES = ("f1", "f2", "f3")
V2_FILES = ("f1", "f3")


def words_to_text(words, per_line=12):
    return "\n".join(" ".join(words[i:i + per_line]) for i in range(0, len(words), per_line)) + "\n"


def main():
    lines = BASE.read_text(encoding="utf-8").splitlines()
    chunk = len(lines) // len(FILES)
    reserved = load_ruleset().vocabulary()
    OUT.mkdir(parents=True, exist_ok=True)
    manifest = []
    for k, fid in enumerate(FILES):
        text = "\n".join(lines[k * chunk:(k + 1) * chunk]) + "\n"
        t = parse_plaintext(text.encode("utf-8"), fid, "v0")
        words = [w for u in t.utterances for w in u.raw_text.split()]
        tokens = tokens_from_words(words)
        versions = {"v0": [tok.surface for tok in tokens]}
        for v, plan in PLANS.items():
            if v == "v2" and fid not in V2_FILES:
                continue
            mutated, _ = inject_differences(tokens, plan, seed=100 * k + int(v[1:]), reserved=reserved)
            versions[v] = [tok.surface for tok in mutated]
        for v, ws in versions.items():
            name = f"{fid}.{v}.txt"
            (OUT / name).write_text(words_to_text(ws), encoding="utf-8")
            manifest.append({"file_id": fid, "version_id": v, "path": name, "format": "plain"})
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(manifest)} transcripts to {OUT}", file=sys.stderr)


if __name__ == "__main__":
    main()
