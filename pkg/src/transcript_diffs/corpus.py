"""Transcript ingestion, tokenization and normalization.

Two input formats are understood: plain text (one utterance per line, with an
optional ``SPEAKER:<tab>`` prefix) and CORAAL-style TSV.  Every transcript is
flattened into a single token stream before alignment; speaker labels and
timestamps are carried along but never constrain anything downstream.
"""
from __future__ import annotations

import csv
import io
import json
import re
import string
from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, Sequence

__all__ = [
    "DEFAULT_FILLERS",
    "FormatError",
    "NormalizationConfig",
    "Token",
    "Transcript",
    "Utterance",
    "load_norm_config",
    "normalize_word",
    "parse_coraal_tsv",
    "parse_plaintext",
    "read_transcript",
    "tokenize_and_normalize",
    "tokens_from_words",
]

DEFAULT_FILLERS = frozenset(
    {"uh", "um", "er", "ah", "eh", "hm", "hmm", "mm", "mhm", "mm-hmm", "uh-huh", "huh"}
)

# apostrophes and hyphens are handled separately and never edge-stripped here
DEFAULT_STRIP = "".join(c for c in string.punctuation if c not in "'-") + "“”…"

CORAAL_COLUMNS = ("Line", "Spkr", "StTime", "Content", "EnTime")


class FormatError(ValueError):
    """Input file does not conform to its declared format."""

    def __init__(self, message: str, *, offset: int | None = None, row: int | None = None):
        super().__init__(message)
        self.offset = offset
        self.row = row


@dataclass(frozen=True)
class Utterance:
    speaker: str
    raw_text: str
    start_s: float | None = None
    end_s: float | None = None

    def __post_init__(self):
        if self.start_s is not None and self.end_s is not None and self.start_s > self.end_s:
            raise ValueError(f"utterance starts after it ends ({self.start_s} > {self.end_s})")


@dataclass(frozen=True)
class Transcript:
    file_id: str
    version_id: str
    utterances: tuple[Utterance, ...] = ()

    @property
    def key(self) -> tuple[str, str]:
        return (self.file_id, self.version_id)


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str
    index: int
    is_filler: bool = False
    is_restart_fragment: bool = False
    is_nonspeech_tag: bool = False


@dataclass(frozen=True)
class NormalizationConfig:
    lowercase: bool = True
    strip_punctuation: frozenset[str] = field(default_factory=lambda: frozenset(DEFAULT_STRIP))
    drop_nonspeech_tags: bool = True
    tag_delimiters: tuple[tuple[str, str], ...] = (("[", "]"), ("(", ")"), ("<", ">"), ("{", "}"))
    filler_lexicon: frozenset[str] = DEFAULT_FILLERS

    def __post_init__(self):
        # apostrophes are load-bearing for contractions; never strip them
        object.__setattr__(self, "strip_punctuation", frozenset(self.strip_punctuation) - {"'"})
        object.__setattr__(
            self, "filler_lexicon", frozenset(normalize_word(w, self) for w in self.filler_lexicon)
        )

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "strip_punctuation": "".join(sorted(self.strip_punctuation)),
            "drop_nonspeech_tags": self.drop_nonspeech_tags,
            "tag_delimiters": [list(p) for p in self.tag_delimiters],
            "filler_lexicon": sorted(self.filler_lexicon),
        }


def load_norm_config(path: str | Path) -> NormalizationConfig:
    """Read a JSON normalization config; absent keys take their defaults."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    kwargs = {}
    if "lowercase" in data:
        kwargs["lowercase"] = bool(data["lowercase"])
    if "strip_punctuation" in data:
        kwargs["strip_punctuation"] = frozenset(data["strip_punctuation"])
    if "drop_nonspeech_tags" in data:
        kwargs["drop_nonspeech_tags"] = bool(data["drop_nonspeech_tags"])
    if "tag_delimiters" in data:
        kwargs["tag_delimiters"] = tuple((p[0], p[1]) for p in data["tag_delimiters"])
    if "filler_lexicon" in data:
        kwargs["filler_lexicon"] = frozenset(data["filler_lexicon"])
    return NormalizationConfig(**kwargs)


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"invalid UTF-8 at byte offset {exc.start}", offset=exc.start) from None


_SPEAKER_PREFIX = re.compile(r"^([^\t]+?):\t(.*)$")


def parse_plaintext(data: bytes, file_id: str, version_id: str) -> Transcript:
    text = _decode(data)
    utterances = []
    for line in text.splitlines():
        if not line.strip():
            continue
        m = _SPEAKER_PREFIX.match(line)
        if m:
            utterances.append(Utterance(speaker=m.group(1).strip(), raw_text=m.group(2)))
        else:
            utterances.append(Utterance(speaker="UNK", raw_text=line))
    return Transcript(file_id, version_id, tuple(utterances))


def _parse_time(value: str, column: str, row: int) -> float | None:
    value = value.strip()
    if not value:
        return None
    try:
        return float(Decimal(value))
    except InvalidOperation:
        raise FormatError(f"row {row}: unparseable {column} {value!r}", row=row) from None


def parse_coraal_tsv(data: bytes, file_id: str, version_id: str) -> Transcript:
    text = _decode(data)
    reader = csv.reader(io.StringIO(text), delimiter="\t", quoting=csv.QUOTE_NONE)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"missing column {CORAAL_COLUMNS[0]}") from None
    header = [h.strip() for h in header]
    for col in CORAAL_COLUMNS:
        if col not in header:
            raise FormatError(f"missing column {col}")
    pos = {col: header.index(col) for col in CORAAL_COLUMNS}

    rows = []
    for rownum, fields in enumerate(reader, start=2):
        if not any(f.strip() for f in fields):
            continue
        if len(fields) < len(header):
            fields = fields + [""] * (len(header) - len(fields))
        try:
            line_no = int(fields[pos["Line"]])
        except ValueError:
            raise FormatError(f"row {rownum}: unparseable Line {fields[pos['Line']]!r}", row=rownum) from None
        start = _parse_time(fields[pos["StTime"]], "StTime", rownum)
        end = _parse_time(fields[pos["EnTime"]], "EnTime", rownum)
        try:
            utt = Utterance(
                speaker=fields[pos["Spkr"]].strip(),
                raw_text=fields[pos["Content"]],
                start_s=start,
                end_s=end,
            )
        except ValueError as exc:
            raise FormatError(f"row {rownum}: {exc}", row=rownum) from None
        rows.append((line_no, rownum, utt))
    rows.sort(key=lambda r: (r[0], r[1]))
    return Transcript(file_id, version_id, tuple(u for _, _, u in rows))


def read_transcript(path: str | Path, file_id: str, version_id: str, fmt: str = "auto") -> Transcript:
    """Load a transcript from disk. ``fmt`` is ``plain``, ``coraal`` or ``auto`` (by extension)."""
    path = Path(path)
    if fmt == "auto":
        fmt = "coraal" if path.suffix.lower() in (".tsv", ".coraal") else "plain"
    data = path.read_bytes()
    if fmt == "coraal":
        return parse_coraal_tsv(data, file_id, version_id)
    if fmt in ("plain", "plaintext", "txt"):
        return parse_plaintext(data, file_id, version_id)
    raise FormatError(f"unknown transcript format {fmt!r}")


def normalize_word(word: str, cfg: NormalizationConfig) -> str:
    """Normalize a single whitespace-free unit; returns "" if nothing survives."""
    strip = cfg.strip_punctuation
    start, end = 0, len(word)
    changed = True
    while changed and start < end:
        changed = False
        while start < end and (word[start] in strip or word[start] == "-"):
            start += 1
            changed = True
        while start < end and word[end - 1] in strip:
            end -= 1
            changed = True
        # a run of two or more trailing hyphens is a dash, not a restart marker
        if end - start >= 2 and word[end - 1] == "-" and word[end - 2] == "-":
            while start < end and word[end - 1] == "-":
                end -= 1
            changed = True
    w = word[start:end]
    if cfg.lowercase:
        w = w.lower()
    if not w.strip("'-"):
        return ""
    return w


def _tag_pattern(cfg: NormalizationConfig) -> re.Pattern | None:
    if not cfg.tag_delimiters:
        return None
    alts = [
        re.escape(o) + r"[^" + re.escape(o + c) + r"]*" + re.escape(c)
        for o, c in cfg.tag_delimiters
    ]
    return re.compile("|".join(alts))


def tokenize_and_normalize(t: Transcript, cfg: NormalizationConfig | None = None) -> list[Token]:
    cfg = cfg or NormalizationConfig()
    tags = _tag_pattern(cfg)
    out: list[Token] = []
    for utt in t.utterances:
        for unit, is_tag in _units(utt.raw_text, tags):
            if is_tag:
                if cfg.drop_nonspeech_tags:
                    continue
                norm = "_".join(unit.split())
                if cfg.lowercase:
                    norm = norm.lower()
                out.append(Token(surface=unit, norm=norm, index=len(out), is_nonspeech_tag=True))
                continue
            norm = normalize_word(unit, cfg)
            if not norm:
                continue
            out.append(_make_token(unit, norm, len(out), cfg))
    return out


def _units(text: str, tags: re.Pattern | None) -> Iterable[tuple[str, bool]]:
    pos = 0
    if tags is not None:
        for m in tags.finditer(text):
            for w in text[pos:m.start()].split():
                yield w, False
            yield m.group(0), True
            pos = m.end()
    for w in text[pos:].split():
        yield w, False


def _make_token(surface: str, norm: str, index: int, cfg: NormalizationConfig) -> Token:
    return Token(
        surface=surface,
        norm=norm,
        index=index,
        is_filler=norm in cfg.filler_lexicon,
        is_restart_fragment=norm.endswith("-") and not norm.endswith("--"),
    )


def tokens_from_words(words: Sequence[str] | str, cfg: NormalizationConfig | None = None) -> list[Token]:
    """Shortcut for tests and the API: tokenize a bare word list or string."""
    if isinstance(words, str):
        text = words
    else:
        text = " ".join(words)
    return tokenize_and_normalize(Transcript("", "", (Utterance("UNK", text),)), cfg)


def reindex(tokens: Iterable[Token]) -> list[Token]:
    return [replace(tok, index=i) for i, tok in enumerate(tokens)]
