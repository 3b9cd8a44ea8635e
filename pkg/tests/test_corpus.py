import json

import pytest

from transcript_diffs.corpus import (
    FormatError,
    NormalizationConfig,
    Transcript,
    Utterance,
    load_norm_config,
    normalize_word,
    parse_coraal_tsv,
    parse_plaintext,
    read_transcript,
    tokenize_and_normalize,
    tokens_from_words,
)

CFG = NormalizationConfig()


def norms(text, cfg=None):
    return [t.norm for t in tokens_from_words(text, cfg)]


def test_plaintext_speaker_prefix_and_unknown():
    t = parse_plaintext(b"SPK1:\thello there\n\nno prefix here\n", "f", "v")
    assert [u.speaker for u in t.utterances] == ["SPK1", "UNK"]
    assert t.utterances[0].raw_text == "hello there"
    assert t.key == ("f", "v")


def test_plaintext_colon_inside_text_is_not_a_speaker():
    t = parse_plaintext(b"time: noon\n", "f", "v")
    assert t.utterances[0].speaker == "UNK"


def test_plaintext_bad_encoding():
    with pytest.raises(FormatError):
        parse_plaintext(b"\xff\xfe\xfa bad", "f", "v")


CORAAL = (
    "Line\tSpkr\tStTime\tContent\tEnTime\n"
    "2\tDCB_int_01\t3.5\tyeah um\t4.0\n"
    "1\tDCB_se1_ag1_f_01\t0.25\tshe tall (laugh)\t3.1\n"
)


def test_coraal_rows_sorted_by_line_with_times():
    t = parse_coraal_tsv(CORAAL.encode(), "DCB_se1", "coraal")
    assert [u.speaker for u in t.utterances] == ["DCB_se1_ag1_f_01", "DCB_int_01"]
    assert t.utterances[0].start_s == 0.25 and t.utterances[0].end_s == 3.1
    assert norms_of(t) == ["she", "tall", "yeah", "um"]


def norms_of(t, cfg=None):
    return [tok.norm for tok in tokenize_and_normalize(t, cfg)]


def test_coraal_missing_column():
    with pytest.raises(FormatError, match="missing column EnTime"):
        parse_coraal_tsv(b"Line\tSpkr\tStTime\tContent\n1\ta\t0\thi\n", "f", "v")


def test_coraal_bad_time_names_row():
    bad = "Line\tSpkr\tStTime\tContent\tEnTime\n1\ta\tsoon\thi\t2\n"
    with pytest.raises(FormatError, match="row 2") as exc:
        parse_coraal_tsv(bad.encode(), "f", "v")
    assert exc.value.row == 2


def test_coraal_start_after_end_rejected():
    bad = "Line\tSpkr\tStTime\tContent\tEnTime\n1\ta\t5\thi\t2\n"
    with pytest.raises(FormatError):
        parse_coraal_tsv(bad.encode(), "f", "v")


def test_utterance_time_order():
    with pytest.raises(ValueError):
        Utterance("a", "x", 2.0, 1.0)


def test_read_transcript_auto_format(tmp_path):
    p = tmp_path / "x.tsv"
    p.write_text(CORAAL)
    assert len(read_transcript(p, "x", "v").utterances) == 2
    q = tmp_path / "x.txt"
    q.write_text("a:\thi\n")
    assert read_transcript(q, "x", "v").utterances[0].speaker == "a"
    with pytest.raises(FormatError):
        read_transcript(q, "x", "v", fmt="docx")


@pytest.mark.parametrize(
    "word, expected",
    [
        ("Hello,", "hello"),
        ("\"she'll\"", "she'll"),
        ("you-", "you-"),
        ("well--", "well"),
        ("-", ""),
        ("...", ""),
        ("'cause", "'cause"),
        ("(okay)", "okay"),
        ("mm-hmm.", "mm-hmm"),
    ],
)
def test_normalize_word(word, expected):
    assert normalize_word(word, CFG) == expected


def test_token_flags():
    toks = tokens_from_words("Um, I- I went [laughter] there")
    assert [t.norm for t in toks] == ["um", "i-", "i", "went", "there"]
    assert toks[0].is_filler and not toks[2].is_filler
    assert toks[1].is_restart_fragment
    assert [t.index for t in toks] == list(range(5))


def test_nonspeech_tags_kept_as_single_token():
    cfg = NormalizationConfig(drop_nonspeech_tags=False)
    toks = tokens_from_words("yes <Background Noise> no", cfg)
    assert [t.norm for t in toks] == ["yes", "<background_noise>", "no"]
    assert toks[1].is_nonspeech_tag


def test_apostrophe_never_stripped():
    cfg = NormalizationConfig(strip_punctuation=frozenset("',."))
    assert norms("don't.", cfg) == ["don't"]


def test_case_preserved_when_configured():
    assert norms("She Said", NormalizationConfig(lowercase=False)) == ["She", "Said"]


def test_load_norm_config(tmp_path):
    p = tmp_path / "norm.json"
    p.write_text(json.dumps({"filler_lexicon": ["Like"], "drop_nonspeech_tags": False}))
    cfg = load_norm_config(p)
    assert cfg.filler_lexicon == frozenset({"like"})
    assert not cfg.drop_nonspeech_tags and cfg.lowercase
    assert cfg.to_dict()["filler_lexicon"] == ["like"]


def test_transcript_is_immutable():
    t = Transcript("f", "v", ())
    with pytest.raises(AttributeError):
        t.file_id = "g"
