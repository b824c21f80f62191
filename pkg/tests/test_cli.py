"""CLI behavior: metrics eval/batch output shapes and the serve parser."""
import json

import pytest

from conftest import JD_TEXT, RESUME_TEXT
from interviewkit.cli import BATCH_NOTE, TABLE_COLUMNS, build_parser, main
from interviewkit.metrics.core import FeedbackEvent
from interviewkit.metrics.report import compute_metric_report

ASSESSMENT_TEXT = (
    "The candidate brings strong Kubernetes, Terraform, and Python experience "
    "with a record of leading incident response and mentoring engineers, which "
    "matches the infrastructure role requirements closely."
)


def _write_triple(root, stem, assessment=ASSESSMENT_TEXT, jd=JD_TEXT,
                  resume=RESUME_TEXT, feedback=None):
    (root / f"{stem}.assessment.txt").write_text(assessment, encoding="utf-8")
    (root / f"{stem}.jd.txt").write_text(jd, encoding="utf-8")
    (root / f"{stem}.resume.txt").write_text(resume, encoding="utf-8")
    if feedback is not None:
        (root / f"{stem}.feedback.json").write_text(json.dumps(feedback), encoding="utf-8")


def _eval_args(root, stem, *extra):
    return [
        "metrics", "eval",
        "--assessment", str(root / f"{stem}.assessment.txt"),
        "--jd", str(root / f"{stem}.jd.txt"),
        "--resume", str(root / f"{stem}.resume.txt"),
        *extra,
    ]


# ---------------------------------------------------------------- eval


def test_eval_prints_metric_row(tmp_path, capsys):
    _write_triple(tmp_path, "case")
    assert main(_eval_args(tmp_path, "case")) == 0
    row = json.loads(capsys.readouterr().out)

    expected = compute_metric_report(
        ASSESSMENT_TEXT, JD_TEXT, RESUME_TEXT, language="en"
    ).to_dict()
    assert row == expected
    assert row["ux"] is None
    assert row["language"] == "en"


def test_eval_with_feedback(tmp_path, capsys):
    _write_triple(tmp_path, "case", feedback=[1, -1, 1])
    feedback_path = str(tmp_path / "case.feedback.json")
    assert main(_eval_args(tmp_path, "case", "--feedback", feedback_path)) == 0
    row = json.loads(capsys.readouterr().out)

    events = [FeedbackEvent("cli", i, v) for i, v in enumerate([1, -1, 1])]
    expected = compute_metric_report(
        ASSESSMENT_TEXT, JD_TEXT, RESUME_TEXT, language="en", events=events
    ).to_dict()
    assert row == expected
    assert row["ux"] == pytest.approx(1 / 3)


def test_eval_writes_out_file(tmp_path, capsys):
    _write_triple(tmp_path, "case")
    out = tmp_path / "row.json"
    assert main(_eval_args(tmp_path, "case", "--out", str(out))) == 0
    printed = json.loads(capsys.readouterr().out)
    assert json.loads(out.read_text(encoding="utf-8")) == printed


def test_eval_detects_japanese(tmp_path, capsys):
    _write_triple(
        tmp_path, "ja",
        assessment="候補者は分散システムの設計経験が豊富で要件に合致します。",
        jd="分散システムの設計経験があるエンジニアを探しています。",
        resume="私はソフトウェアエンジニアです。分散システムを設計します。",
    )
    assert main(_eval_args(tmp_path, "ja")) == 0
    assert json.loads(capsys.readouterr().out)["language"] == "ja"


def test_eval_lang_flag_overrides_detection(tmp_path, capsys):
    _write_triple(
        tmp_path, "ja",
        assessment="候補者は要件に合致します。",
        jd="エンジニアを探しています。",
        resume="私はエンジニアです。",
    )
    assert main(_eval_args(tmp_path, "ja", "--lang", "en")) == 0
    assert json.loads(capsys.readouterr().out)["language"] == "en"


def test_eval_rejects_unknown_language(tmp_path):
    _write_triple(tmp_path, "case")
    with pytest.raises(SystemExit):
        main(_eval_args(tmp_path, "case", "--lang", "de"))


# ---------------------------------------------------------------- batch


def test_batch_prints_aligned_table_with_means(tmp_path, capsys):
    _write_triple(tmp_path, "alpha", feedback=[1, 1, -1, 1])
    _write_triple(
        tmp_path, "beta",
        assessment="A brief note about typography and layout.",
    )
    assert main(["metrics", "batch", "--dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()

    header = lines[0]
    for column in TABLE_COLUMNS:
        assert column in header
    table_lines = [ln for ln in lines if ln and not ln.startswith("NOTE")]
    assert len({len(ln) for ln in table_lines}) == 1   # aligned columns

    alpha_line = next(ln for ln in lines if ln.startswith("alpha"))
    beta_line = next(ln for ln in lines if ln.startswith("beta"))
    mean_line = next(ln for ln in lines if ln.startswith("mean"))
    assert lines.index(alpha_line) < lines.index(beta_line) < lines.index(mean_line)

    alpha = compute_metric_report(ASSESSMENT_TEXT, JD_TEXT, RESUME_TEXT, language="en")
    assert f"{alpha.aa_token:.4f}" in alpha_line
    assert f"{(1 + 1 - 1 + 1) / 4:.4f}" in alpha_line
    assert "    -" in beta_line            # no feedback file, ux stays blank
    assert f"{0.5:.4f}" in mean_line       # ux mean over the one rated corpus
    assert BATCH_NOTE in out
    assert "cannot be reproduced" in out


def test_batch_writes_json_report(tmp_path, capsys):
    _write_triple(tmp_path, "alpha")
    out_path = tmp_path / "report.json"
    assert main(["metrics", "batch", "--dir", str(tmp_path), "--out", str(out_path)]) == 0
    capsys.readouterr()

    payload = json.loads(out_path.read_text(encoding="utf-8"))
    assert payload["columns"] == list(TABLE_COLUMNS)
    assert payload["note"] == BATCH_NOTE
    assert [r["name"] for r in payload["rows"]] == ["alpha"]
    row = payload["rows"][0]
    for column in TABLE_COLUMNS[:-1]:
        assert payload["mean"][column] == row[column]
    assert payload["mean"]["ux"] is None


def test_batch_empty_directory_fails(tmp_path, capsys):
    assert main(["metrics", "batch", "--dir", str(tmp_path)]) == 2
    assert "no *.assessment.txt" in capsys.readouterr().err


def test_batch_skips_incomplete_triples(tmp_path, capsys):
    _write_triple(tmp_path, "whole")
    (tmp_path / "broken.assessment.txt").write_text("text", encoding="utf-8")
    assert main(["metrics", "batch", "--dir", str(tmp_path)]) == 0
    captured = capsys.readouterr()
    assert "skipping broken" in captured.err
    assert "whole" in captured.out
    assert "broken" not in captured.out


# ---------------------------------------------------------------- bad inputs


def test_eval_missing_file_reports_error(tmp_path, capsys):
    _write_triple(tmp_path, "case")
    args = _eval_args(tmp_path, "case")
    args[args.index("--resume") + 1] = str(tmp_path / "nope.txt")
    assert main(args) == 2
    assert "error:" in capsys.readouterr().err


def test_eval_malformed_feedback_reports_error(tmp_path, capsys):
    _write_triple(tmp_path, "case")
    bad = tmp_path / "case.feedback.json"
    bad.write_text("1\n1\n-1\n", encoding="utf-8")
    assert main(_eval_args(tmp_path, "case", "--feedback", str(bad))) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------- serve parser


def test_serve_parser_defaults():
    args = build_parser().parse_args(["serve", "--mock"])
    assert args.mock is True
    assert args.host == "127.0.0.1"
    assert args.port == 8000
    assert args.config is None


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])
