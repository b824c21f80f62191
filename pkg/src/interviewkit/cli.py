"""Command line entry points.

``interviewkit metrics eval`` scores one assessment/JD/resume triple;
``interviewkit metrics batch`` scores a directory of triples and prints an
aligned table (AA token/latent, CP token/latent, UX) plus corpus means;
``interviewkit serve`` runs the HTTP/WebSocket service.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ServiceConfig
from .errors import InterviewKitError
from .metrics.core import FeedbackEvent
from .metrics.report import compute_metric_report
from .tokenization import detect_language

BATCH_NOTE = (
    "NOTE: these scores describe only the supplied corpus. Benchmark tables "
    "published for proprietary hosted models with human raters cannot be "
    "reproduced by this tool; rerun it on your own transcripts instead."
)

TABLE_COLUMNS = ("aa_token", "aa_latent", "cp_token", "cp_latent", "ux")


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_feedback(path: str | None) -> list[FeedbackEvent] | None:
    if not path:
        return None
    values = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        FeedbackEvent(session_id="cli", exchange_index=i, value=int(v))
        for i, v in enumerate(values)
    ]


def _resolve_language(flag: str, *texts: str) -> str:
    if flag != "auto":
        return flag
    detected = detect_language(" ".join(texts))
    return detected if detected in ("en", "ja") else "en"


def _eval_row(
    assessment_path: str,
    jd_path: str,
    resume_path: str,
    language_flag: str,
    feedback_path: str | None,
) -> dict:
    assessment = _read_text(assessment_path)
    jd = _read_text(jd_path)
    resume = _read_text(resume_path)
    language = _resolve_language(language_flag, assessment, jd)
    report = compute_metric_report(
        assessment, jd, resume, language=language, events=_load_feedback(feedback_path)
    )
    return report.to_dict()


def _format_cell(value: float | None) -> str:
    return "    -" if value is None else f"{value:.4f}"


def _print_table(rows: list[dict], mean: dict | None, out=None) -> None:
    out = out if out is not None else sys.stdout
    name_width = max([len(r["name"]) for r in rows] + [4])
    header = f"{'name':<{name_width}}  lang  " + "  ".join(
        f"{c:>9}" for c in TABLE_COLUMNS
    )
    print(header, file=out)
    print("-" * len(header), file=out)
    for row in rows:
        cells = "  ".join(f"{_format_cell(row[c]):>9}" for c in TABLE_COLUMNS)
        print(f"{row['name']:<{name_width}}  {row['language']:<4}  {cells}", file=out)
    if mean is not None:
        print("-" * len(header), file=out)
        cells = "  ".join(f"{_format_cell(mean[c]):>9}" for c in TABLE_COLUMNS)
        print(f"{'mean':<{name_width}}        {cells}", file=out)
    print(BATCH_NOTE, file=out)


def _mean_row(rows: list[dict]) -> dict | None:
    if not rows:
        return None
    mean: dict = {}
    for column in TABLE_COLUMNS:
        values = [r[column] for r in rows if r[column] is not None]
        mean[column] = sum(values) / len(values) if values else None
    return mean


def _cmd_metrics_eval(args: argparse.Namespace) -> int:
    row = _eval_row(args.assessment, args.jd, args.resume, args.lang, args.feedback)
    payload = json.dumps(row, indent=2, ensure_ascii=False)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return 0


def _cmd_metrics_batch(args: argparse.Namespace) -> int:
    root = Path(args.dir)
    stems = sorted(p.name[: -len(".assessment.txt")] for p in root.glob("*.assessment.txt"))
    if not stems:
        print(f"no *.assessment.txt files under {root}", file=sys.stderr)
        return 2
    rows = []
    for stem in stems:
        jd = root / f"{stem}.jd.txt"
        resume = root / f"{stem}.resume.txt"
        if not jd.exists() or not resume.exists():
            print(f"skipping {stem}: incomplete triple", file=sys.stderr)
            continue
        feedback = root / f"{stem}.feedback.json"
        row = _eval_row(
            str(root / f"{stem}.assessment.txt"),
            str(jd),
            str(resume),
            args.lang,
            str(feedback) if feedback.exists() else None,
        )
        rows.append({"name": stem, **row})
    mean = _mean_row(rows)
    if args.out:
        payload = {
            "columns": list(TABLE_COLUMNS),
            "rows": rows,
            "mean": mean,
            "note": BATCH_NOTE,
        }
        Path(args.out).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    _print_table(rows, mean)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    config = ServiceConfig.from_yaml(args.config) if args.config else ServiceConfig()
    app = create_app(config, use_mock=args.mock)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="interviewkit")
    sub = parser.add_subparsers(dest="command", required=True)

    metrics = sub.add_parser("metrics", help="evaluation metrics over text corpora")
    metrics_sub = metrics.add_subparsers(dest="metrics_command", required=True)

    ev = metrics_sub.add_parser("eval", help="score one assessment/JD/resume triple")
    ev.add_argument("--assessment", required=True)
    ev.add_argument("--jd", required=True)
    ev.add_argument("--resume", required=True)
    ev.add_argument("--lang", default="auto", choices=("en", "ja", "auto"))
    ev.add_argument("--feedback", default=None, help="JSON file with +1/-1 ratings")
    ev.add_argument("--out", default=None)
    ev.set_defaults(func=_cmd_metrics_eval)

    batch = metrics_sub.add_parser(
        "batch", help="score every <name>.{assessment,jd,resume}.txt triple in a directory"
    )
    batch.add_argument("--dir", required=True)
    batch.add_argument("--lang", default="auto", choices=("en", "ja", "auto"))
    batch.add_argument("--out", default=None)
    batch.set_defaults(func=_cmd_metrics_batch)

    serve = sub.add_parser("serve", help="run the HTTP/WebSocket service")
    serve.add_argument("--config", default=None)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument(
        "--mock",
        action="store_true",
        help="use the deterministic in-process LLM/embedding/media providers",
    )
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, InterviewKitError) as exc:
        # bad paths or malformed inputs get a message, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
