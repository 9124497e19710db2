"""Command line entry points: run the service, inspect prompts, and
analyze stored histories and event logs."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import analytics, history, structure
from .service.config import ServiceConfig


@click.group()
def main():
    """Persona feedback service and analysis tools."""


@main.command()
@click.option("--host", default=None, help="Listen address.")
@click.option("--port", type=int, default=None, help="Listen port.")
@click.option("--provider", type=click.Choice(["mock", "remote"]), default=None)
@click.option("--data-dir", type=click.Path(), default=None, help="State directory.")
@click.option("--few-shot", "few_shot", type=click.Path(exists=True), default=None,
              help="Few-shot example file (defaults to the shipped set).")
@click.option("--condense/--no-condense", default=None,
              help="Apply the conciseness second pass to generated feedback.")
@click.option("--dump-prompt", is_flag=True, default=None,
              help="Print each assembled prompt bundle to stderr.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file; CLI flags override it.")
@click.option("--remote-base-url", default=None, help="Base URL for the remote provider.")
def serve(host, port, provider, data_dir, few_shot, condense, dump_prompt,
          config_path, remote_base_url):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    overrides = {
        "host": host,
        "port": port,
        "provider": provider,
        "data_dir": data_dir,
        "few_shot_path": few_shot,
        "condense": condense,
        "dump_prompt": dump_prompt,
        "remote_base_url": remote_base_url,
    }
    if config_path:
        config = ServiceConfig.from_file(config_path, **overrides)
    else:
        defaults = ServiceConfig()
        config = ServiceConfig(**{
            k: (v if v is not None else getattr(defaults, k)) for k, v in overrides.items()
        })
    uvicorn.run(create_app(config), host=config.host, port=config.port)


@main.command("dump-prompt")
@click.option("--base-url", default="http://127.0.0.1:8787", show_default=True)
@click.option("--document-id", required=True)
@click.option("--persona-id", required=True)
@click.option("--start", type=int, required=True)
@click.option("--end", type=int, required=True)
def dump_prompt(base_url, document_id, persona_id, start, end):
    """Fetch the assembled prompt bundle from a running service."""
    import httpx

    resp = httpx.post(
        f"{base_url}/debug/prompt",
        json={
            "document_id": document_id,
            "persona_id": persona_id,
            "selection": {"start": start, "end": end},
        },
    )
    if resp.status_code != 200:
        click.echo(resp.text, err=True)
        sys.exit(1)
    click.echo(json.dumps(resp.json(), ensure_ascii=False, indent=2))


@main.command()
@click.argument("log_file", type=click.Path(exists=True))
@click.option("--final-text", type=click.Path(exists=True), default=None,
              help="Document text file for the final word count.")
def stats(log_file, final_text):
    """Session statistics from an event log file."""
    log = analytics.parse_log(Path(log_file).read_text(encoding="utf-8"))
    text = Path(final_text).read_text(encoding="utf-8") if final_text else None
    s = analytics.compute_stats(log, final_text=text)
    click.echo(json.dumps(s.__dict__, indent=2))


@main.command()
@click.argument("log_file", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Write JSON here instead of stdout.")
def timeline(log_file, out):
    """Focus timeline export (segments plus persona marks) from an event log."""
    log = analytics.parse_log(Path(log_file).read_text(encoding="utf-8"))
    t = analytics.focus_timeline(log)
    doc = {
        "segments": [s.__dict__ for s in t.segments],
        "persona_marks": list(t.persona_marks),
    }
    payload = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(payload, encoding="utf-8")
    else:
        click.echo(payload)


@main.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Write the report here instead of stdout.")
def analyze(path, out):
    """Segment and label feedback texts from a history file or a directory
    of card files."""
    p = Path(path)
    cards = []
    if p.is_dir():
        for f in sorted(p.glob("*.json")):
            cards.append(history.card_from_dict(json.loads(f.read_text(encoding="utf-8"))))
    else:
        cards = history.load(p.read_text(encoding="utf-8")).cards
    report = structure.report_to_dict(structure.analyze_corpus(cards))
    payload = json.dumps(report, indent=2)
    if out:
        Path(out).write_text(payload, encoding="utf-8")
    else:
        click.echo(payload)


if __name__ == "__main__":
    main()
