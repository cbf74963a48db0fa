"""Command-line front door.

Each command drives the HTTP service in-process, so CLI behavior and API
behavior cannot drift: ``--json`` output is the exact payload bytes the
service produced. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import sys
import time
from dataclasses import replace
from pathlib import Path

import click

from .api import create_app
from .config import ServiceConfig, load_config
from .errors import ScribeViewError
from .store import media_type_for

POLL_LIMIT = 600
POLL_INTERVAL = 0.2


def _make_client(cfg: ServiceConfig):
    import warnings

    with warnings.catch_warnings():
        # the bundled test client announces its own deprecation on import
        warnings.simplefilter("ignore", Warning)
        from fastapi.testclient import TestClient

    try:
        return TestClient(create_app(cfg), raise_server_exceptions=False)
    except ScribeViewError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from exc


def _check(resp) -> bytes:
    if resp.status_code >= 400:
        try:
            body = resp.json()
            message = f"{body.get('code', 'error')}: {body.get('message', '')}"
            if body.get("detail"):
                message += f" ({body['detail']})"
        except ValueError:
            message = f"HTTP {resp.status_code}"
        raise click.ClickException(message)
    return resp.content


def _emit_json(data: bytes) -> None:
    # exact payload bytes, no decoration, so output matches the API response
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="Path to a TOML config file (default: ./scribeview.toml if present).")
@click.option("--data-dir", default=None, help="Override the configured data directory.")
@click.pass_context
def main(ctx, config_path, data_dir):
    """Inspect and search speech transcripts by word confidence."""
    try:
        cfg = load_config(config_path)
    except ScribeViewError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from exc
    if data_dir:
        cfg = replace(cfg, data_dir=data_dir)
    ctx.obj = cfg


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--stub-dir", default=None,
              help="Serve transcription results from this local directory instead of the cloud.")
@click.option("--language", default="en-US", show_default=True)
@click.option("--max-speakers", default=10, type=int, show_default=True)
@click.pass_obj
def ingest(cfg: ServiceConfig, path, stub_dir, language, max_speakers):
    """Ingest a vendor JSON result, or submit audio for transcription."""
    if stub_dir:
        cfg = replace(cfg, backend="stub", stub_dir=stub_dir)
    client = _make_client(cfg)
    src = Path(path)
    if src.suffix.lower() == ".json":
        resp = client.post(
            "/v1/transcripts",
            content=src.read_bytes(),
            headers={"content-type": "application/json"},
        )
        _check(resp)
        body = resp.json()
        state = "created" if body["created"] else "already present"
        click.echo(f"transcript {body['transcript_id']} revision {body['revision']} ({state})")
        return
    with src.open("rb") as fh:
        resp = client.post(
            "/v1/jobs",
            files={"file": (src.name, fh, media_type_for(src))},
            data={"language_code": language, "max_speakers": str(max_speakers)},
        )
    _check(resp)
    job_id = resp.json()["job_id"]
    click.echo(f"job {job_id} submitted")
    for _ in range(POLL_LIMIT):
        resp = client.get(f"/v1/jobs/{job_id}")
        _check(resp)
        body = resp.json()
        if body["state"] == "completed":
            click.echo(f"transcript {body['transcript_id']} ready")
            return
        if body["state"] == "failed":
            raise click.ClickException(f"transcription failed: {body.get('failure_reason')}")
        time.sleep(POLL_INTERVAL)
    raise click.ClickException("timed out waiting for transcription")


@main.command(name="list")
@click.option("--json", "as_json", is_flag=True, help="Emit the raw API payload.")
@click.pass_obj
def list_transcripts(cfg: ServiceConfig, as_json):
    """List stored transcripts."""
    resp = _make_client(cfg).get("/v1/transcripts")
    data = _check(resp)
    if as_json:
        _emit_json(data)
        return
    entries = resp.json()["transcripts"]
    if not entries:
        click.echo("no transcripts")
        return
    for t in entries:
        click.echo(
            f"{t['id']}  rev {t['revision']}  {t['segments']} segments"
            f"  {t['duration']:.2f}s  {t['speakers']} speaker(s)"
        )


@main.command()
@click.argument("transcript_id")
@click.option("--json", "as_json", is_flag=True, help="Emit the raw API payload.")
@click.pass_obj
def stats(cfg: ServiceConfig, transcript_id, as_json):
    """Confidence statistics for one transcript."""
    resp = _make_client(cfg).get(f"/v1/transcripts/{transcript_id}/stats")
    data = _check(resp)
    if as_json:
        _emit_json(data)
        return
    b = resp.json()
    click.echo(f"transcript {b['transcript_id']} revision {b['revision']}")
    click.echo(
        f"{b['segments']} segments, {b['pronunciation_tokens']} words,"
        f" {b['punctuation_tokens']} punctuation, {b['duration']:.2f}s"
    )
    click.echo(f"speakers: {', '.join(b['speakers'])}")
    click.echo(f"mean confidence: {b['global_mean']:.4f}")
    for i, mean in enumerate(b["segment_means"]):
        low = "  (low)" if i in b["low_confidence_segments"] else ""
        click.echo(f"  line {i + 1}: {mean:.4f}{low}")


@main.command()
@click.argument("transcript_id")
@click.argument("term")
@click.option("--mode", type=click.Choice(["token-exact", "prefix"]), default="token-exact",
              show_default=True)
@click.option("--case-sensitive", is_flag=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the raw API payload.")
@click.pass_obj
def search(cfg: ServiceConfig, transcript_id, term, mode, case_sensitive, as_json):
    """Find a word and report each instance with its confidence."""
    if not term.strip():
        raise click.UsageError("search term must be non-empty")
    resp = _make_client(cfg).get(
        f"/v1/transcripts/{transcript_id}/search",
        params={"q": term, "mode": mode, "case": case_sensitive},
    )
    data = _check(resp)
    if as_json:
        _emit_json(data)
        return
    b = resp.json()
    for h in b["hits"]:
        click.echo(
            f"({h['segment_index']},{h['token_index']}) {h['content']}  {h['confidence']:.2f}"
        )
    if b["hits"]:
        click.echo(f"{len(b['hits'])} hit(s), keyword confidence {b['keyword_confidence']:.2f}")
    else:
        click.echo("no matches")


@main.command()
@click.argument("transcript_id")
@click.argument("term")
@click.option("--dir", "direction", type=click.Choice(["following", "preceding"]),
              default="following", show_default=True)
@click.option("--depth", type=int, default=5, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the raw API payload.")
@click.pass_obj
def wordtree(cfg: ServiceConfig, transcript_id, term, direction, depth, as_json):
    """Render the context word tree for a keyword."""
    if not term.strip():
        raise click.UsageError("search term must be non-empty")
    resp = _make_client(cfg).get(
        f"/v1/transcripts/{transcript_id}/wordtree",
        params={"q": term, "dir": direction, "depth": depth},
    )
    data = _check(resp)
    if as_json:
        _emit_json(data)
        return

    def render(node, indent=0):
        click.echo(f"{'  ' * indent}{node['word']} ({node['count']})")
        for child in node["children"]:
            render(child, indent + 1)

    render(resp.json()["tree"])


@main.command()
@click.argument("transcript_id")
@click.argument("out_path", type=click.Path(dir_okay=False, writable=True))
@click.pass_obj
def export(cfg: ServiceConfig, transcript_id, out_path):
    """Write the transcript document to a file."""
    data = _check(_make_client(cfg).get(f"/v1/transcripts/{transcript_id}"))
    Path(out_path).write_bytes(data)
    click.echo(f"wrote {len(data)} bytes to {out_path}")


@main.command()
@click.option("--host", default=None, help="Bind address (default from config).")
@click.option("--port", default=None, type=int, help="Port (default from config).")
@click.pass_obj
def serve(cfg: ServiceConfig, host, port):
    """Run the HTTP service."""
    import uvicorn

    cfg = replace(cfg, host=host or cfg.host, port=port or cfg.port)
    try:
        app = create_app(cfg)
    except ScribeViewError as exc:
        raise click.ClickException(f"{exc.code}: {exc}") from exc
    uvicorn.run(app, host=cfg.host, port=cfg.port)


if __name__ == "__main__":
    main()
