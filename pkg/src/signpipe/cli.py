"""Command-line entry point wiring the whole pipeline.

Data goes to stdout or files (written atomically); logs and machine-readable
errors go to stderr. Every subcommand is reproducible: identical inputs and
flags produce identical bytes, with the chat path requiring ``--offline`` and
a primed cache. Settings resolve as flags > environment > config file >
bundled defaults.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

import click

from . import __version__
from .errors import MalformedDocument, SignpipeError
from .gloss import GlossSequence, normalize, validate_sequence
from .llm import (
    ENDPOINT_ENV,
    LlmRequestConfig,
    LlmTranslator,
    ManualTranslator,
    TranslationCache,
)
from .manifest import CompoundTable, SynonymTable, VideoManifest
from .metrics import compare_translations, coverage_curve, retrieval_report
from .resolver import ResolverOptions, compile_task, corpus_frequencies
from .ruletrans import PosFilterPolicy, RuleTranslator, rule_translate
from .tasks import load_task_dir, validate_collection

log = logging.getLogger("signpipe")

CONFIG_ENV = "SIGNPIPE_CONFIG"

# Per-setting environment variable, below flags and above the config file.
SETTING_ENV = {
    "tasks": "SIGNPIPE_TASKS",
    "manifest": "SIGNPIPE_MANIFEST",
    "synonyms": "SIGNPIPE_SYNONYMS",
    "compounds": "SIGNPIPE_COMPOUNDS",
    "cache": "SIGNPIPE_CACHE",
    "curated": "SIGNPIPE_CURATED",
    "endpoint": ENDPOINT_ENV,
    "model": "SIGNPIPE_LLM_MODEL",
}

_BUNDLED_DEFAULTS = {
    "tasks": "tasks",
    "manifest": "manifest.json",
    "synonyms": "synonyms.tsv",
    "compounds": "compounds.tsv",
    "cache": "llm_cache",
}


def bundled(name: str) -> str:
    """Path of a bundled data file or directory."""
    return str(resources.files("signpipe").joinpath("data", name))


def _load_config_file(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise MalformedDocument(f"config file {path}: {err}") from err
    if not isinstance(doc, dict):
        raise MalformedDocument(f"config file {path} must hold a JSON object")
    return doc


def _setting(ctx: click.Context, name: str, flag_value: str | None) -> str | None:
    if flag_value:
        return flag_value
    env = SETTING_ENV.get(name)
    if env and os.environ.get(env):
        return os.environ[env]
    config = ctx.obj or {}
    if config.get(name):
        return str(config[name])
    default = _BUNDLED_DEFAULTS.get(name)
    return bundled(default) if default else None


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def _fail(err: Exception) -> None:
    payload = err.payload() if isinstance(err, SignpipeError) else {
        "error": type(err).__name__, "message": str(err)}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    raise SystemExit(1)


def _write_report(payload: dict, out_path: str) -> None:
    """JSON by default; a .csv path gets metric,value rows."""
    if out_path.endswith(".csv"):
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["metric", "value"])
        for key in sorted(payload):
            writer.writerow([key, payload[key]])
        write_atomic(out_path, buf.getvalue())
    else:
        write_atomic(out_path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


@click.group()
@click.version_option(__version__)
@click.option("--log-level", default="warning",
              type=click.Choice(["debug", "info", "warning", "error"]), show_default=True)
@click.option("--config", "config_path", default=None,
              help=f"JSON config file with default settings (or ${CONFIG_ENV}).")
@click.pass_context
def main(ctx: click.Context, log_level: str, config_path: str | None) -> None:
    """Compile step-by-step instructions into signed video playlists."""
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, log_level.upper()),
                        format="%(levelname)s %(name)s %(message)s")
    try:
        ctx.obj = _load_config_file(config_path)
    except SignpipeError as err:
        _fail(err)


def _translator(ctx: click.Context, name: str, *, cache_dir: str | None, offline: bool,
                curated: str | None, endpoint: str | None, model: str | None):
    curated = curated or (os.environ.get(SETTING_ENV["curated"]) or (ctx.obj or {}).get("curated"))
    if name == "rule":
        return RuleTranslator()
    if name == "manual":
        if not curated:
            raise click.UsageError("--translator manual requires --curated <dir>")
        return ManualTranslator(curated)
    config = LlmRequestConfig(
        model=_setting(ctx, "model", model) or "gpt-3.5-turbo",
        endpoint=_setting(ctx, "endpoint", endpoint) or "",
    )
    cache = TranslationCache(_setting(ctx, "cache", cache_dir))
    return LlmTranslator(config, cache, offline=offline, curated_dir=curated)


def _side_tables(ctx: click.Context, synonyms: str | None, compounds: str | None):
    return (SynonymTable.load(_setting(ctx, "synonyms", synonyms)),
            CompoundTable.load(_setting(ctx, "compounds", compounds)))


@main.command("gloss")
@click.option("--rule", "use_rule", is_flag=True, default=True, help="Use the rule-based translator.")
@click.option("--text", required=True, help="Instruction text to translate.")
@click.option("--faithful-case-order", is_flag=True,
              help="Uppercase before tagging, matching the literal pipeline order.")
@click.option("--drop", "drop_codes", multiple=True,
              help="POS codes to drop (det, cconj, to, aux, punct, prep, ...); overrides the default policy.")
def gloss_cmd(use_rule: bool, text: str, faithful_case_order: bool, drop_codes: tuple[str, ...]) -> None:
    """Translate one sentence or step to a gloss string."""
    try:
        policy = PosFilterPolicy.from_codes(drop_codes) if drop_codes else None
        seq = rule_translate(text, policy, faithful_case_order=faithful_case_order)
        click.echo(seq.text)
    except SignpipeError as err:
        _fail(err)


@main.command("translate")
@click.option("--translator", "translator_name", type=click.Choice(["rule", "llm", "manual"]),
              default="llm", show_default=True)
@click.option("--llm", "use_llm", is_flag=True, help="Shorthand for --translator llm.")
@click.option("--rule", "use_rule", is_flag=True, help="Shorthand for --translator rule.")
@click.option("--tasks", "tasks_dir", default=None, help="Directory of task JSON files.")
@click.option("--cache", "cache_dir", default=None, help="Translation cache directory.")
@click.option("--offline", is_flag=True, help="Never touch the network; cache misses fail.")
@click.option("--curated", default=None, help="Curated overlay directory.")
@click.option("--endpoint", default=None, help="Chat-completion endpoint URI.")
@click.option("--model", default=None, help="Model name sent to the endpoint.")
@click.option("--jobs", default=1, show_default=True,
              help="Maximum in-flight translation requests.")
@click.option("--out", "out_path", default=None, help="Write JSON here instead of stdout.")
@click.pass_context
def translate_cmd(ctx, translator_name, use_llm, use_rule, tasks_dir, cache_dir, offline,
                  curated, endpoint, model, jobs, out_path) -> None:
    """Translate every task in a directory; emits task_id -> gloss strings."""
    if use_llm:
        translator_name = "llm"
    if use_rule:
        translator_name = "rule"
    try:
        tasks = load_task_dir(_setting(ctx, "tasks", tasks_dir))
        translator = _translator(ctx, translator_name, cache_dir=cache_dir, offline=offline,
                                 curated=curated, endpoint=endpoint, model=model)

        def one(task):
            results = translator.translate_task(task)
            return task.task_id, [
                r.text if isinstance(r, GlossSequence) else {"error": r.reason}
                for r in results
            ]

        if jobs > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
                out = dict(pool.map(one, tasks))
        else:
            out = dict(one(task) for task in tasks)
        text = json.dumps(out, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
        if out_path:
            write_atomic(out_path, text)
        else:
            click.echo(text, nl=False)
    except SignpipeError as err:
        _fail(err)


@main.command("compile")
@click.option("--tasks", "tasks_dir", default=None)
@click.option("--manifest", "manifest_path", default=None)
@click.option("--synonyms", default=None)
@click.option("--compounds", default=None)
@click.option("--translator", "translator_name", type=click.Choice(["rule", "llm", "manual"]),
              default="rule", show_default=True)
@click.option("--cache", "cache_dir", default=None)
@click.option("--offline", is_flag=True)
@click.option("--curated", default=None)
@click.option("--endpoint", default=None)
@click.option("--model", default=None)
@click.option("--prefer-synonym", is_flag=True,
              help="Try synonyms before fingerspelling for unknown glosses.")
@click.option("--no-fingerspell", is_flag=True, help="Disable the fingerspelling rung.")
@click.option("--jobs", default=1, show_default=True, help="Parallel task workers.")
@click.option("--out", "out_dir", required=True, help="Output directory for compiled task JSON.")
@click.pass_context
def compile_cmd(ctx, tasks_dir, manifest_path, synonyms, compounds, translator_name,
                cache_dir, offline, curated, endpoint, model,
                prefer_synonym, no_fingerspell, jobs, out_dir) -> None:
    """Translate, resolve and stitch every task into compiled JSON files."""
    try:
        tasks = load_task_dir(_setting(ctx, "tasks", tasks_dir))
        manifest = VideoManifest.load(_setting(ctx, "manifest", manifest_path))
        syn, comp = _side_tables(ctx, synonyms, compounds)
        translator = _translator(ctx, translator_name, cache_dir=cache_dir, offline=offline,
                                 curated=curated, endpoint=endpoint, model=model)
        options = ResolverOptions(prefer_synonym=prefer_synonym, fingerspell=not no_fingerspell)

        # Corpus-wide token frequencies make synonym tie-breaks deterministic
        # regardless of task order or worker count.
        sequences = []
        per_task_results = {}
        for task in tasks:
            results = translator.translate_task(task)
            per_task_results[task.task_id] = results
            sequences.extend(r for r in results if isinstance(r, GlossSequence))
        freq = corpus_frequencies(sequences)

        class _Pretranslated:
            name = translator.name

            def __init__(self, results):
                self._results = results

            def translate_task(self, _task):
                return self._results

        def build(task):
            pre = _Pretranslated(per_task_results[task.task_id])
            return compile_task(task, pre, manifest, syn, comp, options=options, freq=freq)

        if jobs > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
                compiled = list(pool.map(build, tasks))
        else:
            compiled = [build(task) for task in tasks]

        failures = 0
        for result in compiled:
            for step in result.steps:
                if step.error:
                    failures += 1
                    log.warning("task %s step %d: %s", result.task.task_id, step.index, step.error)
            write_atomic(Path(out_dir) / f"{result.task.task_id}.json", result.to_json())
        log.info("compiled %d tasks (%d step failures) into %s", len(compiled), failures, out_dir)
    except SignpipeError as err:
        _fail(err)


@main.command("check")
@click.option("--tasks", "tasks_dir", default=None)
@click.option("--manifest", "manifest_path", default=None)
@click.option("--translator", "translator_name", type=click.Choice(["rule", "llm", "manual"]),
              default="rule", show_default=True)
@click.option("--cache", "cache_dir", default=None)
@click.option("--offline", is_flag=True)
@click.option("--curated", default=None)
@click.option("--out", "out_path", default=None)
@click.pass_context
def check_cmd(ctx, tasks_dir, manifest_path, translator_name, cache_dir, offline,
              curated, out_path) -> None:
    """Validate tasks and check translated glosses against the dictionary."""
    try:
        tasks = load_task_dir(_setting(ctx, "tasks", tasks_dir))
        manifest = VideoManifest.load(_setting(ctx, "manifest", manifest_path))
        translator = _translator(ctx, translator_name, cache_dir=cache_dir, offline=offline,
                                 curated=curated, endpoint=None, model=None)
        collection = validate_collection(tasks).to_dict()
        gloss_findings = []
        for task in tasks:
            for result in translator.translate_task(task):
                if not isinstance(result, GlossSequence):
                    gloss_findings.append({"task_id": task.task_id,
                                           "step_index": result.step_index,
                                           "issue": "EmptyTranslation",
                                           "token": None})
                    continue
                for finding in validate_sequence(result, manifest):
                    gloss_findings.append({"task_id": task.task_id, **finding.to_dict()})
        report = {"collection": collection, "gloss_findings": gloss_findings,
                  "total_findings": collection["findings"] + len(gloss_findings)}
        text = json.dumps(report, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
        if out_path:
            write_atomic(out_path, text)
        else:
            click.echo(text, nl=False)
        if report["total_findings"]:
            raise SystemExit(3)
    except SignpipeError as err:
        _fail(err)


@main.group("eval")
def eval_group() -> None:
    """Retrieval and text metrics."""


def _load_gloss_corpus(path: str) -> list[GlossSequence]:
    from .gloss import Provenance

    sequences = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
        line = line.strip()
        if not line:
            continue
        sequences.append(GlossSequence(step_index=i, glosses=tuple(normalize(line)),
                                       provenance=Provenance.MANUAL))
    return sequences


def _corpus_from_flags(ctx, glosses, tasks_dir, translator_name, cache_dir, offline,
                       curated) -> list[GlossSequence]:
    if glosses:
        return _load_gloss_corpus(glosses)
    tasks = load_task_dir(_setting(ctx, "tasks", tasks_dir))
    translator = _translator(ctx, translator_name, cache_dir=cache_dir, offline=offline,
                             curated=curated, endpoint=None, model=None)
    sequences = []
    for task in tasks:
        sequences.extend(r for r in translator.translate_task(task) if isinstance(r, GlossSequence))
    return sequences


@eval_group.command("retrieval")
@click.option("--glosses", default=None, help="Gloss corpus file, one gloss string per line.")
@click.option("--tasks", "tasks_dir", default=None)
@click.option("--translator", "translator_name", type=click.Choice(["rule", "llm", "manual"]),
              default="rule", show_default=True)
@click.option("--cache", "cache_dir", default=None)
@click.option("--offline", is_flag=True)
@click.option("--curated", default=None)
@click.option("--manifest", "manifest_path", default=None)
@click.option("--synonyms", default=None)
@click.option("--recall-definition", type=click.Choice(["example", "appendix"]),
              default="example", show_default=True)
@click.option("--out", "out_path", default=None,
              help="Also write the full report here (.csv for CSV, JSON otherwise).")
@click.pass_context
def eval_retrieval(ctx, glosses, tasks_dir, translator_name, cache_dir, offline, curated,
                   manifest_path, synonyms, recall_definition, out_path) -> None:
    """Hit Rate and Recall@1 of a gloss corpus against the video dictionary."""
    try:
        sequences = _corpus_from_flags(ctx, glosses, tasks_dir, translator_name,
                                       cache_dir, offline, curated)
        manifest = VideoManifest.load(_setting(ctx, "manifest", manifest_path))
        syn = SynonymTable.load(_setting(ctx, "synonyms", synonyms))
        report = retrieval_report(sequences, manifest, syn, recall_definition)
        click.echo(f"hit_rate {report.hit_rate:g}")
        click.echo(f"recall_at_1 {report.recall_at_1:g}")
        if out_path:
            _write_report(report.to_dict(), out_path)
    except SignpipeError as err:
        _fail(err)


@eval_group.command("text")
@click.option("--hyp", "hyp_path", required=True, help="Hypothesis corpus, one gloss string per line.")
@click.option("--ref", "ref_path", required=True, help="Reference corpus, one gloss string per line.")
@click.option("--smoothing", type=click.Choice(["none", "add1"]), default="none", show_default=True)
@click.option("--out", "out_path", default=None,
              help="Write the report here (.csv for CSV, JSON otherwise).")
def eval_text(hyp_path, ref_path, smoothing, out_path) -> None:
    """BLEU-1..4, ROUGE-L, chrF and WER between two aligned corpora."""
    try:
        hyps = [s.text for s in _load_gloss_corpus(hyp_path)]
        refs = [s.text for s in _load_gloss_corpus(ref_path)]
        report = compare_translations(hyps, refs, smoothing=smoothing)
        for name, value in report.to_dict().items():
            if name == "n_pairs":
                continue
            scaled = value * 100 if name != "wer" else value
            click.echo(f"{name} {scaled:.3f}")
        if out_path:
            _write_report(report.to_dict(), out_path)
    except SignpipeError as err:
        _fail(err)


@eval_group.command("curve")
@click.option("--glosses", default=None)
@click.option("--tasks", "tasks_dir", default=None)
@click.option("--translator", "translator_name", type=click.Choice(["rule", "llm", "manual"]),
              default="rule", show_default=True)
@click.option("--cache", "cache_dir", default=None)
@click.option("--offline", is_flag=True)
@click.option("--curated", default=None)
@click.option("--manifest", "manifest_path", default=None)
@click.option("--synonyms", default=None)
@click.option("--policy", type=click.Choice(["frequency", "random"]), default="frequency",
              show_default=True)
@click.option("--seeds", default="0", show_default=True, help="Comma-separated seeds for --policy random.")
@click.option("--points", default=20, show_default=True, help="Number of subset sizes.")
@click.option("--recall-definition", type=click.Choice(["example", "appendix"]),
              default="example", show_default=True)
@click.option("--out", "out_path", default=None, help="CSV output path (default stdout).")
@click.option("--plot", "plot_path", default=None, help="Write a chart image here (needs matplotlib).")
@click.pass_context
def eval_curve(ctx, glosses, tasks_dir, translator_name, cache_dir, offline, curated,
               manifest_path, synonyms, policy, seeds, points, recall_definition,
               out_path, plot_path) -> None:
    """Hit Rate / Recall@1 as the available video set grows."""
    try:
        sequences = _corpus_from_flags(ctx, glosses, tasks_dir, translator_name,
                                       cache_dir, offline, curated)
        manifest = VideoManifest.load(_setting(ctx, "manifest", manifest_path))
        syn = SynonymTable.load(_setting(ctx, "synonyms", synonyms))
        from .metrics.retrieval import default_sizes

        seed_list = tuple(int(s) for s in seeds.split(",") if s.strip())
        curve = coverage_curve(sequences, manifest, policy, seed_list,
                               default_sizes(len(manifest.entries), points), syn,
                               recall_definition)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["policy", "seed", "video_count",
                                                 "hit_rate", "recall_at_1"])
        writer.writeheader()
        for row in curve.to_rows():
            writer.writerow(row)
        if out_path:
            write_atomic(out_path, buf.getvalue())
        else:
            click.echo(buf.getvalue(), nl=False)
        if plot_path:
            _plot_curve(curve, plot_path)
    except SignpipeError as err:
        _fail(err)


def _plot_curve(curve, plot_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    sizes = [p.video_count for p in curve.points]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(sizes, [p.hit_rate for p in curve.points], marker="o", label="Hit Rate")
    recall_pts = [(p.video_count, p.recall_at_1) for p in curve.points if p.recall_at_1 is not None]
    if recall_pts:
        ax.plot([x for x, _ in recall_pts], [y for _, y in recall_pts], marker="s", label="Recall@1")
    ax.set_xlabel("available videos")
    ax.set_ylabel("score")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(plot_path, dpi=120)
    plt.close(fig)


@main.command("serve")
@click.option("--compiled", "compiled_dir", required=True, help="Directory of compiled task JSON.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--asset-base", default="", help="Base URI joined onto relative playlist segments.")
@click.option("--ui", "ui_dir", default=None, help="Static UI directory to mount at /.")
def serve_cmd(compiled_dir, host, port, asset_base, ui_dir) -> None:
    """Serve tasks, screens, playlists and sessions over HTTP."""
    try:
        import uvicorn

        from .service import create_app, load_compiled_dir

        app = create_app(load_compiled_dir(compiled_dir), asset_base=asset_base, ui_dir=ui_dir)
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except SignpipeError as err:
        _fail(err)


@main.group("manifest")
def manifest_group() -> None:
    """Video dictionary maintenance."""


@manifest_group.command("verify")
@click.option("--manifest", "manifest_path", default=None)
@click.option("--assets", "assets_dir", required=True,
              help="Local directory the relative video URIs resolve against.")
@click.pass_context
def manifest_verify(ctx, manifest_path, assets_dir) -> None:
    """Check that every dictionary entry has an existing video file."""
    try:
        manifest = VideoManifest.load(_setting(ctx, "manifest", manifest_path))
        missing = []
        for key, asset in sorted(manifest.entries.items()):
            if "://" in asset.uri:
                continue  # remote URIs are not probed; keep verification offline
            if not (Path(assets_dir) / asset.uri).exists():
                missing.append({"gloss": key, "uri": asset.uri})
        letters_absent = sorted(set("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")
                                - set(manifest.letter_clips))
        report = {"entries": len(manifest.entries), "missing_files": missing,
                  "missing_letter_clips": letters_absent,
                  "duplicate_keys": sorted(manifest.conflicts)}
        click.echo(json.dumps(report, sort_keys=True, indent=2))
        if missing or manifest.conflicts:
            raise SystemExit(3)
    except SignpipeError as err:
        _fail(err)


if __name__ == "__main__":
    main()
