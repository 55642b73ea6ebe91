"""Command-line entry point: stats, score, compare, hist, build-esa-index, report."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import coherence as coh
from . import corpus as corpus_mod
from . import entitylink, esa, stats
from .corpus import CorpusError, LabeledCorpus, Label
from .embeddings import EmbeddingError, EmbeddingTable, load_vectors_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_ENV_PATHS = {
    "embeddings_path": "NEWSCOHERENCE_EMBEDDINGS",
    "esa_index_path": "NEWSCOHERENCE_ESA_INDEX",
    "esa_kb_path": "NEWSCOHERENCE_ESA_KB",
    "entity_vectors_path": "NEWSCOHERENCE_ENTITY_VECTORS",
    "alias_path": "NEWSCOHERENCE_ALIASES",
}


class ConfigError(Exception):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    fake_path: str = ""
    fake_format: str = "jsonl"
    legit_path: str = ""
    legit_format: str = "jsonl"
    csv_text_column: str = "text"
    csv_title_column: str = "title"
    methods: str = "embedding"
    embeddings_path: str = ""
    esa_kb_path: str = ""
    esa_index_path: str = ""
    entity_vectors_path: str = ""
    alias_path: str = ""
    out_dir: str = "out"
    include_title: bool = False
    sd_convention: str = "population"
    esa_weighting: str = "tfidf"
    esa_min_weight: float = 0.0
    esa_stopwords: bool = True
    entity_multiset: bool = False
    unique_tokens: bool = False
    t_test: str = "welch"
    hist_lower: float = 0.0
    hist_upper: float = 1.0
    hist_buckets: int = 20
    seed: int = 0
    workers: int = 1

    def method_list(self) -> list[str]:
        return [m.strip() for m in self.methods.split(",") if m.strip()]


_BOOL_FIELDS = {"include_title", "esa_stopwords", "entity_multiset", "unique_tokens"}


def _coerce(name: str, raw: str):
    kind = {f.name: f.type for f in fields(RunConfig)}[name]
    if name in _BOOL_FIELDS:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"field {name!r}: expected a boolean, got {raw!r}")
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError as e:
        raise ConfigError(f"field {name!r}: {e}") from e
    return raw


def load_config(path: str | Path | None) -> RunConfig:
    """Read a flat `key = value` config file; unknown keys are an error."""
    config = RunConfig()
    if path is None:
        return config
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"field 'config': file not found: {p}")
    valid = {f.name for f in fields(RunConfig)}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{p} line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in valid:
            raise ConfigError(f"{p} line {lineno}: unknown field {key!r}")
        setattr(config, key, _coerce(key, value))
    return config


def apply_env(config: RunConfig) -> None:
    for name, var in _ENV_PATHS.items():
        value = os.environ.get(var)
        if value:
            setattr(config, name, value)


def validate(config: RunConfig, need_corpora: bool, need_methods: bool) -> None:
    """Reject every invalid config with a message naming the field, before any I/O."""
    methods = config.method_list()
    for m in methods:
        if m not in coh.METHODS:
            raise ConfigError(f"field 'methods': unknown method {m!r}")
    if need_methods and not methods:
        raise ConfigError("field 'methods': at least one method required")
    if config.sd_convention not in ("population", "sample"):
        raise ConfigError(f"field 'sd_convention': {config.sd_convention!r}")
    if config.t_test not in ("welch", "pooled"):
        raise ConfigError(f"field 't_test': {config.t_test!r}")
    if config.esa_weighting not in ("tf", "tfidf"):
        raise ConfigError(f"field 'esa_weighting': {config.esa_weighting!r}")
    for fmt_field in ("fake_format", "legit_format"):
        if getattr(config, fmt_field) not in ("csv", "jsonl"):
            raise ConfigError(f"field {fmt_field!r}: {getattr(config, fmt_field)!r}")
    if not (config.hist_lower < config.hist_upper):
        raise ConfigError("field 'hist_lower': must be < hist_upper")
    if config.hist_buckets < 1:
        raise ConfigError("field 'hist_buckets': must be >= 1")
    if config.workers < 1:
        raise ConfigError("field 'workers': must be >= 1")
    if need_corpora:
        if not config.fake_path:
            raise ConfigError("field 'fake_path': required")
        if not config.legit_path:
            raise ConfigError("field 'legit_path': required")
    if need_methods:
        if "embedding" in methods and not config.embeddings_path:
            raise ConfigError("field 'embeddings_path': required for method 'embedding'")
        if "esa" in methods and not (config.esa_index_path or config.esa_kb_path):
            raise ConfigError("field 'esa_index_path': an index or KB is required for 'esa'")
        if "entity" in methods and not config.entity_vectors_path:
            raise ConfigError("field 'entity_vectors_path': required for method 'entity'")


def resolved_config_lines(config: RunConfig) -> list[str]:
    # workers is excluded: output is identical for any worker count.
    lines = []
    for f in sorted(fields(RunConfig), key=lambda f: f.name):
        if f.name == "workers":
            continue
        lines.append(f"{f.name} = {getattr(config, f.name)}")
    return lines


def _load_corpus(config: RunConfig, label: str) -> LabeledCorpus:
    path = config.fake_path if label == Label.FAKE else config.legit_path
    fmt = config.fake_format if label == Label.FAKE else config.legit_format
    if fmt == "csv":
        title_col = config.csv_title_column or None
        c = corpus_mod.load_csv(path, label, config.csv_text_column, title_col)
    else:
        c = corpus_mod.load_jsonl(path)
    corpus_mod.segment_corpus(c, include_title=config.include_title)
    return c


def _load_kb(path: str | Path) -> list[tuple[str, str]]:
    """KB input: a directory of .txt files (filename = concept title) or a JSONL file."""
    p = Path(path)
    if p.is_dir():
        docs = []
        for child in sorted(p.glob("*.txt")):
            docs.append((child.stem, child.read_text(encoding="utf-8")))
        if not docs:
            raise CorpusError(f"{p}: no .txt knowledge-base articles found")
        return docs
    if p.is_file():
        docs = []
        with open(p, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    docs.append((obj["title"], obj["text"]))
                except (json.JSONDecodeError, KeyError) as e:
                    raise CorpusError(f"{p} line {lineno}: bad KB record: {e}") from e
        return docs
    raise CorpusError(f"knowledge base not found: {p}")


def _esa_index(config: RunConfig) -> esa.EsaIndex:
    if config.esa_index_path and Path(config.esa_index_path).is_file():
        return esa.load_index(config.esa_index_path)
    stop = esa.DEFAULT_STOPWORDS if config.esa_stopwords else None
    return esa.build_esa_index(
        _load_kb(config.esa_kb_path),
        weighting=config.esa_weighting,
        stopwords=stop,
        min_weight=config.esa_min_weight,
    )


class _Resources:
    def __init__(self, config: RunConfig):
        methods = config.method_list()
        self.embedding_table = (
            load_vectors_text(config.embeddings_path) if "embedding" in methods else None
        )
        self.esa_index = _esa_index(config) if "esa" in methods else None
        self.entity_table = (
            load_vectors_text(config.entity_vectors_path) if "entity" in methods else None
        )
        self.gazetteer = None
        if self.entity_table is not None:
            self.gazetteer = entitylink.build_gazetteer(self.entity_table)
            if config.alias_path:
                entitylink.load_aliases(config.alias_path, self.entity_table, self.gazetteer)


def _write(out_dir: Path, name: str, text: str) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(text, encoding="utf-8")
    return path


def _write_resolved_config(config: RunConfig, out_dir: Path) -> None:
    _write(out_dir, "resolved_config.txt", "\n".join(resolved_config_lines(config)) + "\n")


def _fmt_opt(value, fmt: str = "{:.2f}") -> str:
    return fmt.format(value) if value is not None else "-"


def cmd_stats(config: RunConfig) -> int:
    validate(config, need_corpora=True, need_methods=False)
    out_dir = Path(config.out_dir)
    corpora = {lab: _load_corpus(config, lab) for lab in (Label.FAKE, Label.LEGITIMATE)}
    if config.entity_vectors_path:
        table = load_vectors_text(config.entity_vectors_path)
        gaz = entitylink.build_gazetteer(table)
        if config.alias_path:
            entitylink.load_aliases(config.alias_path, table, gaz)
        for c in corpora.values():
            entitylink.link_corpus(c, gaz)

    sample = config.sd_convention == "sample"
    rows = []
    for label, c in corpora.items():
        for _, entry in corpus_mod.corpus_stats(c, sample_sd=sample).items():
            rows.append((label, entry))

    csv_lines = ["label,articles,sentences_mean,sentences_sd,entities_mean,entities_sd"]
    md_lines = [
        "| Category | #Articles | #Sentences/Article Mean (SD) | #Entities/Article Mean (SD) |",
        "|---|---|---|---|",
    ]
    for label, e in rows:
        csv_lines.append(
            f"{label},{e['article_count']},{e['sentences_mean']:.2f},{e['sentences_sd']:.2f},"
            f"{_fmt_opt(e['entities_mean'])},{_fmt_opt(e['entities_sd'])}"
        )
        md_lines.append(
            f"| {label} | {e['article_count']} | {e['sentences_mean']:.2f} "
            f"({e['sentences_sd']:.2f}) | {_fmt_opt(e['entities_mean'])} "
            f"({_fmt_opt(e['entities_sd'])}) |"
        )
    _write(out_dir, "dataset_stats.csv", "\n".join(csv_lines) + "\n")
    _write(out_dir, "dataset_stats.md", "\n".join(md_lines) + "\n")
    _write_resolved_config(config, out_dir)
    print("\n".join(md_lines))
    return EXIT_OK


def _score_all(
    config: RunConfig, corpora: dict[str, LabeledCorpus], res: _Resources
) -> dict[str, tuple[list, dict[str, str]]]:
    if res.gazetteer is not None:
        for c in corpora.values():
            entitylink.link_corpus(c, res.gazetteer)
    labels = {d.id: lab for lab, c in corpora.items() for d in c.documents}
    results = {}
    for method in config.method_list():
        scores = []
        for c in corpora.values():
            scores.extend(
                coh.score_corpus(
                    c,
                    method,
                    embedding_table=res.embedding_table,
                    esa_index=res.esa_index,
                    entity_table=res.entity_table,
                    unique_tokens=config.unique_tokens,
                    entity_multiset=config.entity_multiset,
                    workers=config.workers,
                )
            )
        scores.sort(key=lambda s: s.doc_id)
        results[method] = (scores, labels)
    return results


def cmd_score(config: RunConfig) -> int:
    validate(config, need_corpora=True, need_methods=True)
    res = _Resources(config)
    corpora = {lab: _load_corpus(config, lab) for lab in (Label.FAKE, Label.LEGITIMATE)}
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for method, (scores, labels) in _score_all(config, corpora, res).items():
        path = out_dir / f"scores_{method}.csv"
        coh.write_scores_csv(scores, labels, path)
        undefined = sum(1 for s in scores if not s.ok)
        print(f"{method}: {len(scores)} documents scored, {undefined} undefined -> {path}")
    _write_resolved_config(config, out_dir)
    return EXIT_OK


def _summary_lines(summaries: dict[str, stats.ComparisonSummary]) -> tuple[str, str]:
    csv_lines = [
        "method,fake_n,fake_mean,fake_sd,legit_n,legit_mean,legit_sd,"
        "difference_pct,t,dof,p_value,log10_p,excluded_fake,excluded_legit"
    ]
    md_lines = [
        "| Method | Fake Mean (SD) | Legitimate Mean (SD) | Difference in % | p-value |",
        "|---|---|---|---|---|",
    ]
    for method, s in summaries.items():
        csv_lines.append(
            f"{method},{s.fake.n},{s.fake.mean:.6f},{s.fake.sd:.6f},"
            f"{s.legitimate.n},{s.legitimate.mean:.6f},{s.legitimate.sd:.6f},"
            f"{s.percent_difference:.2f},{s.t_statistic:.6f},{s.degrees_of_freedom:.2f},"
            f"{s.p_value:.6E},{s.log10_p:.4f},{s.excluded_fake},{s.excluded_legitimate}"
        )
        md_lines.append(
            f"| {method} | {s.fake.mean:.6f} ({s.fake.sd:.6f}) "
            f"| {s.legitimate.mean:.6f} ({s.legitimate.sd:.6f}) "
            f"| {s.percent_difference:.2f}% | {s.p_value:.6E} |"
        )
    return "\n".join(csv_lines) + "\n", "\n".join(md_lines) + "\n"


def _compare_scores(config: RunConfig, scores, labels) -> stats.ComparisonSummary:
    fake = [s for s in scores if labels.get(s.doc_id) == Label.FAKE]
    legit = [s for s in scores if labels.get(s.doc_id) == Label.LEGITIMATE]
    if not fake or not legit:
        raise stats.StatsError("comparison requires scores for both labels")
    return stats.compare(
        fake,
        legit,
        sample_sd=config.sd_convention == "sample",
        pooled=config.t_test == "pooled",
    )


def _scores_per_method(config: RunConfig, score_files: list[str] | None):
    out_dir = Path(config.out_dir)
    if score_files:
        per_method = {}
        for sf in score_files:
            scores, labels = coh.read_scores_csv(sf)
            if not scores:
                raise stats.StatsError(f"{sf}: no scores")
            per_method[scores[0].method] = (scores, labels)
        return per_method
    validate(config, need_corpora=True, need_methods=True)
    res = _Resources(config)
    corpora = {lab: _load_corpus(config, lab) for lab in (Label.FAKE, Label.LEGITIMATE)}
    return _score_all(config, corpora, res)


def cmd_compare(config: RunConfig, score_files: list[str] | None = None) -> int:
    per_method = _scores_per_method(config, score_files)
    summaries = {
        m: _compare_scores(config, scores, labels)
        for m, (scores, labels) in per_method.items()
    }
    csv_text, md_text = _summary_lines(summaries)
    out_dir = Path(config.out_dir)
    _write(out_dir, "summary.csv", csv_text)
    _write(out_dir, "summary.md", md_text)
    _write_resolved_config(config, out_dir)
    print(md_text, end="")
    return EXIT_OK


def _hist_tsv(config: RunConfig, hist: stats.Histogram) -> str:
    lines = [
        f"# range [{hist.lower}, {hist.upper}], {hist.bucket_count} buckets, edge clamping",
        "bucket_low\tbucket_high\tfake_pct\tlegit_pct",
    ]
    fake = hist.percentages.get(Label.FAKE)
    legit = hist.percentages.get(Label.LEGITIMATE)
    for i in range(hist.bucket_count):
        f_pct = f"{fake[i]:.4f}" if fake else ""
        l_pct = f"{legit[i]:.4f}" if legit else ""
        lines.append(f"{hist.edges[i]:.6f}\t{hist.edges[i + 1]:.6f}\t{f_pct}\t{l_pct}")
    return "\n".join(lines) + "\n"


def cmd_hist(config: RunConfig, score_files: list[str] | None = None) -> int:
    per_method = _scores_per_method(config, score_files)
    out_dir = Path(config.out_dir)
    for method, (scores, labels) in per_method.items():
        by_label = {}
        for s in scores:
            if s.ok:
                by_label.setdefault(labels.get(s.doc_id, ""), []).append(s.value)
        missing = [lab for lab in (Label.FAKE, Label.LEGITIMATE) if not by_label.get(lab)]
        for lab in missing:
            print(f"warning: no {lab} scores for method {method}, column omitted",
                  file=sys.stderr)
        hist = stats.build_histogram(
            by_label, config.hist_lower, config.hist_upper, config.hist_buckets
        )
        path = _write(out_dir, f"hist_{method}.tsv", _hist_tsv(config, hist))
        print(f"{method}: histogram -> {path}")
    _write_resolved_config(config, out_dir)
    return EXIT_OK


def cmd_build_esa_index(config: RunConfig, out_path: str) -> int:
    if not config.esa_kb_path:
        raise ConfigError("field 'esa_kb_path': required for build-esa-index")
    stop = esa.DEFAULT_STOPWORDS if config.esa_stopwords else None
    index = esa.build_esa_index(
        _load_kb(config.esa_kb_path),
        weighting=config.esa_weighting,
        stopwords=stop,
        min_weight=config.esa_min_weight,
    )
    esa.save_index(index, out_path)
    print(f"ESA index: {index.doc_count} concepts, {len(index.inverted)} tokens -> {out_path}")
    return EXIT_OK


def cmd_report(config: RunConfig) -> int:
    validate(config, need_corpora=True, need_methods=True)
    res = _Resources(config)
    corpora = {lab: _load_corpus(config, lab) for lab in (Label.FAKE, Label.LEGITIMATE)}
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if res.gazetteer is not None:
        for c in corpora.values():
            entitylink.link_corpus(c, res.gazetteer)

    sample = config.sd_convention == "sample"
    stat_rows = []
    for label, c in corpora.items():
        for _, entry in corpus_mod.corpus_stats(c, sample_sd=sample).items():
            stat_rows.append((label, entry))

    per_method = _score_all(config, corpora, res)
    summaries = {}
    hist_blocks = {}
    for method, (scores, labels) in per_method.items():
        coh.write_scores_csv(scores, labels, out_dir / f"scores_{method}.csv")
        summaries[method] = _compare_scores(config, scores, labels)
        by_label = {}
        for s in scores:
            if s.ok:
                by_label.setdefault(labels.get(s.doc_id, ""), []).append(s.value)
        hist = stats.build_histogram(
            by_label, config.hist_lower, config.hist_upper, config.hist_buckets
        )
        tsv = _hist_tsv(config, hist)
        _write(out_dir, f"hist_{method}.tsv", tsv)
        hist_blocks[method] = tsv

    csv_text, md_text = _summary_lines(summaries)
    _write(out_dir, "summary.csv", csv_text)
    _write(out_dir, "summary.md", md_text)

    report = ["# Coherence Report", "", "## Dataset statistics", ""]
    report.append("| Category | #Articles | Sentences/Article Mean (SD) | Entities/Article Mean (SD) |")
    report.append("|---|---|---|---|")
    for label, e in stat_rows:
        report.append(
            f"| {label} | {e['article_count']} | {e['sentences_mean']:.2f} "
            f"({e['sentences_sd']:.2f}) | {_fmt_opt(e['entities_mean'])} "
            f"({_fmt_opt(e['entities_sd'])}) |"
        )
    report += ["", "## Coherence comparison", "", md_text.rstrip(), ""]
    for method, tsv in hist_blocks.items():
        report += [f"## Histogram ({method})", "", "```", tsv.rstrip(), "```", ""]
    report += ["## Resolved configuration", "", "```"]
    report += resolved_config_lines(config)
    report += ["```", ""]
    _write(out_dir, "report.md", "\n".join(report))
    _write_resolved_config(config, out_dir)
    print(f"report -> {out_dir / 'report.md'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    for f in fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        if f.name in _BOOL_FIELDS:
            common.add_argument(flag, dest=f.name, default=None,
                                choices=["true", "false", "on", "off", "yes", "no"])
        else:
            common.add_argument(flag, dest=f.name, default=None)
    parser = argparse.ArgumentParser(
        prog="newscoherence",
        description="Textual coherence scoring and fake/legitimate comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("stats", parents=[common], help="dataset statistics (Table-1 style)")
    sub.add_parser("score", parents=[common], help="per-document coherence score CSVs")
    p_cmp = sub.add_parser("compare", parents=[common],
                           help="fake vs legitimate summary (Table-2 style)")
    p_cmp.add_argument("score_files", nargs="*", help="reuse existing score CSVs")
    p_hist = sub.add_parser("hist", parents=[common], help="histogram TSVs")
    p_hist.add_argument("score_files", nargs="*", help="reuse existing score CSVs")
    p_esa = sub.add_parser("build-esa-index", parents=[common],
                           help="build and serialize the ESA index")
    p_esa.add_argument("--out", required=True, help="index output path")
    sub.add_parser("report", parents=[common],
                   help="run everything and emit a combined markdown report")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        apply_env(config)
        for f in fields(RunConfig):
            raw = getattr(args, f.name, None)
            if raw is not None:
                setattr(config, f.name, _coerce(f.name, str(raw)))
        validate(config, need_corpora=False, need_methods=False)

        if args.command == "stats":
            return cmd_stats(config)
        if args.command == "score":
            return cmd_score(config)
        if args.command == "compare":
            return cmd_compare(config, args.score_files or None)
        if args.command == "hist":
            return cmd_hist(config, args.score_files or None)
        if args.command == "build-esa-index":
            return cmd_build_esa_index(config, args.out)
        if args.command == "report":
            return cmd_report(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, EmbeddingError, esa.EsaError, entitylink.EntityLinkError,
            coh.CoherenceError, stats.StatsError, OSError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception as e:  # pragma: no cover
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
