"""Command-line pipeline: load, deduplicate, normalize, label, map, score.

Example::

    qsarmap --input data.csv --endpoint ActivityScore --threshold mean \\
            --methods pca,nlpca,sammon --dims 1,2 --out results/
"""

import argparse
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import analysis, dataset, nlpca, pca, report, sammon
from .exceptions import DegenerateLabelingError, QsarmapError

log = logging.getLogger("qsarmap")

METHODS = ("pca", "nlpca", "sammon")
DIMS = (1, 2)


class StageError(QsarmapError):
    def __init__(self, stage, cause):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@contextmanager
def _stage(name):
    try:
        yield
    except StageError:
        raise
    except (QsarmapError, ValueError, OSError, FloatingPointError) as exc:
        raise StageError(name, exc) from exc


@dataclass
class RunConfig:
    input: str
    endpoint: str
    out: str
    threshold: object = "mean"
    methods: tuple = METHODS
    dims: tuple = DIMS
    normalize: bool = True
    seed: int = 0
    class_names: tuple = ("active", "inactive")
    sammon_config: sammon.SammonConfig = field(default_factory=sammon.SammonConfig)
    nlpca_config: nlpca.TrainConfig = field(default_factory=nlpca.TrainConfig)

    def __post_init__(self):
        self.methods = tuple(dict.fromkeys(self.methods))
        self.dims = tuple(dict.fromkeys(int(k) for k in self.dims))
        if not self.methods or not self.dims:
            raise ValueError("methods and dims must be nonempty")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown method(s): {', '.join(sorted(bad))}")
        if set(self.dims) - set(DIMS):
            raise ValueError("dims must be drawn from {1, 2}")
        if self.threshold != "mean":
            self.threshold = float(self.threshold)

    def echo(self):
        out = asdict(self)
        del out["out"]  # output location must not change report bytes
        out["sammon_config"]["seed"] = out["nlpca_config"]["seed"] = self.seed
        out["methods"] = list(self.methods)
        out["dims"] = list(self.dims)
        out["class_names"] = list(self.class_names)
        return out


@dataclass
class PipelineResult:
    table: dataset.DescriptorTable
    labeling: dataset.EndpointLabeling
    embeddings: dict
    report: analysis.SeparabilityReport
    metadata: dict


def _embed(method, k, x, config):
    # the run-level seed overrides the per-method ones
    if method == "pca":
        return pca.project(pca.fit_pca(x, k), x), None
    if method == "sammon":
        emb, trace = sammon.embed(x, k, replace(config.sammon_config, seed=config.seed))
        return emb, trace.summary()
    emb, _, trace = nlpca.fit(x, k, replace(config.nlpca_config, seed=config.seed))
    return emb, trace.summary()


def run_pipeline(config):
    """Execute every stage in memory; no files are written."""
    with _stage("load"):
        raw = dataset.load_csv(config.input, config.endpoint)
    with _stage("deduplicate"):
        table = dataset.deduplicate(raw)
    if config.normalize:
        with _stage("normalize"):
            table = dataset.normalize(table)
    with _stage("label"):
        if config.threshold == "mean":
            threshold, rule = dataset.mean_threshold(table), "mean"
        else:
            threshold, rule = config.threshold, "fixed"
        labeling = dataset.label(table, threshold, config.class_names)
        if labeling.n_positive == 0 or labeling.n_negative == 0:
            raise DegenerateLabelingError(
                f"threshold {threshold} leaves one class empty ({labeling.counts})"
            )

    warnings = list(table.warnings)
    embeddings, traces = {}, {}
    for method in config.methods:
        for k in config.dims:
            stem = report.artifact_stem(method, k)
            log.info("mapping %s", stem)
            with _stage(f"{method} (k={k})"):
                emb, summary = _embed(method, k, table.values, config)
            embeddings[(method, k)] = emb
            if summary is not None:
                traces[stem] = summary
            warnings.extend(f"{stem}: {w}" for w in emb.info.get("warnings", []))

    with _stage("analysis"):
        rep = analysis.compare_methods(
            [(m, k, e) for (m, k), e in embeddings.items()], labeling
        )

    metadata = {
        "config": config.echo(),
        "dataset": {
            "input": str(config.input),
            "endpoint": table.endpoint_name,
            "n_compounds_read": raw.n_compounds,
            "n_compounds": table.n_compounds,
            "n_descriptors": table.n_descriptors,
            "descriptor_names": list(table.descriptor_names),
            "duplicates_removed": table.duplicates_removed,
            "normalized": table.normalized,
        },
        "labeling": {
            "rule": "endpoint > threshold",
            "threshold": threshold,
            "threshold_source": rule,
            "class_names": list(labeling.class_names),
            "counts": labeling.counts,
        },
        "traces": traces,
        "warnings": warnings,
    }
    return PipelineResult(table, labeling, embeddings, rep, metadata)


def run(config):
    """Run the pipeline and write SVG, CSV and JSON artifacts to ``config.out``.

    Returns
    -------
    int
        Process exit status: 0 on success, 1 on a pipeline error.
    """
    try:
        result = run_pipeline(config)
        with _stage("write"):
            out = Path(config.out)
            out.mkdir(parents=True, exist_ok=True)
            files = {}
            for (method, k), emb in result.embeddings.items():
                stem = report.artifact_stem(method, k)
                report.emit_scatter_svg(emb, result.labeling, out / f"{stem}.svg", method)
                report.write_embedding_csv(
                    emb, result.table.compound_ids, result.labeling, out / f"{stem}.csv"
                )
                files[stem] = {"svg": f"{stem}.svg", "csv": f"{stem}.csv"}
            result.metadata["files"] = files
            report.emit_report_json(result.report, result.metadata, out / "report.json")
    except StageError as exc:
        print(f"qsarmap: error in stage {exc}", file=sys.stderr)
        return 1
    return 0


def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser():
    p = argparse.ArgumentParser(
        prog="qsarmap",
        description="Map a QSAR descriptor table to 1-D/2-D with PCA, nonlinear PCA "
        "and Sammon mapping, and score how well the classes separate.",
    )
    p.add_argument("--input", required=True, help="descriptor CSV (first column = ID)")
    p.add_argument("--endpoint", required=True, help="name of the endpoint column")
    p.add_argument("--threshold", default="mean",
                   help="positive class is endpoint > THRESHOLD; 'mean' uses the endpoint mean")
    p.add_argument("--methods", default=",".join(METHODS), type=_csv_list,
                   help="comma-separated subset of pca,nlpca,sammon")
    p.add_argument("--dims", default="1,2", type=_csv_list, help="comma-separated subset of 1,2")
    p.add_argument("--no-normalize", dest="normalize", action="store_false",
                   help="skip z-scoring of the descriptor columns")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--class-names", default="active,inactive", type=_csv_list,
                   help="positive,negative class names")
    g = p.add_argument_group("method settings")
    g.add_argument("--sammon-iters", type=int, default=sammon.SammonConfig.max_iterations)
    g.add_argument("--sammon-step", type=float, default=sammon.SammonConfig.step_factor)
    g.add_argument("--nlpca-hidden", type=int, default=nlpca.TrainConfig.hidden_width)
    g.add_argument("--nlpca-lr", type=float, default=nlpca.TrainConfig.learning_rate)
    g.add_argument("--nlpca-epochs", type=int, default=nlpca.TrainConfig.epochs)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args):
    if args.threshold != "mean":
        try:
            float(args.threshold)
        except ValueError:
            raise ValueError(f"--threshold must be a number or 'mean', got {args.threshold!r}")
    if len(args.class_names) != 2:
        raise ValueError("--class-names takes exactly two names")
    return RunConfig(
        input=args.input,
        endpoint=args.endpoint,
        out=args.out,
        threshold=args.threshold,
        methods=tuple(args.methods),
        dims=tuple(args.dims),
        normalize=args.normalize,
        seed=args.seed,
        class_names=tuple(args.class_names),
        sammon_config=sammon.SammonConfig(
            step_factor=args.sammon_step, max_iterations=args.sammon_iters, seed=args.seed
        ),
        nlpca_config=nlpca.TrainConfig(
            hidden_width=args.nlpca_hidden, learning_rate=args.nlpca_lr,
            epochs=args.nlpca_epochs, seed=args.seed,
        ),
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        config = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
