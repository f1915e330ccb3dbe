"""Python bindings for the triage-lab toolkit."""

import json

from ._core import (  # noqa: F401
    DataError,
    Index,
    __version__,
    average_precision,
    dataset_summary,
    evaluate,
    is_stop_word,
    meta_features,
    porter_stem,
    preprocess,
    rank_of_first_hit,
    render_report_json,
    run_experiment_json,
    tokenize,
)


def run_experiment(dataset_dir, seeds=None, seed=1, jobs=1):
    """Run the full experiment and return the report as a dict."""
    return json.loads(run_experiment_json(str(dataset_dir), seeds, seed, jobs))


def render_report(report):
    """Text tables for a report dict (as returned by run_experiment)."""
    return render_report_json(json.dumps(report))
