"""Command line entry points: preprocess, query, inspect, serve.

Exit codes: 0 success, 2 unsatisfiable oracle, 1 any other error.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import dataio, pipeline
from .errors import Unsatisfiable
from .fairness import oracle_from_config

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSATISFIABLE = 2


def _parse_scoring(text: str):
    pairs = []
    for part in text.split(","):
        name, _, direction = part.partition(":")
        pairs.append((name.strip(), direction.strip() or dataio.HIGHER_BETTER))
    return pairs


def _load_inputs(data, scoring, type_attr, delimiter, oracle_path):
    spec = dataio.DatasetSpec(scoring=_parse_scoring(scoring),
                              type_attrs=type_attr, delimiter=delimiter)
    dataset = dataio.ingest(spec, data)
    with open(oracle_path) as fh:
        oracle_doc = json.load(fh)
    config = dataio.parse_oracle_config(oracle_doc, dataset)
    return spec, dataset, config, dataio.oracle_config_doc(config)


@click.group()
def cli():
    """Fair ranking index builder and query tool."""


@cli.command()
@click.option("--data", required=True, type=click.Path(exists=True),
              help="Delimited text file with a header row.")
@click.option("--scoring", required=True,
              help="Scoring columns, e.g. 'income:higher,debt:lower'.")
@click.option("--type-attr", multiple=True,
              help="Type attribute column (repeatable).")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--oracle", "oracle_path", required=True,
              type=click.Path(exists=True),
              help="Oracle config document (JSON).")
@click.option("--cells", default=1000, show_default=True,
              help="Target cell count N for the md index.")
@click.option("--sample", default=None, type=int,
              help="Build on a uniform sample of this many rows.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--mode", default="auto", show_default=True,
              type=click.Choice(["auto", "2d", "md"]))
@click.option("--max-probes", default=None, type=int,
              help="Oracle probe budget per cell during the search phase.")
@click.option("--out", required=True, type=click.Path(),
              help="Index file to write.")
def preprocess(data, scoring, type_attr, delimiter, oracle_path, cells,
               sample, seed, mode, max_probes, out):
    """Run the offline phase and write an index file."""
    spec, dataset, config, oracle_doc = _load_inputs(
        data, scoring, type_attr, delimiter, oracle_path)
    oracle = oracle_from_config(config)

    def progress(done, total):
        click.echo(f"  cell search {done}/{total}", err=True)

    engine, report = pipeline.build_engine(
        dataset, oracle, mode=mode, cells=cells, sample=sample, seed=seed,
        max_probes=max_probes, progress=progress)
    index = pipeline.engine_to_index_file(engine, report,
                                          spec_doc=spec.to_doc(),
                                          oracle_doc=oracle_doc)
    dataio.save_index(index, out)

    click.echo(f"mode: {report['mode']}  n={report['n']}  d={report['d']}")
    for phase, secs in report["timings"].items():
        click.echo(f"  {phase}: {secs:.3f}s")
    if report["mode"] == pipeline.MODE_MD:
        click.echo(f"  cells: {report['cells']}  "
                   f"direct: {report['direct_cells']}  "
                   f"colored: {report['colored_cells']}")
    else:
        click.echo(f"  satisfactory ranges: {report['ranges']}")
    click.echo(f"wrote {out}")
    if report["unsatisfiable"]:
        click.echo("oracle is unsatisfiable for this dataset", err=True)
        sys.exit(EXIT_UNSATISFIABLE)


def _open_engine(index_path, data):
    index = dataio.load_index(index_path)
    if index.dataset_spec is None:
        raise click.ClickException("index carries no dataset spec")
    spec = dataio.DatasetSpec.from_doc(index.dataset_spec)
    dataset = dataio.ingest(spec, data)
    if dataio.fingerprint(dataset) != index.fingerprint:
        click.echo("warning: dataset fingerprint differs from the index",
                   err=True)
    return index, pipeline.engine_from_index_file(index, dataset)


@cli.command()
@click.option("--index", "index_path", required=True,
              type=click.Path(exists=True))
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--weights", required=True, help="Comma-separated weights.")
@click.option("--format", "fmt", default="text", show_default=True,
              type=click.Choice(["text", "json"]))
def query(index_path, data, weights, fmt):
    """Check a weight vector and print the nearest satisfactory one."""
    _, engine = _open_engine(index_path, data)
    w = np.array([float(x) for x in weights.split(",")])
    result = engine.query(w)
    doc = pipeline.query_result_doc(result)
    if fmt == "json":
        click.echo(json.dumps(doc))
        return
    click.echo(f"satisfactory_as_is: {doc['satisfactory_as_is']}")
    click.echo("suggestion: " + ", ".join(f"{x:.6f}" for x in doc["suggestion"]))
    click.echo(f"distance: {doc['distance']:.6f} rad")
    click.echo(f"verified: {doc['verified']}  mode: {doc['mode']}")


@cli.command()
@click.option("--index", "index_path", required=True,
              type=click.Path(exists=True))
@click.option("--format", "fmt", default="text", show_default=True,
              type=click.Choice(["text", "json"]))
def inspect(index_path, fmt):
    """Print index metadata without loading the dataset."""
    index = dataio.load_index(index_path)
    doc = {"version": index.version, "mode": index.mode, "d": index.d,
           "fingerprint": index.fingerprint, "metadata": index.metadata,
           "oracle_config": index.oracle_config,
           "dataset_spec": index.dataset_spec}
    if fmt == "json":
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
        return
    for key in ("version", "mode", "d", "fingerprint"):
        click.echo(f"{key}: {doc[key]}")
    for key, val in (index.metadata or {}).items():
        click.echo(f"  {key}: {val}")


@cli.command()
@click.option("--index", "index_path", required=True,
              type=click.Path(exists=True))
@click.option("--data", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=None, type=int,
              help="Defaults to $FAIRRANK_PORT or 8000.")
def serve(index_path, data, host, port):
    """Serve the HTTP API for the companion UI."""
    import os

    import uvicorn

    from .service import create_app

    _, engine = _open_engine(index_path, data)
    if port is None:
        port = int(os.environ.get("FAIRRANK_PORT", "8000"))
    uvicorn.run(create_app(engine), host=host, port=port)


def main():
    try:
        cli.main(standalone_mode=False)
    except SystemExit:
        raise
    except Unsatisfiable as err:
        click.echo(f"unsatisfiable: {err}", err=True)
        sys.exit(EXIT_UNSATISFIABLE)
    except click.ClickException as err:
        err.show()
        sys.exit(EXIT_ERROR)
    except click.Abort:
        sys.exit(EXIT_ERROR)
    except Exception as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    main()
