"""Operator command line: import, validate, harmonize, geocode, metrics,
releases, exports, diffs, and the API server.

Configuration precedence is flags > environment > config file (simple
key=value lines). Exit codes: 0 ok, 1 validation failure, 2 I/O, 3 usage.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from .errors import AtlasError, RecordValidationError
from .geocode import Gazetteer
from .harmonize import load_country_tables
from .records import mvpd_check, record_to_row, validate_record
from .registry import DATA_DIR, AtlasRegistry
from .releases import CsvImportError, export_csv, export_geojson, export_json, import_csv

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_USAGE = 3

ENV_PREFIX = "CIVICATLAS"
DEFAULT_TOKEN_ENV = "CIVICATLAS_CURATOR_TOKEN"
DEFAULT_ADDR = "127.0.0.1:8080"
CONFIG_KEYS = ("data_dir", "gazetteer", "aliases", "regions", "addr", "token_env")


class CliError(click.ClickException):
    def __init__(self, message: str, exit_code: int = EXIT_VALIDATION):
        super().__init__(message)
        self.exit_code = exit_code


def _load_config_file(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise CliError(f"{path}:{lineno}: expected key=value", EXIT_USAGE)
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise CliError(f"{path}:{lineno}: unknown config key {key!r}", EXIT_USAGE)
        values[key] = value.strip()
    return values


class CliContext:
    """Resolved configuration plus a lazily loaded registry."""

    def __init__(self, settings: dict[str, str]):
        self.data_dir = Path(settings["data_dir"])
        self.gazetteer_path = Path(settings["gazetteer"])
        self.aliases_path = Path(settings["aliases"])
        self.regions_path = Path(settings["regions"])
        self.addr = settings["addr"]
        self.token_env = settings["token_env"]
        self._registry: AtlasRegistry | None = None

    def check_paths(self) -> None:
        for label, path in (
            ("data directory", self.data_dir),
            ("gazetteer", self.gazetteer_path),
            ("alias table", self.aliases_path),
            ("region table", self.regions_path),
        ):
            if not path.exists():
                raise CliError(f"missing {label}: {path}", EXIT_IO)

    def registry(self) -> AtlasRegistry:
        if self._registry is None:
            self.check_paths()
            aliases, regions = load_country_tables(self.aliases_path, self.regions_path)
            gazetteer = Gazetteer.from_tsv(self.gazetteer_path)
            self._registry = AtlasRegistry.load(
                self.data_dir, aliases=aliases, regions=regions, gazetteer=gazetteer
            )
        return self._registry

    def curator_token(self) -> str:
        return os.environ.get(self.token_env, "")


def _resolve_settings(ctx: click.Context, flags: dict[str, str | None]) -> dict[str, str]:
    config_path = flags.pop("config", None)
    config: dict[str, str] = {}
    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise CliError(f"missing config file: {path}", EXIT_IO)
        config = _load_config_file(path)
    elif Path("civicatlas.cfg").exists():
        config = _load_config_file(Path("civicatlas.cfg"))

    defaults = {
        "data_dir": "atlas-data",
        "gazetteer": str(DATA_DIR / "gazetteer.tsv"),
        "aliases": str(DATA_DIR / "country_aliases.tsv"),
        "regions": str(DATA_DIR / "country_regions.tsv"),
        "addr": DEFAULT_ADDR,
        "token_env": DEFAULT_TOKEN_ENV,
    }
    resolved: dict[str, str] = {}
    for key in CONFIG_KEYS:
        source = ctx.get_parameter_source(key)
        flag_value = flags.get(key)
        if flag_value is not None and source in (
            click.core.ParameterSource.COMMANDLINE,
            click.core.ParameterSource.ENVIRONMENT,
        ):
            resolved[key] = str(flag_value)
        elif key in config:
            resolved[key] = config[key]
        else:
            resolved[key] = defaults[key]
    return resolved


@click.group()
@click.option("--data-dir", "data_dir", envvar=f"{ENV_PREFIX}_DATA_DIR", default="atlas-data", help="Registry data directory.")
@click.option("--gazetteer", envvar=f"{ENV_PREFIX}_GAZETTEER", default=str(DATA_DIR / "gazetteer.tsv"), help="Gazetteer TSV path.")
@click.option("--aliases", envvar=f"{ENV_PREFIX}_ALIASES", default=str(DATA_DIR / "country_aliases.tsv"), help="Country alias TSV path.")
@click.option("--regions", envvar=f"{ENV_PREFIX}_REGIONS", default=str(DATA_DIR / "country_regions.tsv"), help="Country region TSV path.")
@click.option("--addr", envvar=f"{ENV_PREFIX}_ADDR", default=DEFAULT_ADDR, help="Serve address host:port.")
@click.option("--token-env", "token_env", envvar=f"{ENV_PREFIX}_TOKEN_ENV", default=DEFAULT_TOKEN_ENV, help="Environment variable holding the curator token.")
@click.option("--config", "config", default=None, help="key=value config file (lowest precedence).")
@click.pass_context
def cli(ctx, data_dir, gazetteer, aliases, regions, addr, token_env, config):
    """Governed registry and atlas tooling for participatory-AI project records."""
    settings = _resolve_settings(
        ctx,
        {
            "data_dir": data_dir,
            "gazetteer": gazetteer,
            "aliases": aliases,
            "regions": regions,
            "addr": addr,
            "token_env": token_env,
            "config": config,
        },
    )
    ctx.obj = CliContext(settings)


@cli.command("import")
@click.argument("csv_path", type=click.Path(path_type=Path))
@click.option("--reason", default="bulk import", show_default=True)
@click.pass_obj
def import_cmd(app: CliContext, csv_path: Path, reason: str):
    """Validate and load a canonical CSV into the working set."""
    if not csv_path.exists():
        raise CliError(f"missing input CSV: {csv_path}", EXIT_IO)
    registry = app.registry()
    try:
        records = import_csv(csv_path.read_text(encoding="utf-8"))
        imported = registry.import_records(records, reason=reason, contributor="cli")
    except CsvImportError as exc:
        for line, err in exc.row_errors:
            for issue in err.issues:
                click.echo(f"{csv_path}:{line}: {issue}", err=True)
        raise CliError(f"import failed: {len(exc.row_errors)} invalid row(s)", EXIT_VALIDATION)
    except AtlasError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    registry.save()
    click.echo(f"imported {len(imported)} records into {app.data_dir}")


@cli.command()
@click.pass_obj
def validate(app: CliContext):
    """Re-validate the working set and report MVPD insufficiencies."""
    registry = app.registry()
    invalid = 0
    insufficient = []
    for record_id in sorted(registry.records):
        record = registry.records[record_id]
        try:
            validate_record(record_to_row(record))
        except RecordValidationError as exc:
            invalid += 1
            for issue in exc.issues:
                click.echo(f"{record_id}: {issue}", err=True)
        result = mvpd_check(record)
        if not result.passed:
            insufficient.append((record_id, result.missing))
    click.echo(f"validated {len(registry.records)} records: {invalid} invalid")
    for record_id, missing in insufficient:
        click.echo(f"{record_id}: documentation-insufficient (missing: {', '.join(missing)})")
    if invalid:
        raise CliError(f"{invalid} invalid record(s)", EXIT_VALIDATION)


@cli.command()
@click.pass_obj
def harmonize(app: CliContext):
    """Normalize countries, re-map regions, and merge duplicate records."""
    registry = app.registry()
    summary = registry.harmonize_records(contributor="cli")
    registry.save()
    click.echo(f"harmonized: {summary['records']} records, {len(summary['merges'])} merge(s)")
    for merge in summary["merges"]:
        absorbed = ", ".join(merge["absorbed_ids"])
        click.echo(f"  {merge['dedup_key']}: kept {merge['survivor_id']}, absorbed {absorbed}")


@cli.command()
@click.pass_obj
def geocode(app: CliContext):
    """Resolve anchors for all records against the gazetteer."""
    registry = app.registry()
    summary = registry.geocode_records(contributor="cli")
    registry.save()
    click.echo(
        f"geocoded {summary['geocoded']} of {summary['records']} records "
        f"({summary['changed']} updated)"
    )


@cli.command()
@click.option("--output", "-o", type=click.Path(path_type=Path), default=None, help="Defaults to <data-dir>/metrics.json.")
@click.pass_obj
def metrics(app: CliContext, output: Path | None):
    """Write the canonical metrics document for the public projection."""
    registry = app.registry()
    document = registry.metrics_json()
    target = output or app.data_dir / "metrics.json"
    target.write_text(document, encoding="utf-8")
    click.echo(f"wrote metrics for {len(registry.records)} records to {target}")


@cli.group()
def release():
    """Release snapshot operations."""


@release.command("cut")
@click.argument("version")
@click.pass_obj
def release_cut(app: CliContext, version: str):
    """Publish an immutable snapshot under releases/VERSION."""
    registry = app.registry()
    try:
        manifest = registry.cut_release(version)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE)
    except AtlasError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    registry.save()
    click.echo(
        f"cut {manifest.version}: {manifest.record_count} records, "
        f"{manifest.geocoded_count} geocoded, {len(manifest.artifacts)} artifacts"
    )


@cli.command()
@click.argument("fmt", type=click.Choice(["csv", "json", "geojson"]))
@click.option("--output", "-o", type=click.Path(path_type=Path), default=None, help="Write to a file instead of stdout.")
@click.pass_obj
def export(app: CliContext, fmt: str, output: Path | None):
    """Export the public projection of the working set."""
    registry = app.registry()
    records = registry.public_records()
    exporters = {"csv": export_csv, "json": export_json, "geojson": export_geojson}
    document = exporters[fmt](records)
    if output is None:
        click.echo(document, nl=False)
    else:
        output.write_text(document, encoding="utf-8")
        click.echo(f"wrote {fmt} export of {len(records)} records to {output}")


@cli.command()
@click.argument("version_a")
@click.argument("version_b")
@click.pass_obj
def diff(app: CliContext, version_a: str, version_b: str):
    """Field-level diff between two published releases."""
    import json

    registry = app.registry()
    try:
        result = registry.diff_releases(version_a, version_b)
    except AtlasError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    click.echo(json.dumps(result.to_dict(), indent=2, sort_keys=True))


@cli.command()
@click.pass_obj
def serve(app: CliContext):
    """Run the HTTP API on the configured address."""
    import uvicorn

    from .service import create_app

    registry = app.registry()
    host, _, port = app.addr.partition(":")
    if not port.isdigit():
        raise CliError(f"--addr must look like host:port, got {app.addr!r}", EXIT_USAGE)
    application = create_app(registry, curator_token=app.curator_token())
    uvicorn.run(application, host=host or "127.0.0.1", port=int(port))


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except CliError as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_VALIDATION)
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        sys.exit(EXIT_IO)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
