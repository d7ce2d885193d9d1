"""Command-line front end.

Subcommands: index, spectrum, verify-pair, build, homology, scan, catalog.
Human-readable output by default, --json for machine consumption.  Every
randomized path prints the seed it used; the default seed comes from the
LIEPOSET_SEED environment variable (else 0).  Exit codes: 0 success,
1 domain error, 2 usage error.
"""
from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import algebra as alg
from . import scan as scan_mod
from . import spectral, topology, toral
from .errors import LiePosetError
from .poset import Poset, height
from .toral import ToralPairId


def _default_seed():
    try:
        return int(os.environ.get("LIEPOSET_SEED", "0"))
    except ValueError:
        return 0


def _echo_json(payload):
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def _load_poset(path):
    return Poset.load(path)


def _load_functional(path):
    return alg.Functional.load(path)


class _DomainErrors(click.Group):
    """Convert domain errors into exit code 1 with a message on stderr."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except LiePosetError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(1)


@click.group(cls=_DomainErrors)
@click.version_option(package_name="lieposet")
def main():
    """Exact index, spectrum, and toral-poset computations on finite posets."""


@main.command("index")
@click.argument("poset_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--trials", default=3, show_default=True, help="Random functionals to try.")
@click.option("--seed", default=None, type=int, help="RNG seed (default: LIEPOSET_SEED or 0).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def index_cmd(poset_file, trials, seed, as_json):
    """Index of the algebra of POSET_FILE by randomized generic rank."""
    seed = _default_seed() if seed is None else seed
    poset = _load_poset(poset_file)
    g = alg.build_algebra(poset)
    value = alg.index(g, trials=trials, seed=seed)
    if as_json:
        _echo_json({"index": value, "dim": g.dim, "seed": seed, "trials": trials})
    else:
        click.echo(f"# seed={seed} trials={trials}")
        click.echo(f"dim  : {g.dim}")
        click.echo(f"index: {value}")


@main.command("spectrum")
@click.argument("poset_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("functional_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def spectrum_cmd(poset_file, functional_file, as_json):
    """Spectrum of ad of the principal element of the given functional."""
    poset = _load_poset(poset_file)
    functional = _load_functional(functional_file)
    g = alg.build_algebra(poset)
    try:
        fhat = spectral.principal_small(poset, functional, g)
    except LiePosetError:
        fhat = spectral.principal_general(g, functional)
    report = spectral.spectrum(g, fhat)
    if as_json:
        _echo_json(report.to_dict())
    else:
        click.echo(f"dim      : {report.dim}")
        click.echo(f"char poly: {[str(c) for c in report.char_poly]}")
        click.echo(f"zero mult: {report.zero_mult}")
        click.echo(f"one mult : {report.one_mult}")
        click.echo(f"binary   : {report.is_binary}")


def _resolve_pair(args):
    """verify-pair accepts either a family (plus optional n) or two files."""
    if len(args) == 2 and Path(args[0]).exists() and Path(args[1]).exists():
        return _load_poset(args[0]), _load_functional(args[1]), None
    family = args[0]
    n = None
    if len(args) == 2:
        if not args[1].isdigit():
            raise click.UsageError(f"size parameter must be an integer, got {args[1]!r}")
        n = int(args[1])
    pid = ToralPairId(family, n)
    poset, functional = toral.catalog(pid)
    return poset, functional, pid


@main.command("verify-pair")
@click.argument("args", nargs=-1, required=True)
@click.option("--json", "as_json", is_flag=True)
def verify_pair_cmd(args, as_json):
    """Check the toral-pair conditions for FAMILY [N] or POSET.json FUNCTIONAL.json."""
    if len(args) not in (1, 2):
        raise click.UsageError("expected FAMILY [N] or POSET.json FUNCTIONAL.json")
    poset, functional, pid = _resolve_pair(list(args))
    report = toral.verify_toral_pair(poset, functional)
    label = pid.label() if pid else args[0]
    if as_json:
        _echo_json({"pair": label, "report": report.to_dict(), "all_ok": report.all_ok})
    else:
        click.echo(f"pair: {label}")
        for key, val in report.to_dict().items():
            click.echo(f"  {key:13s}: {'ok' if val else 'FAIL'}")
        click.echo(f"verdict: {'toral-pair' if report.all_ok else 'NOT a toral-pair'}")
    if not report.all_ok:
        sys.exit(1)


@main.command("build")
@click.argument("sequence_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--emit", type=click.Choice(["poset", "functional", "all"]), default="all",
              show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Write emitted JSON files into this directory.")
@click.option("--json", "as_json", is_flag=True)
def build_cmd(sequence_file, emit, out_dir, as_json):
    """Run a construction-sequence file and emit the resulting pair."""
    with open(sequence_file) as fh:
        seq = toral.parse_sequence(fh.read())
    result = toral.build_sequence(seq)
    payload = {
        "elements": len(result.poset),
        "rules": seq.rules(),
        "index_by_formula": toral.index_by_formula(result.poset),
        "index_by_rules": toral.predict_index_by_rules(seq),
        "functional_defined": result.functional is not None,
    }
    if emit in ("functional", "all") and result.functional is None:
        result.functional_or_raise()  # raises FunctionalUndefined unless emit=poset
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if emit in ("poset", "all"):
            result.poset.save(out / "poset.json")
            payload["poset_file"] = str(out / "poset.json")
        if emit in ("functional", "all"):
            result.functional.save(out / "functional.json")
            payload["functional_file"] = str(out / "functional.json")
    else:
        if emit in ("poset", "all"):
            payload["poset"] = result.poset.to_dict()
        if emit in ("functional", "all"):
            payload["functional"] = result.functional.to_dict()
    if as_json:
        _echo_json(payload)
    else:
        click.echo(f"elements          : {payload['elements']}")
        click.echo(f"rules             : {' '.join(payload['rules']) or '(seed only)'}")
        click.echo(f"index (formula)   : {payload['index_by_formula']}")
        click.echo(f"index (rules)     : {payload['index_by_rules']}")
        click.echo(f"functional defined: {payload['functional_defined']}")
        for key in ("poset_file", "functional_file"):
            if key in payload:
                click.echo(f"{key:18s}: {payload[key]}")
        if "poset" in payload:
            click.echo(json.dumps(payload["poset"], sort_keys=True))
        if "functional" in payload:
            click.echo(json.dumps(payload["functional"], sort_keys=True))


@main.command("homology")
@click.argument("poset_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-dim", default=None, type=int, help="Top homology degree (default: height).")
@click.option("--json", "as_json", is_flag=True)
def homology_cmd(poset_file, max_dim, as_json):
    """Betti numbers of the order complex of POSET_FILE."""
    poset = _load_poset(poset_file)
    complex_ = topology.order_complex(poset)
    if max_dim is None:
        max_dim = height(poset)
    report = topology.betti_numbers(complex_, max_dim=max_dim)
    if as_json:
        _echo_json(report.to_dict())
    else:
        click.echo(f"faces: {list(report.face_counts)}")
        click.echo(f"euler: {report.euler}")
        click.echo(f"betti: {list(report.betti)}")


@main.command("scan")
@click.option("--n", "n_max", default=6, show_default=True, help="Max element count.")
@click.option("--height", "height_max", default=None, type=int, help="Height cap.")
@click.option("--connected/--all-posets", default=True, show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--trials", default=3, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="JSON-lines output file.")
@click.option("--resume", "resume_path", type=click.Path(dir_okay=False), default=None,
              help="Skip canonical forms already present in this records file.")
@click.option("--workers", default=1, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def scan_cmd(n_max, height_max, connected, seed, trials, out_path, resume_path,
             workers, as_json):
    """Scan all posets up to --n elements for the binary-spectrum property."""
    seed = _default_seed() if seed is None else seed
    config = scan_mod.ScanConfig(n_max=n_max, height_max=height_max,
                                 connected_only=connected, seed=seed, trials=trials)
    records = scan_mod.scan_binary_spectrum(config, out_path=out_path,
                                            resume_path=resume_path,
                                            workers=workers, progress=True)
    frobenius = [r for r in records if r.frobenius]
    bad = scan_mod.counterexamples(records)
    summary = {
        "config": config.to_dict(),
        "posets": len(records),
        "frobenius": len(frobenius),
        "binary": sum(1 for r in frobenius if r.binary),
        "counterexamples": [r.to_dict() for r in bad],
    }
    if as_json:
        _echo_json(summary)
    else:
        click.echo(f"# seed={seed} trials={trials}")
        click.echo(f"posets analyzed : {summary['posets']}")
        click.echo(f"frobenius       : {summary['frobenius']}")
        click.echo(f"binary spectra  : {summary['binary']}")
        if bad:
            click.echo("!! COUNTEREXAMPLES FOUND: Frobenius posets without binary spectrum:")
            for r in bad:
                click.echo(f"  {json.dumps(r.to_dict(), sort_keys=True)}")
        else:
            click.echo("counterexamples : none")
        if out_path:
            click.echo(f"records written : {out_path}")


@main.command("catalog")
@click.argument("family")
@click.argument("n", required=False, type=int)
@click.option("--emit", is_flag=True, help="Write poset.json/functional.json files.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".",
              show_default=True)
@click.option("--json", "as_json", is_flag=True)
def catalog_cmd(family, n, emit, out_dir, as_json):
    """Emit the certified pair FAMILY [N] from the catalog."""
    pid = ToralPairId(family, n)
    poset, functional = toral.catalog(pid)
    payload = {"pair": pid.label(), "poset": poset.to_dict(),
               "functional": functional.to_dict()}
    if emit:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = pid.label().replace(",", "_").replace("*", "s")
        poset_path = out / f"{stem}.poset.json"
        functional_path = out / f"{stem}.functional.json"
        poset.save(poset_path)
        functional.save(functional_path)
        payload["poset_file"] = str(poset_path)
        payload["functional_file"] = str(functional_path)
    if as_json:
        _echo_json(payload)
    else:
        click.echo(f"pair: {payload['pair']}")
        click.echo(f"poset: {json.dumps(payload['poset'], sort_keys=True)}")
        click.echo(f"functional: {json.dumps(payload['functional'], sort_keys=True)}")
        for key in ("poset_file", "functional_file"):
            if key in payload:
                click.echo(f"{key}: {payload[key]}")


if __name__ == "__main__":
    main()
