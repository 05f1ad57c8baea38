"""Command-line entry point.

Subcommands::

  iov-bazaar run --config cfg.json --seed 7 [--mechanism madrl] [--name x]
  iov-bazaar figures <metrics-dir> [--out <dir>]
  iov-bazaar kpabe setup|keygen|seal|open|cover ...

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
from pathlib import Path

import numpy as np

from . import kpabe
from .config import MECHANISMS, ConfigError, ExperimentConfig
from .experiment import run_experiment, summarize_figures

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iov-bazaar",
        description="Deterministic IoV data-market simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train or evaluate one seeded run")
    run.add_argument("--config", type=Path, default=None,
                     help="JSON config file (defaults apply when omitted)")
    run.add_argument("--seed", type=int, required=True,
                     help="unsigned 64-bit run seed")
    run.add_argument("--mechanism", choices=MECHANISMS, default=None,
                     help="override the config's mechanism selector")
    run.add_argument("--vehicles", type=int, default=None,
                     help="override the config's vehicle count")
    run.add_argument("--epochs", type=int, default=None,
                     help="override the config's epoch count")
    run.add_argument("--name", default=None, help="run directory name")
    run.add_argument("--out", type=Path, default=Path("runs"),
                     help="root output directory (default: runs)")

    figs = sub.add_parser("figures", help="aggregate metrics into figure CSVs")
    figs.add_argument("metrics_dir", type=Path)
    figs.add_argument("--out", type=Path, default=None)

    kp = sub.add_parser("kpabe", help="time-sensitive KP-ABE file workflow")
    kpsub = kp.add_subparsers(dest="verb", required=True)

    setup = kpsub.add_parser("setup", help="generate public params + master key")
    setup.add_argument("--attributes", type=int, required=True)
    setup.add_argument("--base-year", type=int, default=2020)
    setup.add_argument("--seed", type=int, required=True)
    setup.add_argument("--out", type=Path, default=Path("."))

    keygen = kpsub.add_parser("keygen", help="derive a private key")
    keygen.add_argument("--pk", type=Path, required=True)
    keygen.add_argument("--mk", type=Path, required=True)
    keygen.add_argument("--identity", type=int, required=True)
    keygen.add_argument("--policy", required=True,
                        help='boolean formula over attr_1..attr_U, e.g. '
                             '"attr_1 AND (attr_2 OR attr_3)"')
    keygen.add_argument("--start", required=True, help="YYYY-MM-DD")
    keygen.add_argument("--end", required=True, help="YYYY-MM-DD")
    keygen.add_argument("--seed", type=int, required=True)
    keygen.add_argument("--out", type=Path, required=True)

    seal = kpsub.add_parser("seal", help="hybrid-encrypt a file")
    seal.add_argument("--pk", type=Path, required=True)
    seal.add_argument("--attributes", required=True,
                      help="comma-separated 1-based attribute indices")
    seal.add_argument("--start", required=True, help="YYYY-MM-DD")
    seal.add_argument("--end", required=True, help="YYYY-MM-DD")
    seal.add_argument("--seed", type=int, required=True)
    seal.add_argument("--in", dest="infile", type=Path, required=True)
    seal.add_argument("--out", type=Path, required=True)

    opn = kpsub.add_parser("open", help="decrypt a sealed file")
    opn.add_argument("--pk", type=Path, required=True)
    opn.add_argument("--key", type=Path, required=True)
    opn.add_argument("--in", dest="infile", type=Path, required=True)
    opn.add_argument("--out", type=Path, required=True)

    cover = kpsub.add_parser("cover", help="print the minimal time-node cover")
    cover.add_argument("--start", required=True, help="YYYY-MM-DD")
    cover.add_argument("--end", required=True, help="YYYY-MM-DD")
    cover.add_argument("--base-year", type=int, default=2020)
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}")
        config = ExperimentConfig.from_json(text)
    else:
        config = ExperimentConfig()
    overrides = {}
    if args.mechanism is not None:
        overrides["mechanism"] = args.mechanism
    if args.vehicles is not None:
        overrides["num_vehicles"] = args.vehicles
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    if overrides:
        merged = config.to_dict()
        merged.update(overrides)
        config = ExperimentConfig.from_dict(merged)
    config.validate()
    return config


def _parse_date(text: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError as exc:
        raise ConfigError(f"date: {exc}")


def _cover_nodes(tree: kpabe.TimeTree, start: str, end: str):
    s, e = _parse_date(start), _parse_date(end)
    if e < s:
        raise ConfigError(f"period: end {e} precedes start {s}")
    try:
        return kpabe.set_cover(tree, s, e)
    except kpabe.RangeError as exc:
        raise ConfigError(f"period: {exc}")


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args)
    if args.seed < 0 or args.seed >= 2 ** 64:
        raise ConfigError("seed: must fit in an unsigned 64-bit integer")
    name = args.name or f"{config.mechanism}-V{config.num_vehicles}-seed{args.seed}"
    rows = run_experiment(config, args.seed, args.out / name)
    print(f"wrote {len(rows)} epochs to {args.out / name}")
    return EXIT_OK


def cmd_figures(args: argparse.Namespace) -> int:
    if not args.metrics_dir.is_dir():
        raise ConfigError(f"metrics_dir: {args.metrics_dir} is not a directory")
    written = summarize_figures(args.metrics_dir, args.out)
    for path in written:
        print(path)
    return EXIT_OK


def cmd_kpabe(args: argparse.Namespace) -> int:
    backend = kpabe.SymbolicBackend()

    if args.verb == "cover":
        tree = kpabe.TimeTree(base_year=args.base_year)
        for node in _cover_nodes(tree, args.start, args.end):
            print("-".join(map(str, node)))
        return EXIT_OK

    if args.verb == "setup":
        if args.attributes < 1:
            raise ConfigError("attributes: must be >= 1")
        rng = np.random.default_rng(args.seed)
        tree = kpabe.TimeTree(base_year=args.base_year)
        pk, mk = kpabe.setup(args.attributes, tree, rng, backend)
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "pk.json").write_text(kpabe.serialize_public_params(pk))
        (args.out / "mk.json").write_text(kpabe.serialize_master_key(mk))
        print(args.out / "pk.json")
        print(args.out / "mk.json")
        return EXIT_OK

    pk = kpabe.deserialize_public_params(args.pk.read_text())

    if args.verb == "keygen":
        mk = kpabe.deserialize_master_key(args.mk.read_text())
        if args.identity <= 0:
            raise ConfigError("identity: must be a positive integer")
        try:
            access = kpabe.formula_to_lsss(args.policy)
        except kpabe.UnsupportedFormula as exc:
            raise ConfigError(f"policy: {exc}")
        row_index = []
        for attr in access.row_attrs:
            if not attr.startswith("attr_") or not attr[5:].isdigit():
                raise ConfigError(f"policy: attribute '{attr}' is not attr_<i>")
            idx = int(attr[5:])
            if not 1 <= idx <= pk.num_attributes:
                raise ConfigError(f"policy: attr_{idx} outside 1..{pk.num_attributes}")
            row_index.append(idx)
        periods = _cover_nodes(pk.tree, args.start, args.end)
        rng = np.random.default_rng(args.seed)
        sk = kpabe.keygen(mk, pk, args.identity, periods, access,
                          row_index, rng, backend)
        args.out.write_text(kpabe.serialize_private_key(sk))
        print(args.out)
        return EXIT_OK

    if args.verb == "seal":
        try:
            attrs = [int(x) for x in args.attributes.split(",") if x.strip()]
        except ValueError:
            raise ConfigError("attributes: expected comma-separated integers")
        if not attrs or any(not 1 <= a <= pk.num_attributes for a in attrs):
            raise ConfigError(f"attributes: indices must lie in 1..{pk.num_attributes}")
        periods = _cover_nodes(pk.tree, args.start, args.end)
        rng = np.random.default_rng(args.seed)
        content = args.infile.read_bytes()
        sealed = kpabe.hybrid_seal(content, pk, periods, attrs, rng, backend)
        args.out.write_bytes(sealed)
        print(args.out)
        return EXIT_OK

    if args.verb == "open":
        sk = kpabe.deserialize_private_key(args.key.read_text())
        sealed = args.infile.read_bytes()
        result = kpabe.hybrid_open(sealed, sk, pk, backend)
        if isinstance(result, kpabe.Bottom):
            print(f"decryption refused: {type(result).__name__}", file=sys.stderr)
            return EXIT_RUNTIME
        args.out.write_bytes(result)
        print(args.out)
        return EXIT_OK

    raise ConfigError(f"unknown kpabe verb: {args.verb}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "figures":
            return cmd_figures(args)
        if args.command == "kpabe":
            return cmd_kpabe(args)
        raise ConfigError(f"unknown command: {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except kpabe.MalformedSealedFile as exc:
        print(f"runtime error: malformed sealed file: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - defensive catch-all
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
