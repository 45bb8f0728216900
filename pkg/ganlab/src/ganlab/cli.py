"""Command line for adversarial level-generator experiments.

`ganlab train` fits a generator on a level corpus file; `ganlab generate`
exports raw tensors for the level toolkit's `postprocess` command. Each
command writes `<output>.manifest.json` with the resolved configuration.
Exit codes: 0 success, 1 usage/config error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .formats import CorpusFormatError, load_corpus_channels, save_raw_tensors
from .models import ARCHITECTURES
from .sampling import generate_raw
from .training import GanConfig, load_checkpoint, train_gan

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _write_manifest(out: Path, command: str, config: dict, inputs: list[str]) -> None:
    manifest = {
        "tool": "ganlab",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": inputs,
        "outputs": [str(out)],
    }
    Path(str(out) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _cmd_train(args: argparse.Namespace) -> int:
    try:
        config = GanConfig(
            architecture=args.arch,
            epochs=args.epochs,
            latent_dim=args.latent_dim,
            seed=args.seed,
            batch_size=args.batch_size,
        )
    except ValueError as e:
        raise UsageError(str(e)) from e
    channels = load_corpus_channels(args.input)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    train_gan(channels, config, checkpoint_path=out,
              log=lambda line: print(line, flush=True))
    from dataclasses import asdict

    _write_manifest(out, "train", {**asdict(config), "levels": int(channels.shape[0])},
                    [args.input])
    print(f"trained {config.architecture} generator on {channels.shape[0]} levels -> {out}")
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    ckpt = load_checkpoint(args.model)
    tensors = generate_raw(ckpt, args.n, args.seed, expect_architecture=args.arch)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_raw_tensors(tensors, out)
    _write_manifest(out, "generate",
                    {"model": str(args.model), "n": args.n, "seed": args.seed,
                     "architecture": ckpt["architecture"]},
                    [str(args.model)])
    print(f"generated {args.n} raw tensors -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ganlab", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"ganlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a generator on a corpus file")
    p.add_argument("-i", "--input", required=True, help="level corpus file")
    p.add_argument("--arch", choices=ARCHITECTURES, default="global")
    p.add_argument("--epochs", type=int, default=5000)
    p.add_argument("--latent-dim", type=int, default=32)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="checkpoint file")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("generate", help="export raw tensors from a checkpoint")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--arch", choices=ARCHITECTURES,
                   help="assert the checkpoint architecture")
    p.add_argument("-o", "--output", required=True, help="raw tensor file")
    p.set_defaults(func=_cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusFormatError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
