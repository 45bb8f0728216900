"""Command-line pipeline: synth -> train -> generate -> evaluate, plus raw
tensor post-processing and level rendering.

Every command writes `<output>.manifest.json` echoing the fully resolved
configuration, the tool version, and the root seed of every RNG stream it
derived, so a run is reproducible from its manifest alone. Exit codes:
0 success, 1 usage/config error, 2 data/validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .board import postprocess
from .codec import (
    FormatError,
    encode_level,
    encode_report,
    load_corpus,
    load_tensors,
    plot_data_rows,
    save_corpus,
)
from .metrics import PICKS, SYMMETRY_METRICS, report, report_block, select_by_quantile
from .mrf import (
    NEIGHBORHOODS,
    NeighborhoodSpec,
    SamplerConfig,
    load_cpd,
    sample_many,
    save_cpd,
    train,
)
from .render import render_svg, render_text
from .synthesis import (
    AXES,
    CorpusSpec,
    CorpusSpecError,
    SYMMETRIES,
    filter_by_symmetry,
    preset_mirrored_mix,
    synthesize,
)

OUT_DIR_ENV = "MATCHGRID_OUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        raise UsageError(message)


def _resolve_out(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and p.parent == Path("."):
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _write_manifest(out: Path, command: str, config: dict[str, Any],
                    inputs: Sequence[str], outputs: Sequence[str]) -> None:
    manifest = {
        "tool": "matchgrid",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": list(inputs),
        "outputs": list(outputs),
    }
    Path(str(out) + ".manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e}") from e
    try:
        obj = json.loads(text)
        if not isinstance(obj, dict):
            raise UsageError(f"config file {path} must hold an object")
        return obj
    except json.JSONDecodeError:
        pass
    out: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _merge(flag_value, config: dict[str, Any], key: str, default, cast=None):
    """Flags win over the config file, which wins over defaults."""
    if flag_value is not None:
        return flag_value
    if key in config:
        value = config[key]
        return cast(value) if cast is not None else value
    return default


def _parse_weights(text) -> dict[str, float]:
    if isinstance(text, dict):
        return {k: float(v) for k, v in text.items()}
    out = {}
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError(f"tile weight {part!r} is not name=value")
        name, value = part.split("=", 1)
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"tile weight {part!r} has a non-numeric value") from None
    return out


def _parse_mask(value) -> tuple[str, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(str(row) for row in value)
    return tuple(str(value).split("/"))


def _seed_streams(seed: int, per_item: str) -> dict[str, Any]:
    return {
        "root_seed": seed,
        "stream_derivation": f"SeedSequence(entropy=root_seed, spawn_key=({per_item},))",
    }


def _cmd_synth(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config) if args.config else {}
    if args.preset is not None:
        if args.preset != "mirrored-mix":
            raise UsageError(f"unknown preset {args.preset!r}")
        base = preset_mirrored_mix(count=1)
        defaults = {
            "symmetry": base.symmetry,
            "strength": base.strength,
            "tile_weights": dict(base.tile_weights),
            "jelly_rate": base.jelly_rate,
            "lock_rate": base.lock_rate,
            "local_pattern_rate": base.local_pattern_rate,
        }
    else:
        probe = CorpusSpec(count=1)
        defaults = {
            "symmetry": probe.symmetry,
            "strength": probe.strength,
            "tile_weights": dict(probe.tile_weights),
            "jelly_rate": probe.jelly_rate,
            "lock_rate": probe.lock_rate,
            "local_pattern_rate": probe.local_pattern_rate,
        }

    count = _merge(args.count, config, "count", None, int)
    if count is None:
        raise UsageError("--count is required (flag or config file)")
    seed = _merge(args.seed, config, "seed", 0, int)
    weights = _merge(args.tile_weights, config, "tile_weights", defaults["tile_weights"],
                     _parse_weights)
    if not isinstance(weights, dict):
        weights = _parse_weights(weights)
    mask = _merge(args.mask, config, "board_mask", None, _parse_mask)
    try:
        spec_kwargs = dict(
            count=count,
            seed=seed,
            symmetry=_merge(args.symmetry, config, "symmetry", defaults["symmetry"], str),
            strength=_merge(args.strength, config, "strength", defaults["strength"], float),
            tile_weights=weights,
            jelly_rate=_merge(args.jelly_rate, config, "jelly_rate", defaults["jelly_rate"], float),
            lock_rate=_merge(args.lock_rate, config, "lock_rate", defaults["lock_rate"], float),
            local_pattern_rate=_merge(args.pattern_rate, config, "local_pattern_rate",
                                      defaults["local_pattern_rate"], float),
        )
        if mask is not None:
            spec_kwargs["board_mask"] = _parse_mask(mask)
        spec = CorpusSpec(**spec_kwargs)
        levels = synthesize(spec)
    except CorpusSpecError as e:
        raise UsageError(str(e)) from e
    out = _resolve_out(args.output)
    save_corpus(levels, out, meta={"seed": spec.seed, "generator": "synth"})
    resolved = dict(spec_kwargs)
    resolved["board_mask"] = list(spec.board_mask)
    resolved["rng"] = _seed_streams(spec.seed, "level_index")
    _write_manifest(out, "synth", resolved, [], [str(out)])
    print(f"wrote {len(levels)} levels to {out}")
    return EXIT_OK


def _cmd_filter(args: argparse.Namespace) -> int:
    if not (0.0 <= args.min_score <= 1.0):
        raise UsageError("--min-score must lie in [0, 1]")
    levels = load_corpus(args.input)
    kept = filter_by_symmetry(levels, args.axis, args.min_score)
    out = _resolve_out(args.output)
    save_corpus(
        kept, out,
        meta={"generator": "filter", "axis": args.axis, "min_score": args.min_score},
    )
    _write_manifest(out, "filter",
                    {"axis": args.axis, "min_score": args.min_score,
                     "kept": len(kept), "total": len(levels)},
                    [args.input], [str(out)])
    print(f"kept {len(kept)}/{len(levels)} levels -> {out}")
    return EXIT_OK


def _cmd_train(args: argparse.Namespace) -> int:
    levels = load_corpus(args.input)
    cpd = train(levels, NeighborhoodSpec(args.neighborhood))
    out = _resolve_out(args.output)
    save_cpd(cpd, out)
    _write_manifest(out, "train", {"neighborhood": args.neighborhood, "levels": len(levels)},
                    [args.input], [str(out)])
    print(f"trained {args.neighborhood} model on {len(levels)} levels -> {out}")
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    cpd = load_cpd(args.model)
    config = SamplerConfig(sweeps=args.sweeps, scan=args.scan, seed=args.seed, init=args.init)
    levels = sample_many(cpd, config, args.n)
    out = _resolve_out(args.output)
    save_corpus(
        levels, out,
        meta={"seed": config.seed, "generator": f"mrf-{cpd.neighborhood.kind}"},
    )
    resolved = {
        "model": args.model, "n": args.n, "sweeps": config.sweeps,
        "scan": config.scan, "init": config.init, "seed": config.seed,
        "rng": _seed_streams(config.seed, "level_index"),
    }
    _write_manifest(out, "generate", resolved, [args.model], [str(out)])
    print(f"generated {len(levels)} levels -> {out}")
    return EXIT_OK


def _cmd_postprocess(args: argparse.Namespace) -> int:
    tensors = load_tensors(args.input)
    levels = [postprocess(t) for t in tensors]
    out = _resolve_out(args.output)
    save_corpus(levels, out, meta={"generator": "postprocess"})
    _write_manifest(out, "postprocess", {"tensors": len(tensors)}, [args.input], [str(out)])
    print(f"post-processed {len(tensors)} tensors -> {out}")
    return EXIT_OK


def _parse_labeled_input(arg: str) -> tuple[str, str]:
    if "=" in arg:
        label, path = arg.split("=", 1)
        if label:
            return label, path
    return Path(arg).stem, arg


def _cmd_evaluate(args: argparse.Namespace) -> int:
    labeled = [_parse_labeled_input(a) for a in args.input]
    sets = []
    for label, path in labeled:
        levels = load_corpus(path)
        if not levels:
            raise FormatError(f"corpus {path} is empty; nothing to evaluate")
        sets.append((label, path, levels, report(levels)))

    out = _resolve_out(args.output)
    blocks = [report_block(label, rep) for label, _, _, rep in sets]
    picks_summary = []
    outputs = [str(out)]
    if args.pick:
        picks = [p.strip() for p in args.pick.split(",") if p.strip()]
        bad = [p for p in picks if p not in PICKS]
        if bad:
            raise UsageError(f"unknown picks {bad}; choose from {list(PICKS)}")
        pick_dir = Path(args.pick_out) if args.pick_out else out.parent
        pick_dir.mkdir(parents=True, exist_ok=True)
        for label, _, levels, _rep in sets:
            for chosen in select_by_quantile(levels, args.metric, picks):
                dest = pick_dir / f"{label}_{args.metric}_{chosen.pick}.level.json"
                dest.write_bytes(encode_level(levels[chosen.index]))
                outputs.append(str(dest))
                picks_summary.append({
                    "label": label, "pick": chosen.pick, "index": chosen.index,
                    "score": chosen.score, "path": str(dest),
                })
    out.write_bytes(encode_report(blocks, picks_summary))
    if args.plot_data:
        plot_path = _resolve_out(args.plot_data)
        plot_path.write_text(
            plot_data_rows([(label, rep) for label, _, _, rep in sets]), encoding="utf-8"
        )
        outputs.append(str(plot_path))
    _write_manifest(
        out, "evaluate",
        {
            "inputs": [{"label": l, "path": p} for l, p in labeled],
            "metric": args.metric, "pick": args.pick,
        },
        [p for _, p in labeled], outputs,
    )
    for label, _, _, rep in sets:
        med = {m: rep.aggregates[m].median for m in SYMMETRY_METRICS}
        print(
            f"{label}: median vertical={med['vertical']:.3f} "
            f"horizontal={med['horizontal']:.3f} diagonal={med['diagonal']:.3f}"
        )
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    levels = load_corpus(args.input)
    if not levels:
        raise FormatError(f"corpus {args.input} is empty; nothing to render")
    renderer = render_text if args.format == "text" else render_svg
    suffix = "txt" if args.format == "text" else "svg"
    out = _resolve_out(args.output)
    if args.all:
        out.mkdir(parents=True, exist_ok=True)
        outputs = []
        for i, level in enumerate(levels):
            dest = out / f"level_{i:04d}.{suffix}"
            dest.write_text(renderer(level), encoding="utf-8")
            outputs.append(str(dest))
        _write_manifest(out, "render", {"format": args.format, "all": True},
                        [args.input], outputs)
        print(f"rendered {len(levels)} levels into {out}")
    else:
        if not (0 <= args.index < len(levels)):
            raise FormatError(
                f"level index {args.index} out of range for corpus of {len(levels)}"
            )
        out.write_text(renderer(levels[args.index]), encoding="utf-8")
        _write_manifest(out, "render", {"format": args.format, "index": args.index},
                        [args.input], [str(out)])
        print(f"rendered level {args.index} -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matchgrid", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"matchgrid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a training corpus")
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--symmetry", choices=SYMMETRIES)
    p.add_argument("--strength", type=float)
    p.add_argument("--tile-weights", help="e.g. empty=0.5,regular=0.3,special=0.08,block=0.12")
    p.add_argument("--jelly-rate", type=float)
    p.add_argument("--lock-rate", type=float)
    p.add_argument("--pattern-rate", type=float)
    p.add_argument("--mask", help="9 rows of 9 chars ('.'=free '#'=void) joined by '/'")
    p.add_argument("--preset", help="named spec preset: mirrored-mix")
    p.add_argument("--config", help="JSON or key=value config file; flags win")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("filter", help="keep levels above a symmetry threshold")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--axis", choices=AXES, default="vertical")
    p.add_argument("--min-score", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("train", help="train an MRF model on a corpus")
    p.add_argument("--neighborhood", choices=NEIGHBORHOODS, default="global")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("generate", help="sample levels from a trained model")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweeps", type=int, default=50)
    p.add_argument("--scan", choices=("random", "raster"), default="random")
    p.add_argument("--init", choices=("marginal", "uniform-valid"), default="marginal")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("postprocess", help="repair raw tensors into valid levels")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_postprocess)

    p = sub.add_parser("evaluate", help="score one or more corpora")
    p.add_argument("-i", "--input", action="append", required=True,
                   help="corpus path, optionally label=path; repeatable")
    p.add_argument("-o", "--output", required=True, help="report file")
    p.add_argument("--plot-data", help="write per-level CSV rows for boxplots")
    p.add_argument("--pick", help="comma list from min,median,max to export levels")
    p.add_argument("--metric", choices=SYMMETRY_METRICS, default="vertical")
    p.add_argument("--pick-out", help="directory for picked levels")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("render", help="render levels as text or SVG")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--all", action="store_true")
    p.add_argument("--format", choices=("text", "svg"), default="text")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
