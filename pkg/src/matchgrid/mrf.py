"""Markov random field level generators.

The local neighborhood is the four orthogonally adjacent positions; the
global neighborhood appends the vertically and horizontally mirrored
positions of the center, which lets the model condition on the far side of
the board and reproduce mirror symmetry. Conditional distributions are
exact corpus counts with a backoff chain for unseen contexts; generation is
sequential Gibbs sweeps over the 81 cells.

Conditioning keys have a fixed width (4 local, 6 global). Off-board
neighbors condition on the BORDER token; a slot whose position coincides
with the center (the mirrors on the axis rows/columns) holds the SELF
token, which keeps the key layout unambiguous at every position.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .board import BORDER, SELF, SIZE, Level, check_levels, expand
from .codec import FORMAT_VERSION, FormatError

NEIGHBORHOODS = ("local4", "global")

_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass(frozen=True, slots=True)
class NeighborhoodSpec:
    """Which positions a cell is conditioned on."""

    kind: str = "global"

    def __post_init__(self) -> None:
        if self.kind not in NEIGHBORHOODS:
            raise ValueError(f"kind must be one of {NEIGHBORHOODS}, got {self.kind!r}")

    @property
    def key_len(self) -> int:
        return 4 if self.kind == "local4" else 6

    def slots(self, r: int, c: int) -> list[tuple[int, int] | None]:
        """Fixed-width conditioning slots for center (r, c).

        Entries are board positions (possibly off-board) or None where the
        slot was removed because it duplicated the center or an earlier slot.
        """
        if not (0 <= r < SIZE and 0 <= c < SIZE):
            raise ValueError(f"center ({r},{c}) is outside the board")
        positions = [(r + dr, c + dc) for dr, dc in _OFFSETS]
        if self.kind == "global":
            positions += [(r, SIZE - 1 - c), (SIZE - 1 - r, c)]
        out: list[tuple[int, int] | None] = []
        for pos in positions:
            if pos == (r, c) or pos in out:
                out.append(None)
            else:
                out.append(pos)
        return out


def neighborhood_positions(
    spec: NeighborhoodSpec, r: int, c: int
) -> list[tuple[tuple[int, int], bool]]:
    """Ordered conditioning positions with an off-board flag, removed slots
    (mirrors coinciding with the center) omitted."""
    return [
        (pos, not (0 <= pos[0] < SIZE and 0 <= pos[1] < SIZE))
        for pos in spec.slots(r, c)
        if pos is not None
    ]


def _slot_tokens_grid(spec: NeighborhoodSpec) -> list[list[int]]:
    """Per cell (row-major), the flat-index recipe for building keys.

    Indices 0..80 read the board; 81 injects BORDER and 82 SELF, so a key is
    just a gather over the 83-slot padded board vector.
    """
    recipes = []
    for r in range(SIZE):
        for c in range(SIZE):
            recipe = []
            for pos in spec.slots(r, c):
                if pos is None:
                    recipe.append(SIZE * SIZE + 1)
                elif 0 <= pos[0] < SIZE and 0 <= pos[1] < SIZE:
                    recipe.append(pos[0] * SIZE + pos[1])
                else:
                    recipe.append(SIZE * SIZE)
            recipes.append(recipe)
    return recipes


Counts = dict[int, int]


@dataclass
class Cpd:
    """Conditional probability tables with backoff tiers.

    Tier order when answering a lookup: full neighborhood key, then (global
    kind only) the local-4 prefix, then per-slot single-neighbor tables
    (averaged over the slots that match), then the corpus-wide marginal.
    """

    neighborhood: NeighborhoodSpec
    full: dict[tuple[int, ...], Counts] = field(default_factory=dict)
    local4: dict[tuple[int, ...], Counts] = field(default_factory=dict)
    single: list[dict[int, Counts]] = field(default_factory=list)
    marginal: Counts = field(default_factory=dict)

    def observed_tiles(self) -> list[int]:
        return sorted(self.marginal)


def _bump(table: Counts, tile: int) -> None:
    table[tile] = table.get(tile, 0) + 1


def train(levels: Sequence[Level], spec: NeighborhoodSpec) -> Cpd:
    """Count (neighbor tuple -> center tile) over every position of every
    level, in every tier. Exact counts, no subsampling, no smoothing."""
    levels = check_levels(levels)
    recipes = _slot_tokens_grid(spec)
    cpd = Cpd(neighborhood=spec, single=[{} for _ in range(spec.key_len)])
    for level in levels:
        flat = [int(t) for t in level.tile_grid().ravel()] + [BORDER, SELF]
        for i in range(SIZE * SIZE):
            center = flat[i]
            key = tuple(flat[j] for j in recipes[i])
            _bump(cpd.full.setdefault(key, {}), center)
            if spec.kind == "global":
                _bump(cpd.local4.setdefault(key[:4], {}), center)
            for s, token in enumerate(key):
                _bump(cpd.single[s].setdefault(token, {}), center)
            _bump(cpd.marginal, center)
    return cpd


def _normalize(counts: Counts) -> dict[int, float]:
    total = sum(counts.values())
    return {tile: n / total for tile, n in sorted(counts.items())}


def lookup(cpd: Cpd, neighbor_values: Sequence[int]) -> dict[int, float]:
    """Distribution over center tiles for an ordered neighbor-token tuple.

    Falls through the tier chain until a table matches; the marginal tier
    always matches after training, so this never fails.
    """
    key = tuple(int(t) for t in neighbor_values)
    if len(key) != cpd.neighborhood.key_len:
        raise ValueError(
            f"key length {len(key)} does not match neighborhood width "
            f"{cpd.neighborhood.key_len}"
        )
    hit = cpd.full.get(key)
    if hit is not None:
        return _normalize(hit)
    if cpd.neighborhood.kind == "global":
        hit = cpd.local4.get(key[:4])
        if hit is not None:
            return _normalize(hit)
    matched = [
        _normalize(cpd.single[s][token])
        for s, token in enumerate(key)
        if token in cpd.single[s]
    ]
    if matched:
        out: dict[int, float] = {}
        for dist in matched:
            for tile, p in dist.items():
                out[tile] = out.get(tile, 0.0) + p / len(matched)
        return dict(sorted(out.items()))
    if not cpd.marginal:
        raise ValueError("lookup on an untrained model")
    return _normalize(cpd.marginal)


@dataclass(frozen=True, slots=True)
class SamplerConfig:
    sweeps: int = 50
    scan: str = "random"
    seed: int = 0
    init: str = "marginal"

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.scan not in ("random", "raster"):
            raise ValueError(f"scan must be 'random' or 'raster', got {self.scan!r}")
        if self.init not in ("marginal", "uniform-valid"):
            raise ValueError(f"init must be 'marginal' or 'uniform-valid', got {self.init!r}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")


class _GibbsSampler:
    """Reusable sampling state: key recipes plus a cache of cumulative
    distributions per conditioning key (lookup results are immutable once
    the model is trained)."""

    def __init__(self, cpd: Cpd):
        if not cpd.marginal:
            raise ValueError("cannot sample from an untrained model")
        self.cpd = cpd
        self.recipes = [tuple(r) for r in _slot_tokens_grid(cpd.neighborhood)]
        self._cum: dict[tuple[int, ...], tuple[list[int], list[float]]] = {}
        self.tiles_marginal, self.cum_marginal = self._to_cum(_normalize(cpd.marginal))

    @staticmethod
    def _to_cum(dist: dict[int, float]) -> tuple[list[int], list[float]]:
        tiles = list(dist)
        cum = list(np.cumsum(list(dist.values())))
        cum[-1] = 1.0
        return tiles, cum

    def conditional(self, key: tuple[int, ...]) -> tuple[list[int], list[float]]:
        cached = self._cum.get(key)
        if cached is None:
            cached = self._to_cum(lookup(self.cpd, key))
            self._cum[key] = cached
        return cached

    def run(self, config: SamplerConfig, seed_seq: np.random.SeedSequence) -> Level:
        rng = np.random.default_rng(seed_seq)
        n = SIZE * SIZE
        if config.init == "marginal":
            us = rng.random(n)
            flat = [self.tiles_marginal[bisect_right(self.cum_marginal, u)] for u in us]
        else:
            observed = self.cpd.observed_tiles()
            flat = [observed[k] for k in rng.integers(len(observed), size=n)]
        flat += [BORDER, SELF]

        recipes = self.recipes
        for _ in range(config.sweeps):
            order = rng.permutation(n) if config.scan == "random" else range(n)
            us = rng.random(n)
            for k, i in enumerate(order):
                key = tuple(flat[j] for j in recipes[i])
                tiles, cum = self.conditional(key)
                flat[i] = tiles[bisect_right(cum, us[k])]

        rows = [
            tuple(expand(flat[r * SIZE + c]) for c in range(SIZE))
            for r in range(SIZE)
        ]
        return Level(tuple(rows))


def sample(cpd: Cpd, config: SamplerConfig) -> Level:
    """Draw one level: initialize i.i.d., then run sequential Gibbs sweeps."""
    return _GibbsSampler(cpd).run(config, np.random.SeedSequence(config.seed))


def sample_many(cpd: Cpd, config: SamplerConfig, n: int) -> list[Level]:
    """Draw n levels on independent RNG streams keyed by (seed, index)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    sampler = _GibbsSampler(cpd)
    return [
        sampler.run(config, np.random.SeedSequence(entropy=config.seed, spawn_key=(i,)))
        for i in range(n)
    ]


def _counts_to_obj(counts: Counts) -> dict[str, int]:
    return {str(tile): n for tile, n in sorted(counts.items())}


def _counts_from_obj(obj, where: str) -> Counts:
    if not isinstance(obj, dict) or not obj:
        raise FormatError(f"{where}: counts must be a non-empty object")
    out = {}
    for k, v in obj.items():
        try:
            tile = int(k)
        except ValueError:
            raise FormatError(f"{where}: bad tile token {k!r}") from None
        if not isinstance(v, int) or v < 0:
            raise FormatError(f"{where}: counts must be nonnegative integers")
        out[tile] = v
    return dict(sorted(out.items()))


def _table_to_obj(table: dict[tuple[int, ...], Counts]) -> list[dict]:
    return [
        {"key": list(key), "counts": _counts_to_obj(counts)}
        for key, counts in sorted(table.items())
    ]


def _table_from_obj(items, key_len: int, where: str) -> dict[tuple[int, ...], Counts]:
    table = {}
    for i, entry in enumerate(items):
        key = entry.get("key")
        if not isinstance(key, list) or len(key) != key_len:
            raise FormatError(f"{where}[{i}]: key must have {key_len} tokens")
        table[tuple(int(t) for t in key)] = _counts_from_obj(entry.get("counts"), f"{where}[{i}]")
    return table


def encode_cpd(cpd: Cpd) -> bytes:
    obj = {
        "format_version": FORMAT_VERSION,
        "neighborhood": cpd.neighborhood.kind,
        "tiers": {
            "full": _table_to_obj(cpd.full),
            "local4": _table_to_obj(cpd.local4),
            "single": [
                [{"token": t, "counts": _counts_to_obj(c)} for t, c in sorted(slot.items())]
                for slot in cpd.single
            ],
            "marginal": _counts_to_obj(cpd.marginal),
        },
    }
    return (json.dumps(obj, separators=(",", ":")) + "\n").encode("utf-8")


def decode_cpd(data: bytes | str) -> Cpd:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise FormatError(f"model file is not valid JSON: {e}") from e
    if not isinstance(obj, dict) or obj.get("format_version") != FORMAT_VERSION:
        raise FormatError("model file: missing or unsupported format_version")
    kind = obj.get("neighborhood")
    if kind not in NEIGHBORHOODS:
        raise FormatError(f"model file: unknown neighborhood {kind!r}")
    spec = NeighborhoodSpec(kind)
    tiers = obj.get("tiers")
    if not isinstance(tiers, dict):
        raise FormatError("model file: missing tiers")
    single_obj = tiers.get("single")
    if not isinstance(single_obj, list) or len(single_obj) != spec.key_len:
        raise FormatError(f"model file: single tier must have {spec.key_len} slots")
    single: list[dict[int, Counts]] = []
    for s, slot in enumerate(single_obj):
        table = {}
        for entry in slot:
            table[int(entry["token"])] = _counts_from_obj(
                entry.get("counts"), f"single[{s}]"
            )
        single.append(table)
    cpd = Cpd(
        neighborhood=spec,
        full=_table_from_obj(tiers.get("full", []), spec.key_len, "full"),
        local4=_table_from_obj(tiers.get("local4", []), 4, "local4") if kind == "global" else {},
        single=single,
        marginal=_counts_from_obj(tiers.get("marginal"), "marginal"),
    )
    return cpd


def save_cpd(cpd: Cpd, path: str | Path) -> None:
    Path(path).write_bytes(encode_cpd(cpd))


def load_cpd(path: str | Path) -> Cpd:
    return decode_cpd(Path(path).read_bytes())
