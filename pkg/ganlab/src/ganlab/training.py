"""Weight-clipped Wasserstein training loop in the MarioGAN lineage.

Hyperparameters the upstream lineage left implicit (RMSprop at 5e-5, batch
32, latent 32, clip 0.01, five critic steps per generator step) are plain
config fields so every run records them in its manifest.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import torch

from .models import ARCHITECTURES, Generator, build_critic

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class GanConfig:
    architecture: str = "global"
    epochs: int = 5000
    latent_dim: int = 32
    seed: int = 0
    batch_size: int = 32
    n_critic: int = 5
    learning_rate: float = 5e-5
    weight_clip: float = 0.01

    def __post_init__(self) -> None:
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"architecture must be one of {ARCHITECTURES}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        for name in ("latent_dim", "batch_size", "n_critic"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.learning_rate <= 0 or self.weight_clip <= 0:
            raise ValueError("learning_rate and weight_clip must be positive")


def _checkpoint(config: GanConfig, generator: Generator, critic, epoch: int) -> dict:
    return {
        "format_version": CHECKPOINT_VERSION,
        "architecture": config.architecture,
        "latent_dim": config.latent_dim,
        "config": asdict(config),
        "epochs_completed": epoch,
        "generator": generator.state_dict(),
        "critic": critic.state_dict(),
    }


def train_gan(
    channels: np.ndarray,
    config: GanConfig,
    checkpoint_path: str | Path | None = None,
    log: Callable[[str], None] | None = None,
) -> dict:
    """Adversarial training on (n, 6, 9, 9) level channels.

    Returns the final checkpoint dict; when checkpoint_path is given, saves
    it there periodically and at the end. Seeded, but bit-reproducibility
    across machines is not promised.
    """
    data = torch.as_tensor(np.asarray(channels, dtype=np.float32))
    if data.ndim != 4 or data.shape[1:] != (6, 9, 9):
        raise ValueError(f"expected (n, 6, 9, 9) channels, got {tuple(data.shape)}")
    if data.shape[0] < 2:
        raise ValueError("corpus too small: need at least 2 levels")

    torch.set_num_threads(1)  # tiny tensors; thread fan-out only adds overhead
    torch.manual_seed(config.seed)
    generator = Generator(config.latent_dim)
    critic = build_critic(config.architecture)
    opt_g = torch.optim.RMSprop(generator.parameters(), lr=config.learning_rate)
    opt_d = torch.optim.RMSprop(critic.parameters(), lr=config.learning_rate)

    n = data.shape[0]
    batch = min(config.batch_size, n)
    save_every = max(1, config.epochs // 10)
    rng = torch.Generator().manual_seed(config.seed)

    for epoch in range(1, config.epochs + 1):
        order = torch.randperm(n, generator=rng)
        pos = 0
        while pos < n:
            # critic phase: up to n_critic real batches against fresh fakes
            take = min(config.n_critic, (n - pos + batch - 1) // batch)
            with torch.no_grad():
                fakes = generator(torch.randn(take * batch, config.latent_dim, 1, 1))
            for i in range(take):
                idx = order[pos:pos + batch]
                pos += batch
                real = data[idx]
                opt_d.zero_grad()
                d_loss = (
                    critic(fakes[i * batch:(i + 1) * batch]).mean()
                    - critic(real).mean()
                )
                d_loss.backward()
                opt_d.step()
                for p in critic.parameters():
                    p.data.clamp_(-config.weight_clip, config.weight_clip)
                last_d = d_loss.item()
            # generator phase
            opt_g.zero_grad()
            g_loss = -critic(generator(torch.randn(batch, config.latent_dim, 1, 1))).mean()
            g_loss.backward()
            opt_g.step()
            last_g = g_loss.item()

        if log is not None and (epoch % save_every == 0 or epoch == 1):
            log(f"epoch {epoch}/{config.epochs} d_loss={last_d:+.4f} g_loss={last_g:+.4f}")
        if checkpoint_path is not None and (epoch % save_every == 0 or epoch == config.epochs):
            torch.save(_checkpoint(config, generator, critic, epoch), checkpoint_path)

    final = _checkpoint(config, generator, critic, config.epochs)
    if checkpoint_path is not None:
        torch.save(final, checkpoint_path)
    return final


def load_checkpoint(path: str | Path) -> dict:
    try:
        ckpt = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as e:
        raise ValueError(f"{path} is not a readable checkpoint: {e}") from e
    if not isinstance(ckpt, dict) or ckpt.get("format_version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: missing or unsupported checkpoint version")
    if ckpt.get("architecture") not in ARCHITECTURES:
        raise ValueError(f"{path}: unknown architecture {ckpt.get('architecture')!r}")
    return ckpt


def generator_from_checkpoint(ckpt: dict, expect_architecture: str | None = None) -> Generator:
    if expect_architecture is not None and ckpt["architecture"] != expect_architecture:
        raise ValueError(
            f"checkpoint was trained with the {ckpt['architecture']!r} architecture, "
            f"not {expect_architecture!r}"
        )
    generator = Generator(ckpt["latent_dim"])
    try:
        generator.load_state_dict(ckpt["generator"])
    except (RuntimeError, KeyError) as e:
        raise ValueError(f"checkpoint/architecture mismatch: {e}") from e
    generator.eval()
    return generator
