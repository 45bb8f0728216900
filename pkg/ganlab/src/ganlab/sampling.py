"""Raw tensor export from a trained generator."""

from __future__ import annotations

import numpy as np
import torch

from .training import generator_from_checkpoint


def generate_raw(ckpt: dict, n: int, seed: int,
                 expect_architecture: str | None = None) -> np.ndarray:
    """Draw n raw (9, 9, 6) tensors from the checkpointed generator.

    Values are the generator's direct outputs; repair/thresholding belongs
    to the downstream toolkit. The latent draws are reproducible for a
    fixed seed; the forward pass is only reproducible per machine.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    generator = generator_from_checkpoint(ckpt, expect_architecture)
    if n == 0:
        return np.zeros((0, 9, 9, 6), dtype=np.float64)
    rng = torch.Generator().manual_seed(seed)
    z = torch.randn(n, generator.latent_dim, 1, 1, generator=rng)
    with torch.no_grad():
        out = generator(z)            # (n, 6, 9, 9)
    return out.permute(0, 2, 3, 1).double().numpy()
