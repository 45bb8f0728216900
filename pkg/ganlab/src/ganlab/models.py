"""DCGAN-family networks for 9x9 six-channel boards.

The generator upsamples a latent vector to a 9x9 patch with 3x3 kernels and
a sigmoid head, so raw values land in [0, 1] around the downstream 0.5
repair threshold. The baseline critic keeps 3x3 filters throughout; the
global variant sees the whole board at once through a single stream of 9x9
filters.
"""

from __future__ import annotations

import torch
import torch.nn as nn

N_CHANNELS = 6
BOARD = 9

ARCHITECTURES = ("baseline", "global")


class Generator(nn.Module):
    def __init__(self, latent_dim: int = 32, width: int = 64):
        super().__init__()
        self.latent_dim = latent_dim
        self.net = nn.Sequential(
            nn.ConvTranspose2d(latent_dim, width * 2, 3, 1, 0, bias=False),
            nn.BatchNorm2d(width * 2),
            nn.ReLU(True),                                   # 3x3
            nn.ConvTranspose2d(width * 2, width, 3, 3, 0, bias=False),
            nn.BatchNorm2d(width),
            nn.ReLU(True),                                   # 9x9
            nn.Conv2d(width, N_CHANNELS, 3, 1, 1),
            nn.Sigmoid(),
        )

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        return self.net(z)


class BaselineCritic(nn.Module):
    """3x3 filters only, downsampling 9 -> 3 -> 1."""

    def __init__(self, width: int = 64):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv2d(N_CHANNELS, width, 3, 1, 1, bias=False),
            nn.LeakyReLU(0.2, True),
            nn.Conv2d(width, width * 2, 3, 3, 0, bias=False),
            nn.BatchNorm2d(width * 2),
            nn.LeakyReLU(0.2, True),
            nn.Conv2d(width * 2, 1, 3, 1, 0),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x).view(-1)


class GlobalCritic(nn.Module):
    """One stream of full-board 9x9 filters."""

    def __init__(self, width: int = 64):
        super().__init__()
        self.net = nn.Sequential(
            nn.Conv2d(N_CHANNELS, width * 4, BOARD, 1, 0, bias=False),
            nn.LeakyReLU(0.2, True),
            nn.Conv2d(width * 4, 1, 1, 1, 0),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x).view(-1)


def build_critic(architecture: str) -> nn.Module:
    if architecture == "baseline":
        return BaselineCritic()
    if architecture == "global":
        return GlobalCritic()
    raise ValueError(f"architecture must be one of {ARCHITECTURES}, got {architecture!r}")
