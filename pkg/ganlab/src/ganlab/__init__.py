"""ganlab: adversarial generators for 9x9 match-three boards."""

__version__ = "0.1.0"

from .formats import load_corpus_channels, save_raw_tensors
from .models import BaselineCritic, Generator, GlobalCritic, build_critic
from .sampling import generate_raw
from .training import GanConfig, generator_from_checkpoint, load_checkpoint, train_gan

__all__ = [
    "load_corpus_channels",
    "save_raw_tensors",
    "BaselineCritic",
    "Generator",
    "GlobalCritic",
    "build_critic",
    "generate_raw",
    "GanConfig",
    "generator_from_checkpoint",
    "load_checkpoint",
    "train_gan",
    "__version__",
]
