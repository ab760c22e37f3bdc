"""Image steganography on top of the reshuffled decomposition.

A 3-channel secret is hidden inside a grayscale cover by adding its
strength-scaled, seed-reshuffled channels; the reshuffle seeds act as the
key.  Revealing solves a 4-component decomposition: the cover under the
identity reshuffle plus one seeded reshuffle per channel.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np

from .analysis import sir, tsir
from .errors import DimMismatch, KeyMismatch, StrengthOutOfRange
from .netpbm import GrayImage, RgbImage
from .reshuffle import reshuffle_from_seed, reshuffle_identity
from .rng import derive_seed
from .solver import Problem, decompose, SolverConfig

MODES = ("float", "q8")
COMPONENT_COUNT = 4
FORMAT_VERSION = "rtd-stego v1"

# rms of the uniform rounding error introduced by 8-bit quantization
Q8_NOISE_RMS = 1.0 / (510.0 * np.sqrt(3.0))


@dataclass(frozen=True)
class StegoKey:
    master_seed: int
    cover_dims: tuple
    secret_dims: tuple
    strength: float
    mode: str = "float"
    component_count: int = COMPONENT_COUNT
    version: str = FORMAT_VERSION

    def __post_init__(self):
        if self.strength <= 0:
            raise StrengthOutOfRange(f"strength must be positive, got {self.strength}")
        if self.mode not in MODES:
            raise KeyMismatch(f"mode must be one of {MODES}, got {self.mode!r}")
        ch, cw = (int(d) for d in self.cover_dims)
        sh, sw = (int(d) for d in self.secret_dims)
        if min(ch, cw, sh, sw) < 1:
            raise DimMismatch(f"dimensions must be >= 1, got {self.cover_dims}, {self.secret_dims}")
        if ch * cw != sh * sw:
            raise DimMismatch(
                f"pixel counts differ: cover {ch}x{cw} vs secret channel {sh}x{sw}"
            )
        object.__setattr__(self, "cover_dims", (ch, cw))
        object.__setattr__(self, "secret_dims", (sh, sw))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "strength", float(self.strength))

    def channel_ops(self):
        sh, sw = self.secret_dims
        return [
            reshuffle_from_seed(sh, sw, self.cover_dims, derive_seed(self.master_seed, c))
            for c in range(3)
        ]


@dataclass(frozen=True)
class Container:
    pixels: np.ndarray  # (h, w) float64
    mode: str = "float"


def conceal(cover, secret, strength=0.05, master_seed=0, mode="float"):
    """Embed the secret's reshuffled channels into the cover.

    Returns the container and the key holding everything needed to
    reveal except the images themselves.
    """
    key = StegoKey(master_seed, cover.pixels.shape, secret.pixels.shape[:2], strength, mode)
    pixels = cover.pixels.astype(np.float64).copy()
    for c, op in enumerate(key.channel_ops()):
        pixels += key.strength * op.apply(secret.pixels[:, :, c])
    if mode == "q8":
        pixels = np.rint(np.clip(pixels, 0.0, 1.0) * 255.0) / 255.0
    return Container(pixels, mode), key


def _reveal_config(container, config):
    if config is None:
        config = SolverConfig()
    if container.mode != "q8":
        return config
    floor = 0.1 * Q8_NOISE_RMS * np.sqrt(container.pixels.size)
    floor /= max(np.linalg.norm(container.pixels), 1e-300)
    return dataclasses.replace(config, tol=max(config.tol, float(floor)))


def reveal(container, key, config=None, ref_secret=None, ref_cover=None):
    """Decompose the container back into cover and secret estimates.

    Channel estimates are divided by the key strength and clamped to
    [0, 1].  Metrics always carry the solver diagnostics; reference
    images add SIR numbers for whatever they cover.
    """
    if container.pixels.shape != key.cover_dims:
        raise KeyMismatch(
            f"container is {container.pixels.shape}, key says {key.cover_dims}"
        )
    if key.version != FORMAT_VERSION:
        raise KeyMismatch(f"unsupported key version {key.version!r}")
    ch, cw = key.cover_dims
    ops = [reshuffle_identity(ch, cw, (ch, cw))] + key.channel_ops()
    result = decompose(Problem(container.pixels, ops), _reveal_config(container, config))
    cover_est = GrayImage(np.clip(result.components[0], 0.0, 1.0))
    channels = [
        np.clip(comp / key.strength, 0.0, 1.0) for comp in result.components[1:]
    ]
    secret_est = RgbImage(np.stack(channels, axis=-1))
    metrics = {
        "iterations": result.iterations,
        "converged": result.converged,
        "residual": result.residual_history[-1],
    }
    if ref_secret is not None:
        refs = [ref_secret.pixels[:, :, c] for c in range(3)]
        for c, name in enumerate("rgb"):
            metrics[f"sir_{name}_db"] = sir(refs[c], channels[c])
        metrics["secret_tsir_db"] = tsir(refs, channels)
    if ref_cover is not None:
        metrics["cover_sir_db"] = sir(ref_cover.pixels, cover_est.pixels)
    return secret_est, cover_est, metrics


def write_key(key, path):
    lines = [
        key.version,
        f"seed {key.master_seed}",
        f"cover {key.cover_dims[0]} {key.cover_dims[1]}",
        f"secret {key.secret_dims[0]} {key.secret_dims[1]}",
        f"strength {key.strength!r}",
        f"mode {key.mode}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_key(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if not lines or lines[0] != FORMAT_VERSION:
        raise KeyMismatch(f"unsupported key file version: {lines[:1]}")
    fields = {}
    for ln in lines[1:]:
        name, _, rest = ln.partition(" ")
        fields[name] = rest.split()
    try:
        return StegoKey(
            master_seed=int(fields["seed"][0]),
            cover_dims=tuple(int(v) for v in fields["cover"]),
            secret_dims=tuple(int(v) for v in fields["secret"]),
            strength=float(fields["strength"][0]),
            mode=fields["mode"][0],
        )
    except (KeyError, IndexError, ValueError) as exc:
        raise KeyMismatch(f"malformed key file {path}: {exc}") from None
