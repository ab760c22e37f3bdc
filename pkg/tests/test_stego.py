import numpy as np
import pytest

from rtd.errors import DimMismatch, KeyMismatch, StrengthOutOfRange
from rtd.netpbm import GrayImage, RgbImage
from rtd.solver import SolverConfig
from rtd.stego import (
    COMPONENT_COUNT,
    FORMAT_VERSION,
    StegoKey,
    conceal,
    read_key,
    reveal,
    write_key,
)

from conftest import low_rank_image


def small_pair(h=32, w=32, seed=0):
    cover = GrayImage(low_rank_image(h, w, 3, seed))
    channels = [low_rank_image(h, w, 1, seed + 1 + c) for c in range(3)]
    secret = RgbImage(np.stack(channels, axis=-1))
    return cover, secret


def test_conceal_is_affine_in_the_secret():
    cover, secret = small_pair()
    zero = RgbImage(np.zeros_like(secret.pixels))
    base, _ = conceal(cover, zero, strength=0.05, master_seed=7)
    one, _ = conceal(cover, secret, strength=0.05, master_seed=7)
    # halving the secret halves the embedded part (up to the rounding of
    # the addition into the cover, a few ulps)
    half, _ = conceal(cover, RgbImage(0.5 * secret.pixels), strength=0.05, master_seed=7)
    emb_one = one.pixels - base.pixels
    emb_half = half.pixels - base.pixels
    assert np.allclose(emb_one, 2.0 * emb_half, atol=1e-14)
    assert np.array_equal(base.pixels, cover.pixels)


def test_container_stays_close_to_cover():
    cover, secret = small_pair()
    container, _ = conceal(cover, secret, strength=0.01, master_seed=3)
    assert np.max(np.abs(container.pixels - cover.pixels)) <= 0.01 * 3 + 1e-12


def test_conceal_deterministic_and_seed_sensitive():
    cover, secret = small_pair()
    a, _ = conceal(cover, secret, strength=0.05, master_seed=1)
    b, _ = conceal(cover, secret, strength=0.05, master_seed=1)
    c, _ = conceal(cover, secret, strength=0.05, master_seed=2)
    assert np.array_equal(a.pixels, b.pixels)
    assert not np.array_equal(a.pixels, c.pixels)


def test_q8_container_is_byte_quantized():
    cover, secret = small_pair()
    container, key = conceal(cover, secret, strength=0.05, master_seed=5, mode="q8")
    assert container.mode == "q8"
    assert key.mode == "q8"
    levels = container.pixels * 255.0
    assert np.allclose(levels, np.rint(levels), atol=1e-9)
    assert container.pixels.min() >= 0.0 and container.pixels.max() <= 1.0


def test_reveal_roundtrip_small():
    cover, secret = small_pair(seed=4)
    container, key = conceal(cover, secret, strength=0.05, master_seed=11)
    est_secret, est_cover, metrics = reveal(
        container, key, ref_secret=secret, ref_cover=cover
    )
    assert metrics["converged"]
    assert est_secret.pixels.shape == secret.pixels.shape
    assert est_cover.pixels.shape == cover.pixels.shape
    assert metrics["secret_tsir_db"] >= 25.0
    assert metrics["cover_sir_db"] >= 25.0
    for name in "rgb":
        assert metrics[f"sir_{name}_db"] >= 20.0


def test_reveal_without_refs_has_solver_metrics_only():
    cover, secret = small_pair(seed=6)
    container, key = conceal(cover, secret, strength=0.05, master_seed=13)
    _, _, metrics = reveal(container, key)
    assert set(metrics) == {"iterations", "converged", "residual"}


def test_wrong_seed_reveals_noise():
    cover, secret = small_pair(seed=8)
    container, key = conceal(cover, secret, strength=0.05, master_seed=21)
    wrong = StegoKey(22, key.cover_dims, key.secret_dims, key.strength)
    _, _, metrics = reveal(container, wrong, ref_secret=secret)
    assert metrics["secret_tsir_db"] <= 10.0


def test_strength_scaling_consistency():
    # halving the strength halves the embedded signal; after the reveal
    # divides by it, both settings should recover the same channels
    cover, secret = small_pair(seed=10)
    c1, k1 = conceal(cover, secret, strength=0.08, master_seed=17)
    c2, k2 = conceal(cover, secret, strength=0.04, master_seed=17)
    s1, _, _ = reveal(c1, k1)
    s2, _, _ = reveal(c2, k2)
    assert np.allclose(s1.pixels, s2.pixels, atol=1e-5)


def test_key_validation():
    with pytest.raises(StrengthOutOfRange):
        StegoKey(0, (4, 4), (4, 4), 0.0)
    with pytest.raises(DimMismatch):
        StegoKey(0, (4, 4), (4, 5), 0.05)
    with pytest.raises(DimMismatch):
        StegoKey(0, (0, 4), (2, 2), 0.05)
    with pytest.raises(KeyMismatch):
        StegoKey(0, (4, 4), (2, 8), 0.05, mode="hex")
    key = StegoKey(0, (4, 4), (2, 8), 0.05)
    assert key.component_count == COMPONENT_COUNT
    assert key.version == FORMAT_VERSION


def test_reveal_rejects_mismatched_key():
    cover, secret = small_pair()
    container, key = conceal(cover, secret, strength=0.05)
    bad_dims = StegoKey(key.master_seed, (16, 64), (16, 64), key.strength)
    with pytest.raises(KeyMismatch):
        reveal(container, bad_dims)
    bad_version = StegoKey(
        key.master_seed, key.cover_dims, key.secret_dims, key.strength,
        version="rtd-stego v9",
    )
    with pytest.raises(KeyMismatch):
        reveal(container, bad_version)


def test_key_file_roundtrip(tmp_path):
    key = StegoKey(12345, (32, 32), (16, 64), 0.0625, mode="q8")
    path = tmp_path / "stego.key"
    write_key(key, path)
    text = path.read_text()
    assert text == (
        "rtd-stego v1\n"
        "seed 12345\n"
        "cover 32 32\n"
        "secret 16 64\n"
        "strength 0.0625\n"
        "mode q8\n"
    )
    assert read_key(path) == key


def test_read_key_rejects_garbage(tmp_path):
    path = tmp_path / "bad.key"
    path.write_text("rtd-stego v2\nseed 1\n")
    with pytest.raises(KeyMismatch):
        read_key(path)
    path.write_text("rtd-stego v1\nseed 1\ncover 4 4\n")
    with pytest.raises(KeyMismatch):
        read_key(path)
    path.write_text("rtd-stego v1\nseed x\ncover 4 4\nsecret 4 4\nstrength 0.1\nmode float\n")
    with pytest.raises(KeyMismatch):
        read_key(path)


def test_custom_config_passes_through():
    cover, secret = small_pair(seed=12)
    container, key = conceal(cover, secret, strength=0.05, master_seed=31)
    _, _, metrics = reveal(container, key, config=SolverConfig(max_iter=3, tol=1e-30))
    assert metrics["iterations"] == 3
    assert not metrics["converged"]
