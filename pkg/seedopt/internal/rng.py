"""Deterministic random stream derivation.

Every random stream in seedopt is derived from an integer root seed plus a path of
keys, e.g. ``derive(master_seed, "run", network, variant, rep)``.
Streams never depend on call order or thread scheduling.
"""
# Import built-in modules
import hashlib

# Import third-party modules
import numpy as np


_MASK_64 = (1 << 64) - 1


def _key_to_int(key):
    if isinstance(key, (int, np.integer)):
        return int(key) & _MASK_64
    digest = hashlib.sha256(str(key).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive(seed, *keys):
    """Derive a 63-bit integer seed from a root seed and a key path.

    Args:
        seed: Root integer seed
        *keys: Integers or strings identifying the sub-stream

    Returns:
        int: Derived seed, stable across platforms and numpy versions
    """
    entropy = [_key_to_int(seed)] + [_key_to_int(key) for key in keys]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 32 | int(state[1])) >> 1)


def make_rng(seed, *keys):
    """Create a numpy ``Generator`` for a derived sub-stream."""
    if keys:
        seed = derive(seed, *keys)
    return np.random.default_rng(np.random.SeedSequence(_key_to_int(seed)))
