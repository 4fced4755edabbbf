"""
Perceptual wavelet packet transform.

A two-channel orthonormal Daubechies-10 filter bank is iterated over a
pruned binary tree whose leaves approximate mel-scale resolution: narrow
bands at low frequency, wide bands at high frequency. Filtering is
circular, so every node is critically sampled and the whole transform is
an orthonormal change of basis of the frame.

Leaves are addressed by their natural frequency index at their depth. The
sequence of low/high filtering steps that reaches a leaf (its "path") is
the Gray code of that index, because each high-pass branch mirrors the
spectrum of its parent.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

__all__ = [
    "FilterQuad",
    "TreeLeaf",
    "PerceptualTree",
    "SubbandFrame",
    "db10_filters",
    "hz_to_mel",
    "build_perceptual_tree",
    "load_tree",
    "save_tree",
    "pwpt_forward",
    "pwpt_inverse",
]

# Orthonormal Daubechies-10 scaling filter (20 taps, sums to sqrt(2)).
_DB10 = np.array([
    0.026670057900555553587,
    0.18817680007769148902,
    0.52720118893172558648,
    0.68845903945360356574,
    0.28117234366057746075,
    -0.24984642432731537942,
    -0.1959462743773770435,
    0.12736934033579326008,
    0.09305736460357235116,
    -0.071394147166397087145,
    -0.029457536821875812858,
    0.03321267405934100174,
    0.0036065535669561696554,
    -0.010733175483330575044,
    0.0013953517470529011658,
    0.0019924052951850561172,
    -0.00068585669495971162656,
    -0.00011646685512928545095,
    0.000093588670320069591334,
    -0.000013264202894521244812,
])


@dataclass(frozen=True)
class FilterQuad:
    """Analysis and synthesis filter pairs of a two-channel bank.

    Analysis filters are applied by convolution followed by keeping every
    second output; synthesis filters are their time reverses.
    """

    analysis_lo: np.ndarray
    analysis_hi: np.ndarray
    synthesis_lo: np.ndarray
    synthesis_hi: np.ndarray

    def __len__(self):
        return self.synthesis_lo.size


def _check_orthonormal(h, g, tol=1e-12):
    L = h.size
    for shift in range(0, L, 2):
        ref = 1.0 if shift == 0 else 0.0
        if abs(np.dot(h[: L - shift], h[shift:]) - ref) > tol:
            raise RuntimeError(f"scaling filter not orthonormal at shift {shift}")
        if abs(np.dot(g[: L - shift], g[shift:]) - ref) > tol:
            raise RuntimeError(f"wavelet filter not orthonormal at shift {shift}")
    for shift in range(-L + 2, L, 2):
        lo, hi = (h, g) if shift >= 0 else (g, h)
        s = abs(shift)
        if abs(np.dot(lo[: L - s], hi[s:])) > tol:
            raise RuntimeError(f"filters not orthogonal at shift {shift}")


def db10_filters() -> FilterQuad:
    """The orthonormal Daubechies-10 (20-tap) filter quadruple."""
    h = _DB10.copy()
    g = h[::-1] * (-1.0) ** np.arange(h.size)
    _check_orthonormal(h, g)
    return FilterQuad(h[::-1].copy(), g[::-1].copy(), h, g)


_check_orthonormal(_DB10, _DB10[::-1] * (-1.0) ** np.arange(_DB10.size))


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=float) / 700.0)


def _gray(n: int) -> int:
    return n ^ (n >> 1)


def _gray_decode(g: int) -> int:
    n = 0
    while g:
        n ^= g
        g >>= 1
    return n


@dataclass(frozen=True)
class TreeLeaf:
    depth: int
    index: int  # natural frequency order at this depth
    f_lo: float
    f_hi: float

    @property
    def path(self) -> int:
        """Filter path as an integer; bit ``depth-1-j`` is 1 if step ``j`` is high-pass."""
        return _gray(self.index)

    @property
    def path_bits(self) -> str:
        return format(self.path, f"0{self.depth}b") if self.depth else "-"

    @property
    def width(self) -> float:
        return self.f_hi - self.f_lo

    @property
    def center(self) -> float:
        return 0.5 * (self.f_lo + self.f_hi)


class PerceptualTree:
    """Pruned wavelet packet tree, leaves sorted by frequency.

    Parameters
    ----------
    leaves : sequence of (depth, index) pairs
        Natural-frequency addresses of the leaves.
    sample_rate : int
        Sampling rate in Hz; the leaves tile ``[0, sample_rate / 2]``.
    """

    def __init__(self, leaves, sample_rate: int):
        self.sample_rate = int(sample_rate)
        nyq = self.sample_rate / 2.0
        built = []
        for depth, index in leaves:
            depth, index = int(depth), int(index)
            if depth < 0 or not 0 <= index < 2 ** depth:
                raise ValueError(f"invalid leaf address depth={depth} index={index}")
            width = nyq / 2 ** depth
            built.append(TreeLeaf(depth, index, index * width, (index + 1) * width))
        built.sort(key=lambda leaf: leaf.f_lo)
        self.leaves = tuple(built)
        self._validate()

    def _validate(self):
        if not self.leaves:
            raise ValueError("tree has no leaves")
        nyq = self.sample_rate / 2.0
        edge = 0.0
        for leaf in self.leaves:
            if not np.isclose(leaf.f_lo, edge):
                raise ValueError(f"leaves do not tile the band: gap or overlap at {edge} Hz")
            edge = leaf.f_hi
        if not np.isclose(edge, nyq):
            raise ValueError(f"leaves cover [0, {edge}] Hz, expected [0, {nyq}] Hz")

    def __len__(self):
        return len(self.leaves)

    def __iter__(self):
        return iter(self.leaves)

    def __eq__(self, other):
        return (
            isinstance(other, PerceptualTree)
            and self.sample_rate == other.sample_rate
            and [(l.depth, l.index) for l in self.leaves] == [(l.depth, l.index) for l in other.leaves]
        )

    def __repr__(self):
        return f"PerceptualTree({len(self)} leaves, fs={self.sample_rate}, max_depth={self.max_depth})"

    @property
    def max_depth(self) -> int:
        return max(leaf.depth for leaf in self.leaves)

    @property
    def depths(self) -> np.ndarray:
        return np.array([leaf.depth for leaf in self.leaves])

    @property
    def edges(self) -> np.ndarray:
        return np.array([self.leaves[0].f_lo] + [leaf.f_hi for leaf in self.leaves])

    def subband_lengths(self, frame_len: int) -> list[int]:
        return [frame_len >> leaf.depth for leaf in self.leaves]

    def internal_nodes(self) -> set[tuple[int, int]]:
        """(depth, path) of every node that gets split."""
        nodes = set()
        for leaf in self.leaves:
            for d in range(leaf.depth):
                nodes.add((d, leaf.path >> (leaf.depth - d)))
        return nodes


def build_perceptual_tree(sample_rate: int = 8000, max_depth: int = 6, target_bands: int = 24) -> PerceptualTree:
    """Greedy mel-uniform wavelet packet tree.

    Starting from the full band, the leaf spanning the most mels is split
    in two until ``target_bands`` leaves exist or no leaf can be split
    without exceeding ``max_depth``. Ties go to the lower-frequency leaf.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    if target_bands < 1 or target_bands > 2 ** max_depth:
        raise ValueError(f"target_bands={target_bands} not reachable with max_depth={max_depth}")
    nyq = sample_rate / 2.0
    leaves = [(0, 0)]

    def mel_width(leaf):
        depth, index = leaf
        width = nyq / 2 ** depth
        return float(hz_to_mel((index + 1) * width) - hz_to_mel(index * width))

    while len(leaves) < target_bands:
        splittable = [leaf for leaf in leaves if leaf[0] < max_depth]
        if not splittable:
            break
        # max mel width, then lowest frequency
        best = max(splittable, key=lambda leaf: (mel_width(leaf), -leaf[1] / 2 ** leaf[0]))
        leaves.remove(best)
        depth, index = best
        leaves += [(depth + 1, 2 * index), (depth + 1, 2 * index + 1)]
    return PerceptualTree(leaves, sample_rate)


def save_tree(tree: PerceptualTree, path) -> None:
    """Write ``depth path-bits f_lo f_hi`` lines, one per leaf."""
    lines = [f"# sample_rate {tree.sample_rate}"]
    for leaf in tree.leaves:
        lines.append(f"{leaf.depth} {leaf.path_bits} {leaf.f_lo:.6f} {leaf.f_hi:.6f}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_tree(path, sample_rate: int | None = None) -> PerceptualTree:
    """Read a tree file written by :func:`save_tree` (or by hand).

    Band edges in the file must agree with the depth and path bits, and
    the leaves must tile ``[0, fs/2]``; otherwise ``ValueError`` is raised.
    """
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if line.startswith("# sample_rate") and sample_rate is None:
            sample_rate = int(line.split()[2])
            continue
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 'depth path-bits f_lo f_hi'")
        depth = int(parts[0])
        bits = "" if parts[1] == "-" else parts[1]
        if len(bits) != depth or set(bits) - {"0", "1"}:
            raise ValueError(f"{path}:{lineno}: path bits {parts[1]!r} inconsistent with depth {depth}")
        rows.append((depth, int(bits, 2) if bits else 0, float(parts[2]), float(parts[3])))
    if not rows:
        raise ValueError(f"{path}: no leaves")
    if sample_rate is None:
        sample_rate = int(round(2 * max(r[3] for r in rows)))
    nyq = sample_rate / 2.0
    leaves = []
    for depth, path_int, f_lo, f_hi in rows:
        index = _gray_decode(path_int)
        width = nyq / 2 ** depth
        if not (np.isclose(f_lo, index * width) and np.isclose(f_hi, (index + 1) * width)):
            raise ValueError(
                f"leaf at depth {depth} path {path_int:b} covers "
                f"[{index * width}, {(index + 1) * width}] Hz, file says [{f_lo}, {f_hi}]"
            )
        leaves.append((depth, index))
    return PerceptualTree(leaves, sample_rate)


@dataclass
class SubbandFrame:
    """Leaf coefficients of one frame, ``coeffs[k]`` for subband ``k`` (frequency order)."""

    coeffs: list
    tree: PerceptualTree
    frame_len: int

    def __len__(self):
        return len(self.coeffs)

    @property
    def lengths(self) -> list[int]:
        return [c.size for c in self.coeffs]

    def energy(self) -> np.ndarray:
        return np.array([float(np.dot(c, c)) for c in self.coeffs])

    def map(self, func) -> "SubbandFrame":
        """New frame with ``func(k, coeffs_k)`` applied to every subband."""
        return SubbandFrame([np.asarray(func(k, c), dtype=float) for k, c in enumerate(self.coeffs)],
                            self.tree, self.frame_len)


@lru_cache(maxsize=64)
def _polyphase_index(n: int, taps: int) -> np.ndarray:
    return (2 * np.arange(n // 2)[:, None] + np.arange(taps)[None, :]) % n


def _split(x, filters):
    idx = _polyphase_index(x.size, len(filters))
    seg = x[idx]
    return seg @ filters.synthesis_lo, seg @ filters.synthesis_hi


def _merge(lo, hi, filters):
    n = 2 * lo.size
    idx = _polyphase_index(n, len(filters))
    contrib = lo[:, None] * filters.synthesis_lo + hi[:, None] * filters.synthesis_hi
    return np.bincount(idx.ravel(), weights=contrib.ravel(), minlength=n)


_DEFAULT_FILTERS = None


def _default_filters():
    global _DEFAULT_FILTERS
    if _DEFAULT_FILTERS is None:
        _DEFAULT_FILTERS = db10_filters()
    return _DEFAULT_FILTERS


def pwpt_forward(windowed_frame, tree: PerceptualTree, filters: FilterQuad | None = None) -> SubbandFrame:
    """Decompose one frame into the tree's leaf subbands."""
    x = np.asarray(windowed_frame, dtype=float)
    filters = filters or _default_filters()
    if x.ndim != 1:
        raise ValueError("expected a 1-D frame")
    n = x.size
    if n % (2 ** tree.max_depth):
        raise ValueError(f"frame length {n} not divisible by 2**{tree.max_depth}")
    if n < len(filters):
        raise ValueError(f"frame length {n} shorter than the {len(filters)}-tap filters")

    internal = tree.internal_nodes()
    nodes = {(0, 0): x}
    for depth in range(tree.max_depth):
        for (d, p) in [key for key in nodes if key[0] == depth]:
            if (d, p) in internal:
                lo, hi = _split(nodes.pop((d, p)), filters)
                nodes[(d + 1, 2 * p)] = lo
                nodes[(d + 1, 2 * p + 1)] = hi
    coeffs = [nodes[(leaf.depth, leaf.path)] for leaf in tree.leaves]
    return SubbandFrame(coeffs, tree, n)


def pwpt_inverse(sub: SubbandFrame, filters: FilterQuad | None = None) -> np.ndarray:
    """Synthesize a frame from its leaf subbands (exact inverse of the forward transform)."""
    filters = filters or _default_filters()
    tree = sub.tree
    if len(sub.coeffs) != len(tree):
        raise ValueError(f"{len(sub.coeffs)} subbands given, tree has {len(tree)} leaves")
    expected = tree.subband_lengths(sub.frame_len)
    for k, (c, m) in enumerate(zip(sub.coeffs, expected)):
        if np.ndim(c) != 1 or np.size(c) != m:
            raise ValueError(f"subband {k} has shape {np.shape(c)}, expected ({m},)")

    nodes = {(leaf.depth, leaf.path): np.asarray(c, dtype=float) for leaf, c in zip(tree.leaves, sub.coeffs)}
    for depth in range(tree.max_depth, 0, -1):
        for (d, p) in sorted(key for key in nodes if key[0] == depth and key[1] % 2 == 0):
            nodes[(d - 1, p // 2)] = _merge(nodes.pop((d, p)), nodes.pop((d, p + 1)), filters)
    return nodes[(0, 0)]
