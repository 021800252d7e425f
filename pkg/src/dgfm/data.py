"""LIBSVM-format ingestion, row normalization, and agent partitioning.

The input format is one sample per line: a label followed by 1-based
``index:value`` pairs with strictly increasing indices,

    +1 4:0.5 12:-2.0

Indices are converted to 0-based at the parse boundary and nowhere else.
Labels written as {0, 1}, {1, 2} or {-1, +1} are normalized to {-1, +1}
with the smaller raw label mapped to -1. Files ending in ``.gz`` are
decompressed transparently.
"""

import gzip
import io
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import InvalidPartition, ParseError

__all__ = [
    "SparseDataset",
    "Partition",
    "load_libsvm",
    "normalize_rows",
    "parse_libsvm",
    "partition",
    "subset",
    "to_libsvm",
]


@dataclass(frozen=True)
class SparseDataset:
    """Sparse feature rows plus +-1 labels.

    Attributes
    ----------
    features : scipy.sparse.csr_matrix, shape (n, d)
    labels : ndarray, shape (n,), entries in {-1.0, +1.0}
    """

    features: sp.csr_matrix
    labels: np.ndarray

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def d(self):
        return self.features.shape[1]

    def row(self, i):
        """(indices, values) of row i, 0-based indices."""
        lo, hi = self.features.indptr[i], self.features.indptr[i + 1]
        return self.features.indices[lo:hi], self.features.data[lo:hi]


def _normalize_labels(raw):
    values = sorted(set(raw))
    if set(values) <= {-1.0, 1.0}:
        return np.asarray(raw, dtype=float)
    if len(values) != 2:
        raise ParseError(
            f"cannot map labels {values} to -1/+1 (need exactly two classes)"
        )
    lo = values[0]
    return np.where(np.asarray(raw) == lo, -1.0, 1.0)


def parse_libsvm(source):
    """Parse LIBSVM text from a string or text stream into a SparseDataset.

    Malformed pairs, non-numeric fields, and non-increasing feature indices
    raise :class:`ParseError` carrying the 1-based line number. Blank lines
    are skipped.
    """
    if isinstance(source, (str, bytes)):
        source = io.StringIO(source.decode() if isinstance(source, bytes) else source)
    raw_labels = []
    indptr = [0]
    indices = []
    data = []
    d = 0
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        fields = line.split()
        try:
            raw_labels.append(float(fields[0]))
        except ValueError:
            raise ParseError(f"label {fields[0]!r} is not numeric", line=lineno) from None
        prev = -1
        for field in fields[1:]:
            idx_str, sep, val_str = field.partition(":")
            if not sep:
                raise ParseError(f"feature {field!r} is missing ':'", line=lineno)
            try:
                idx = int(idx_str)
                val = float(val_str)
            except ValueError:
                raise ParseError(f"feature {field!r} is not numeric", line=lineno) from None
            if idx < 1:
                raise ParseError(f"feature index {idx} must be >= 1", line=lineno)
            idx -= 1  # 1-based on disk, 0-based in memory
            if idx <= prev:
                raise ParseError(
                    f"feature index {idx + 1} not strictly increasing", line=lineno
                )
            prev = idx
            indices.append(idx)
            data.append(val)
        indptr.append(len(indices))
        d = max(d, prev + 1)
    labels = _normalize_labels(raw_labels)
    features = sp.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int32), np.asarray(indptr)),
        shape=(len(raw_labels), d),
    )
    return SparseDataset(features=features, labels=labels)


def load_libsvm(path):
    """Parse a LIBSVM file; ``.gz`` suffixed files are gunzipped on the fly."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt") as stream:
        return parse_libsvm(stream)


def to_libsvm(dataset):
    """Serialize back to LIBSVM text; round-trips through `parse_libsvm`."""
    lines = []
    for i in range(dataset.n):
        idx, val = dataset.row(i)
        label = int(dataset.labels[i])
        pairs = " ".join(f"{j + 1}:{float(v)!r}" for j, v in zip(idx, val))
        lines.append(f"{label} {pairs}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def normalize_rows(dataset):
    """Scale every nonzero row to unit L2 norm; zero rows and labels untouched.

    Unit rows make the per-sample hinge 1-Lipschitz, which is what turns
    the Lipschitz hint of the SVM objective into a usable constant.
    """
    features = dataset.features.copy()
    norms = np.sqrt(np.asarray(features.multiply(features).sum(axis=1)).ravel())
    scale = np.ones_like(norms)
    nonzero = norms > 0.0
    scale[nonzero] = 1.0 / norms[nonzero]
    # scale the stored values directly; keeps sparsity structure and index order
    features.data = features.data * np.repeat(scale, np.diff(features.indptr))
    return SparseDataset(features=features, labels=dataset.labels)


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of sample indices, one index array per agent."""

    assignment: list
    n: int

    def __post_init__(self):
        if any(a.ndim != 1 for a in self.assignment):
            raise InvalidPartition("each agent's assignment must be a 1-D index array")
        flat = np.concatenate(self.assignment) if self.assignment else np.array([], dtype=int)
        if flat.shape[0] != self.n or not np.array_equal(np.sort(flat), np.arange(self.n)):
            raise InvalidPartition(
                f"assignment must cover each of {self.n} samples exactly once"
            )

    @property
    def m(self):
        return len(self.assignment)

    @property
    def sizes(self):
        return [a.shape[0] for a in self.assignment]


def partition(dataset, m, seed):
    """Shuffle sample indices by seed, then deal them round-robin to m agents.

    Sizes differ by at most one. Deterministic in the seed. With a single
    agent the natural order is kept so that single-agent runs consume
    samples exactly like the centralized baselines.
    """
    n = dataset if isinstance(dataset, int) else dataset.n
    if m < 1:
        raise InvalidPartition(f"need at least one agent, got {m}")
    if n < m:
        raise InvalidPartition(f"cannot split {n} samples across {m} agents")
    if m == 1:
        return Partition(assignment=[np.arange(n)], n=n)
    perm = np.random.default_rng(seed).permutation(n)
    return Partition(assignment=[perm[i::m] for i in range(m)], n=n)


def subset(dataset, n, seed=None):
    """First-n rows (seed None) or a seeded n-row sample without replacement."""
    if n >= dataset.n:
        return dataset
    if seed is None:
        keep = np.arange(n)
    else:
        keep = np.sort(np.random.default_rng(seed).choice(dataset.n, size=n, replace=False))
    return SparseDataset(
        features=sp.csr_matrix(dataset.features[keep]), labels=dataset.labels[keep]
    )
