"""Dense vector tables in the word2vec text interchange format, plus cosine similarity."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

__all__ = [
    "EmbeddingTable",
    "EmbeddingError",
    "load_vectors_text",
    "save_vectors_text",
    "mean_vector",
    "cosine",
]


class EmbeddingError(Exception):
    """Raised for malformed vector files or invalid vector arithmetic."""


class EmbeddingTable:
    """Immutable token -> float64 vector map (words or entity ids)."""

    def __init__(self, dim: int, entries: dict[str, np.ndarray], name: str = ""):
        if dim <= 0:
            raise EmbeddingError("dimension must be positive")
        for token, vec in entries.items():
            if vec.shape != (dim,):
                raise EmbeddingError(
                    f"vector for {token!r} has length {vec.shape[0]}, table dim is {dim}"
                )
        self.dim = dim
        self.entries = entries
        self.name = name
        # Case fallback: pre-trained tables mix casing conventions.
        self._lower = {}
        for token in entries:
            self._lower.setdefault(token.lower(), token)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return self.lookup(token) is not None

    def lookup(self, token: str) -> np.ndarray | None:
        """Exact match first, then the table's original-cased variant."""
        vec = self.entries.get(token)
        if vec is not None:
            return vec
        alt = self._lower.get(token.lower())
        if alt is not None:
            return self.entries[alt]
        return None


def load_vectors_text(path: str | Path, name: str = "") -> EmbeddingTable:
    """Parse the word2vec text format: header `count dim`, then `token v1 .. v_dim` lines.

    Later duplicates of a token overwrite earlier ones with a warning.
    """
    p = Path(path)
    with open(p, encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise EmbeddingError(f"{p}: header must be 'count dim'")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError as e:
            raise EmbeddingError(f"{p}: non-numeric header: {e}") from e
        if dim <= 0:
            raise EmbeddingError(f"{p}: dimension must be positive")
        entries: dict[str, np.ndarray] = {}
        lines = 0
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            lines += 1
            parts = line.rstrip("\n").split(" ")
            token = parts[0]
            comps = [c for c in parts[1:] if c]
            if len(comps) != dim:
                raise EmbeddingError(
                    f"{p} line {lineno}: expected {dim} components, got {len(comps)}"
                )
            try:
                vec = np.array(comps, dtype=np.float64)
            except ValueError as e:
                raise EmbeddingError(f"{p} line {lineno}: non-numeric component: {e}") from e
            if not np.all(np.isfinite(vec)):
                raise EmbeddingError(f"{p} line {lineno}: non-finite component")
            if token in entries:
                logger.warning("%s line %d: duplicate token %r overwritten", p, lineno, token)
            entries[token] = vec
    if lines != count:
        raise EmbeddingError(f"{p}: header declares {count} vectors, file has {lines}")
    return EmbeddingTable(dim=dim, entries=entries, name=name or p.stem)


def save_vectors_text(table: EmbeddingTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{len(table.entries)} {table.dim}\n")
        for token, vec in table.entries.items():
            f.write(token + " " + " ".join(repr(float(v)) for v in vec) + "\n")


def mean_vector(vectors: list[np.ndarray]) -> np.ndarray:
    """Componentwise arithmetic mean of same-dimension vectors (multiset semantics)."""
    if not vectors:
        raise EmbeddingError("mean of an empty vector list")
    dim = vectors[0].shape[0]
    if any(v.shape[0] != dim for v in vectors):
        raise EmbeddingError("mixed dimensions in mean_vector")
    return np.mean(np.asarray(vectors, dtype=np.float64), axis=0)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """dot(u,v) / (|u| |v|), accumulated in float64. Zero-norm inputs are an error."""
    if u.shape != v.shape:
        raise EmbeddingError("mixed dimensions in cosine")
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise EmbeddingError("cosine of a zero vector is undefined")
    return float(np.dot(u, v)) / (nu * nv)
