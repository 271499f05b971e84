"""Disk cache for computed slices and differential matrices."""

import os
import tempfile
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from kriz.exactla import (
    SparseRationalMatrix,
    SubspaceBasis,
    format_rational,
    parse_rational,
)
from kriz.utils import hash_str

CACHE_FORMAT_VERSION = "1"
CACHE_KINDS = ("basis", "differential")


@dataclass(frozen=True)
class CacheKey:
    """Identifies one cache entry: a basis or differential of one model slice."""

    kind: str
    model: str
    n: int
    p: int
    q: int
    version: str

    def __post_init__(self) -> None:
        if self.kind not in CACHE_KINDS:
            raise ValueError(f"Unknown cache entry kind: {self.kind}")

    @property
    def filename(self) -> str:
        return f"{self.kind}-{self.model}-n{self.n}-p{self.p}-q{self.q}.yaml"


class Storage:
    def __init__(
        self, root: Union[str, os.PathLike], version: Optional[str] = None
    ) -> None:
        """Opens a cache directory.

        Parameters:
            root: The cache directory.
            version: Artifact version stamped into every entry. Defaults to the
                installed package version.
        """
        self.root = Path(root).resolve()

        if not self.root.exists():
            raise FileNotFoundError(f"Cache directory does not exist: {self.root}")

        if not self.root.is_dir():
            raise NotADirectoryError(f"Cache path is not a directory: {self.root}")

        if version is None:
            import kriz

            version = kriz.__version__
        self.version = version

        self.enabled = os.access(self.root, os.W_OK)
        if not self.enabled:
            warnings.warn(
                f"Cache directory is not writable, caching disabled: {self.root}",
                stacklevel=2,
            )

    @staticmethod
    def init(root: Union[str, os.PathLike], version: Optional[str] = None) -> "Storage":
        """Creates the cache directory (if needed) and opens it.

        An existing directory that cannot be created or written to yields a disabled
        cache rather than an error.
        """
        root = Path(root)
        try:
            os.makedirs(root, exist_ok=True)
        except OSError as error:
            warnings.warn(
                f"Cannot create cache directory, caching disabled: {error}",
                stacklevel=2,
            )
            return DisabledStorage(root, version)
        return Storage(root, version)

    def key(self, kind: str, model: str, n: int, p: int, q: int) -> CacheKey:
        return CacheKey(kind, model, n, p, q, self.version)

    def path(self, key: CacheKey) -> Path:
        return self.root / key.filename

    def __contains__(self, key: CacheKey) -> bool:
        """Checks whether a valid entry for `key` is stored."""
        return self.get(key) is not None

    def get(self, key: CacheKey) -> Optional[Dict[str, Any]]:
        """Loads the payload stored under `key`.

        Returns:
            The payload, or None if the entry is missing, was written by another
            version, or is corrupted.
        """
        path = self.path(key)
        if not path.is_file():
            return None

        try:
            with open(path, "r") as file:
                document = yaml.safe_load(file)
            header = document["header"]
            payload = document["payload"]
            if not isinstance(header, dict) or not isinstance(payload, dict):
                raise TypeError("header and payload must be mappings")
        except (OSError, yaml.YAMLError, KeyError, TypeError) as error:
            warnings.warn(
                f"Ignoring unreadable cache entry {path}: {error}", stacklevel=2
            )
            return None

        expected = _header(key, payload)
        if header.get("format") != CACHE_FORMAT_VERSION or header.get(
            "version"
        ) != key.version:
            return None
        if header != expected:
            warnings.warn(f"Ignoring corrupted cache entry {path}", stacklevel=2)
            return None

        return payload

    def add(self, key: CacheKey, payload: Dict[str, Any]) -> None:
        """Stores `payload` under `key`.

        The file is written to a temporary name and moved into place, so readers never
        see partial entries and concurrent writers leave one complete entry behind.
        """
        if not self.enabled:
            return

        document = {"header": _header(key, payload), "payload": payload}
        try:
            with tempfile.NamedTemporaryFile(
                "w", dir=self.root, suffix=".tmp", delete=False
            ) as file:
                yaml.safe_dump(document, file, sort_keys=True)
                temporary = file.name
            os.replace(temporary, self.path(key))
        except OSError as error:
            self.enabled = False
            warnings.warn(
                f"Cannot write to cache, caching disabled: {error}", stacklevel=2
            )

    def remove(self, key: CacheKey) -> None:
        """Removes the entry stored under `key`."""
        path = self.path(key)
        if not path.exists():
            raise FileNotFoundError(f"Cache entry not found: {path}")
        os.remove(path)

    def __repr__(self) -> str:
        return f"Storage({self.root})"


class DisabledStorage(Storage):
    """A cache that stores nothing; used when the cache directory is unusable."""

    def __init__(
        self, root: Union[str, os.PathLike], version: Optional[str] = None
    ) -> None:
        self.root = Path(root)
        self.version = version or "disabled"
        self.enabled = False

    def get(self, key: CacheKey) -> Optional[Dict[str, Any]]:
        return None


def _header(key: CacheKey, payload: Dict[str, Any]) -> Dict[str, Any]:
    header = asdict(key)
    header["format"] = CACHE_FORMAT_VERSION
    header["checksum"] = hash_str(yaml.safe_dump(payload, sort_keys=True))
    return header


def matrix_to_payload(matrix: SparseRationalMatrix) -> Dict[str, Any]:
    return {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "entries": [
            [row, col, format_rational(value)]
            for (row, col), value in sorted(matrix.entries.items())
        ],
    }


def payload_to_matrix(payload: Dict[str, Any]) -> SparseRationalMatrix:
    entries = {
        (int(row), int(col)): parse_rational(value)
        for row, col, value in payload["entries"]
    }
    return SparseRationalMatrix(int(payload["rows"]), int(payload["cols"]), entries)


def subspace_to_payload(subspace: SubspaceBasis) -> Dict[str, Any]:
    return {
        "ambient_dim": subspace.ambient_dim,
        "vectors": [
            [[index, format_rational(value)] for index, value in sorted(vector.items())]
            for vector in subspace.vectors
        ],
    }


def payload_to_subspace(payload: Dict[str, Any]) -> SubspaceBasis:
    vectors = tuple(
        {int(index): parse_rational(value) for index, value in vector}
        for vector in payload["vectors"]
    )
    return SubspaceBasis(int(payload["ambient_dim"]), vectors)
