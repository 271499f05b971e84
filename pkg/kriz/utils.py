import hashlib
from typing import Iterable, Optional, TypeVar

from tqdm import tqdm

T = TypeVar("T")

QUIET = False


def hash_str(string: str) -> str:
    return hashlib.sha256(string.encode()).hexdigest()


def progress(
    iterable: Iterable[T], description: str, total: Optional[int] = None
) -> Iterable[T]:
    """Wraps a long sweep in a progress bar on stderr.

    The bar is hidden when stderr is not a terminal or when `QUIET` is set.
    """
    return tqdm(
        iterable,
        desc=description,
        total=total,
        ncols=80,
        leave=False,
        disable=True if QUIET else None,
    )


def set_quiet(quiet: bool) -> None:
    global QUIET
    QUIET = quiet
