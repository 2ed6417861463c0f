"""Size caps shared by the exact routines.

Caps are plain configuration. Exceeding one raises :class:`CapExceeded`
instead of silently approximating.
"""

from __future__ import annotations

import contextlib
import dataclasses
from typing import Iterator


class CapExceeded(RuntimeError):
    """A graph is larger than the configured cap for an exact routine."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


@dataclasses.dataclass
class Caps:
    max_component_size: int = 12
    exact: int = 24
    enumeration: int = 14
    oracle: int = 22


CAPS = Caps()


def check(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise CapExceeded(what, size, cap)


@contextlib.contextmanager
def override(**values: int) -> Iterator[Caps]:
    """Temporarily change caps, e.g. ``with override(oracle=40): ...``."""
    old = dataclasses.replace(CAPS)
    for key, val in values.items():
        if not hasattr(CAPS, key):
            raise AttributeError(key)
        setattr(CAPS, key, val)
    try:
        yield CAPS
    finally:
        for f in dataclasses.fields(Caps):
            setattr(CAPS, f.name, getattr(old, f.name))
