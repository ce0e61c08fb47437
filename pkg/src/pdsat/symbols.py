"""Interning of identifier strings into dense integer handles."""

from __future__ import annotations

from .errors import InvalidInputError


class SymbolTable:
    """Bijection between identifier strings and small integer handles.

    Handles are allocated densely starting from 0 and are stable for the
    lifetime of the table.
    """

    def __init__(self):
        self._by_name: dict[str, int] = {}
        self._by_handle: list[str] = []

    def intern(self, name: str) -> int:
        """Return the handle for ``name``, allocating one if needed."""
        handle = self._by_name.get(name)
        if handle is None:
            handle = len(self._by_handle)
            self._by_name[name] = handle
            self._by_handle.append(name)
        return handle

    def handle(self, name: str) -> int:
        """Handle of an already-interned name; unknown names are an error."""
        try:
            return self._by_name[name]
        except KeyError:
            raise InvalidInputError(f"unknown symbol name: {name!r}") from None

    def name(self, handle: int) -> str:
        if not 0 <= handle < len(self._by_handle):
            raise InvalidInputError(f"unknown symbol handle: {handle!r}")
        return self._by_handle[handle]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._by_handle)

    def names(self):
        return list(self._by_handle)
