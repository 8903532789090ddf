"""Read-only access to APK containers.

An APK is a PKZIP archive; only the stored and deflate compression
methods appear in practice and only those are accepted here. Entries
are indexed by name from the central directory. Duplicate entry names
keep the last occurrence, with a warning, which mirrors how the
platform's own loader behaves.
"""

from __future__ import annotations

import io
import logging
import zipfile
import zlib
from dataclasses import dataclass, field

from .errors import (
    MissingManifestError,
    NotAZipError,
    TruncatedArchiveError,
    UnsupportedCompressionError,
)

log = logging.getLogger(__name__)

MANIFEST_NAME = "AndroidManifest.xml"
RESOURCE_TABLE_NAME = "resources.arsc"

_ZIP_MAGICS = (b"PK\x03\x04", b"PK\x05\x06")

# compression method codes from the PKZIP spec
_STORED = 0
_DEFLATED = 8


@dataclass(frozen=True)
class EntryInfo:
    """One central-directory record: declared sizes and method."""

    name: str
    size: int
    compressed_size: int
    method: int


@dataclass
class ApkHandle:
    """Open archive with an entry index; payload reads are on demand."""

    path: str
    entries: dict[str, EntryInfo]
    duplicates: list[str] = field(default_factory=list)
    _data: bytes = b""

    def names(self) -> list[str]:
        return list(self.entries)

    def has_entry(self, name: str) -> bool:
        return name in self.entries

    def read_entry(self, name: str) -> bytes:
        """Return the full uncompressed payload of one entry."""
        if name not in self.entries:
            raise KeyError(name)
        info = self.entries[name]
        with zipfile.ZipFile(io.BytesIO(self._data)) as zf:
            try:
                payload = zf.read(name)
            except (zipfile.BadZipFile, zlib.error, EOFError) as exc:
                raise TruncatedArchiveError(
                    f"{self.path}: entry {name!r} is unreadable: {exc}"
                ) from exc
        if len(payload) != info.size:
            raise TruncatedArchiveError(
                f"{self.path}: entry {name!r} decoded to {len(payload)} bytes, "
                f"central directory declares {info.size}"
            )
        return payload


def load_apk(path: str) -> ApkHandle:
    """Open an APK and index its entries.

    Raises NotAZipError when the signature is absent, TruncatedArchiveError
    when the central directory is damaged, UnsupportedCompressionError for
    methods other than stored/deflate, and MissingManifestError when the
    archive lacks AndroidManifest.xml.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4 or data[:4] not in _ZIP_MAGICS:
        raise NotAZipError(f"{path}: no PKZIP signature")
    try:
        zf = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise TruncatedArchiveError(f"{path}: {exc}") from exc

    entries: dict[str, EntryInfo] = {}
    duplicates: list[str] = []
    with zf:
        for zi in zf.infolist():
            if zi.compress_type not in (_STORED, _DEFLATED):
                raise UnsupportedCompressionError(
                    f"{path}: entry {zi.filename!r} uses method {zi.compress_type}"
                )
            if zi.filename in entries:
                duplicates.append(zi.filename)
                log.warning(
                    "%s: duplicate entry %r, keeping the last occurrence",
                    path,
                    zi.filename,
                )
            entries[zi.filename] = EntryInfo(
                name=zi.filename,
                size=zi.file_size,
                compressed_size=zi.compress_size,
                method=zi.compress_type,
            )
    if MANIFEST_NAME not in entries:
        raise MissingManifestError(f"{path}: no {MANIFEST_NAME} entry")
    return ApkHandle(path=path, entries=entries, duplicates=duplicates, _data=data)
