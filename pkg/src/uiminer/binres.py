"""Decoders for the platform's binary resource formats.

Both compiled XML documents (layouts, the manifest) and the resource
table (resources.arsc) are sequences of chunks sharing one header
layout, all little-endian:

    u16 typeCode   u16 headerSize   u32 chunkSize

headerSize covers the type-specific header, chunkSize the whole chunk
including nested payload. Known type codes:

    0x0001 string pool          0x0102 XML start element
    0x0002 resource table       0x0103 XML end element
    0x0003 XML document         0x0200 table package
    0x0100 XML start namespace  0x0201 table type
    0x0101 XML end namespace    0x0202 table type spec
    0x0104 XML cdata            0x0180 XML resource map

String pools carry either UTF-8 or UTF-16LE payloads, selected by bit 8
of the pool flags. UTF-8 entries store two varint lengths (decoded
UTF-16 unit count, then byte count); UTF-16 entries store one u16
length with a high-bit extension to two words. Style runs are parsed
and kept but never influence resolved values.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field

from .errors import (
    BadChunkError,
    CyclicReferenceError,
    IndexOutOfPoolError,
    ResourceNotFoundError,
    StringEncodingError,
    TruncatedEntryError,
    UnbalancedElementsError,
    UnknownAttributeTypeError,
)

log = logging.getLogger(__name__)

# ----------------------------------------------------------- chunk plumbing

CHUNK_STRING_POOL = 0x0001
CHUNK_TABLE = 0x0002
CHUNK_XML = 0x0003
CHUNK_XML_START_NAMESPACE = 0x0100
CHUNK_XML_END_NAMESPACE = 0x0101
CHUNK_XML_START_ELEMENT = 0x0102
CHUNK_XML_END_ELEMENT = 0x0103
CHUNK_XML_CDATA = 0x0104
CHUNK_XML_RESOURCE_MAP = 0x0180
CHUNK_TABLE_PACKAGE = 0x0200
CHUNK_TABLE_TYPE = 0x0201
CHUNK_TABLE_TYPE_SPEC = 0x0202

_KNOWN_CHUNKS = {
    CHUNK_STRING_POOL,
    CHUNK_TABLE,
    CHUNK_XML,
    CHUNK_XML_START_NAMESPACE,
    CHUNK_XML_END_NAMESPACE,
    CHUNK_XML_START_ELEMENT,
    CHUNK_XML_END_ELEMENT,
    CHUNK_XML_CDATA,
    CHUNK_XML_RESOURCE_MAP,
    CHUNK_TABLE_PACKAGE,
    CHUNK_TABLE_TYPE,
    CHUNK_TABLE_TYPE_SPEC,
}

SORTED_FLAG = 1 << 0
UTF8_FLAG = 1 << 8


@dataclass(frozen=True)
class ChunkHeader:
    type_code: int
    header_size: int
    chunk_size: int
    offset: int  # absolute offset of the chunk in the buffer

    @property
    def end(self) -> int:
        return self.offset + self.chunk_size


def read_chunk_header(data: bytes, offset: int) -> ChunkHeader:
    """Decode and validate one chunk header at `offset`."""
    if offset + 8 > len(data):
        raise BadChunkError(f"chunk header at {offset:#x} past end of buffer")
    type_code, header_size, chunk_size = struct.unpack_from("<HHI", data, offset)
    if type_code not in _KNOWN_CHUNKS:
        raise BadChunkError(f"unknown chunk type {type_code:#06x} at {offset:#x}")
    if header_size < 8 or header_size > chunk_size:
        raise BadChunkError(
            f"chunk at {offset:#x}: headerSize {header_size} vs chunkSize {chunk_size}"
        )
    if offset + chunk_size > len(data):
        raise BadChunkError(
            f"chunk at {offset:#x} declares {chunk_size} bytes, "
            f"buffer has {len(data) - offset}"
        )
    return ChunkHeader(type_code, header_size, chunk_size, offset)


def iter_chunks(data: bytes, start: int, end: int):
    """Yield chunk headers for consecutive chunks in data[start:end]."""
    offset = start
    while offset + 8 <= end:
        header = read_chunk_header(data, offset)
        yield header
        if header.chunk_size == 0:
            raise BadChunkError(f"zero-size chunk at {offset:#x}")
        offset = header.end
    if offset != end:
        log.warning("trailing %d bytes after last chunk", end - offset)


# ------------------------------------------------------------- string pools


@dataclass(frozen=True)
class StyleSpan:
    name_index: int
    first_char: int
    last_char: int


@dataclass
class StringPool:
    """Decoded string pool; styles are kept raw alongside the strings."""

    strings: list[str]
    is_utf8: bool
    is_sorted: bool = False
    styles: list[list[StyleSpan]] = field(default_factory=list)

    def __getitem__(self, index: int) -> str:
        if index < 0 or index >= len(self.strings):
            raise IndexOutOfPoolError(
                f"string index {index} outside pool of {len(self.strings)}"
            )
        return self.strings[index]

    def get(self, index: int) -> str | None:
        """Return the string or None for the 0xFFFFFFFF sentinel."""
        if index in (0xFFFFFFFF, -1):
            return None
        return self[index]

    def __len__(self) -> int:
        return len(self.strings)


def _decode_utf8_length(data: bytes, offset: int) -> tuple[int, int]:
    value = data[offset]
    size = 1
    if value & 0x80:
        value = ((value & 0x7F) << 8) | data[offset + 1]
        size = 2
    return value, size


def _decode_utf16_length(data: bytes, offset: int) -> tuple[int, int]:
    (value,) = struct.unpack_from("<H", data, offset)
    size = 2
    if value & 0x8000:
        (low,) = struct.unpack_from("<H", data, offset + 2)
        value = ((value & 0x7FFF) << 16) | low
        size = 4
    return value, size


def decode_string_pool(data: bytes, offset: int = 0) -> StringPool:
    """Decode the string pool chunk that starts at `offset`."""
    header = read_chunk_header(data, offset)
    if header.type_code != CHUNK_STRING_POOL:
        raise BadChunkError(
            f"expected string pool at {offset:#x}, found {header.type_code:#06x}"
        )
    if header.header_size < 28:
        raise BadChunkError("string pool header shorter than 28 bytes")
    string_count, style_count, flags, strings_start, styles_start = struct.unpack_from(
        "<IIIII", data, offset + 8
    )
    is_utf8 = bool(flags & UTF8_FLAG)
    is_sorted = bool(flags & SORTED_FLAG)

    offsets_base = offset + header.header_size
    if offsets_base + 4 * (string_count + style_count) > header.end:
        raise BadChunkError("string pool offset arrays exceed chunk")
    string_offsets = struct.unpack_from(f"<{string_count}I", data, offsets_base)
    style_offsets = struct.unpack_from(
        f"<{style_count}I", data, offsets_base + 4 * string_count
    )

    data_base = offset + strings_start
    data_end = offset + (styles_start if style_count else header.chunk_size)
    if styles_start and not style_count:
        # some encoders emit stylesStart even with zero styles
        data_end = offset + styles_start
    strings: list[str] = []
    for rel in string_offsets:
        at = data_base + rel
        if at >= data_end:
            raise IndexOutOfPoolError(f"string offset {rel:#x} outside pool data")
        try:
            if is_utf8:
                u16_len, n = _decode_utf8_length(data, at)
                at += n
                byte_len, n = _decode_utf8_length(data, at)
                at += n
                raw = data[at : at + byte_len]
                if at + byte_len > data_end:
                    raise IndexOutOfPoolError("string data extends past pool")
                text = raw.decode("utf-8")
                if len(text.encode("utf-16-le")) // 2 != u16_len:
                    log.warning("string length mismatch for %r", text[:32])
            else:
                unit_len, n = _decode_utf16_length(data, at)
                at += n
                raw = data[at : at + 2 * unit_len]
                if at + 2 * unit_len > data_end:
                    raise IndexOutOfPoolError("string data extends past pool")
                text = raw.decode("utf-16-le")
        except UnicodeDecodeError as exc:
            raise StringEncodingError(f"undecodable string at {at:#x}: {exc}") from exc
        strings.append(text)

    styles: list[list[StyleSpan]] = []
    if style_count:
        styles_base = offset + styles_start
        if styles_base > header.end:
            log.warning("stylesStart beyond chunk end, ignoring styles")
        else:
            for rel in style_offsets:
                at = styles_base + rel
                spans: list[StyleSpan] = []
                while at + 4 <= header.end:
                    (name_index,) = struct.unpack_from("<I", data, at)
                    if name_index == 0xFFFFFFFF:
                        break
                    first, last = struct.unpack_from("<II", data, at + 4)
                    spans.append(StyleSpan(name_index, first, last))
                    at += 12
                styles.append(spans)

    return StringPool(strings=strings, is_utf8=is_utf8, is_sorted=is_sorted, styles=styles)


# ------------------------------------------------------------- typed values

TYPE_NULL = 0x00
TYPE_REFERENCE = 0x01
TYPE_ATTRIBUTE = 0x02
TYPE_STRING = 0x03
TYPE_FLOAT = 0x04
TYPE_DIMENSION = 0x05
TYPE_FRACTION = 0x06
TYPE_INT_DEC = 0x10
TYPE_INT_HEX = 0x11
TYPE_INT_BOOLEAN = 0x12
TYPE_COLOR_ARGB8 = 0x1C
TYPE_COLOR_RGB8 = 0x1D
TYPE_COLOR_ARGB4 = 0x1E
TYPE_COLOR_RGB4 = 0x1F

_COLOR_TYPES = {TYPE_COLOR_ARGB8, TYPE_COLOR_RGB8, TYPE_COLOR_ARGB4, TYPE_COLOR_RGB4}

_DIMENSION_UNITS = ["px", "dip", "sp", "pt", "in", "mm"]


@dataclass(frozen=True)
class ResourceId:
    """Packed resource identifier: package 31-24, type 23-16, entry 15-0."""

    raw: int

    @property
    def package_id(self) -> int:
        return (self.raw >> 24) & 0xFF

    @property
    def type_id(self) -> int:
        return (self.raw >> 16) & 0xFF

    @property
    def entry_id(self) -> int:
        return self.raw & 0xFFFF

    @property
    def is_null(self) -> bool:
        return self.raw == 0

    @classmethod
    def from_parts(cls, package_id: int, type_id: int, entry_id: int) -> "ResourceId":
        return cls(((package_id & 0xFF) << 24) | ((type_id & 0xFF) << 16) | (entry_id & 0xFFFF))

    def __str__(self) -> str:
        return f"0x{self.raw:08x}"


@dataclass(frozen=True)
class TypedValue:
    """One decoded Res_value.

    kind is one of: null, reference, string, int, bool, color, dimension,
    fraction, float, attribute, complex, raw. `value` holds str for
    string, ResourceId for reference/attribute, int/bool/float otherwise;
    raw keeps the (dataType, data) pair for types this decoder does not
    understand.
    """

    kind: str
    value: object

    def as_json(self) -> object:
        if self.kind in ("reference", "attribute"):
            return {"kind": self.kind, "value": str(self.value)}
        if self.kind == "raw":
            data_type, data = self.value  # type: ignore[misc]
            return {"kind": "raw", "dataType": data_type, "data": data}
        return {"kind": self.kind, "value": self.value}


def _format_dimension(data: int) -> str:
    unit = _DIMENSION_UNITS[data & 0x0F] if (data & 0x0F) < len(_DIMENSION_UNITS) else "?"
    radix = (data >> 4) & 0x03
    mantissa = data >> 8
    if mantissa & 0x800000:
        mantissa -= 1 << 24
    value = mantissa / float(1 << (radix * 7)) if radix else float(mantissa)
    if value == int(value):
        value = int(value)
    return f"{value}{unit}"


def decode_res_value(data: bytes, offset: int) -> tuple[TypedValue, int]:
    """Decode a Res_value record; returns (value, bytes consumed)."""
    if offset + 8 > len(data):
        raise TruncatedEntryError(f"value record at {offset:#x} truncated")
    size, res0, data_type = struct.unpack_from("<HBB", data, offset)
    if size < 8:
        raise UnknownAttributeTypeError(f"value record size {size} at {offset:#x}")
    (payload,) = struct.unpack_from("<I", data, offset + 4)
    if data_type == TYPE_NULL:
        tv = TypedValue("null", None)
    elif data_type == TYPE_REFERENCE:
        tv = TypedValue("reference", ResourceId(payload))
    elif data_type == TYPE_ATTRIBUTE:
        tv = TypedValue("attribute", ResourceId(payload))
    elif data_type == TYPE_STRING:
        # caller rewrites the pool index into the actual text
        tv = TypedValue("string-index", payload)
    elif data_type == TYPE_FLOAT:
        tv = TypedValue("float", struct.unpack("<f", struct.pack("<I", payload))[0])
    elif data_type == TYPE_DIMENSION:
        tv = TypedValue("dimension", _format_dimension(payload))
    elif data_type == TYPE_FRACTION:
        tv = TypedValue("fraction", payload)
    elif data_type in (TYPE_INT_DEC, TYPE_INT_HEX):
        tv = TypedValue("int", payload)
    elif data_type == TYPE_INT_BOOLEAN:
        tv = TypedValue("bool", payload != 0)
    elif data_type in _COLOR_TYPES:
        tv = TypedValue("color", payload)
    else:
        log.warning("unknown value type %#04x, kept raw", data_type)
        tv = TypedValue("raw", (data_type, payload))
    return tv, size


def _rewrite_string_index(tv: TypedValue, pool: StringPool) -> TypedValue:
    if tv.kind != "string-index":
        return tv
    return TypedValue("string", pool[int(tv.value)])  # type: ignore[arg-type]


# --------------------------------------------------------------- binary xml


@dataclass
class XmlAttribute:
    namespace: str | None
    name: str
    value: TypedValue
    raw: str | None = None  # raw string form when the encoder kept one


@dataclass
class XmlElement:
    namespace: str | None
    name: str
    attributes: list[XmlAttribute] = field(default_factory=list)
    children: list["XmlElement"] = field(default_factory=list)

    def attr(self, name: str, namespace: str | None = "*") -> XmlAttribute | None:
        for attribute in self.attributes:
            if attribute.name != name:
                continue
            if namespace == "*" or attribute.namespace == namespace:
                return attribute
        return None

    def iter_tree(self):
        yield self
        for child in self.children:
            yield from child.iter_tree()


@dataclass
class XmlDocument:
    root: XmlElement
    namespaces: dict[str, str] = field(default_factory=dict)
    pool: StringPool | None = None


def decode_binary_xml(data: bytes) -> XmlDocument:
    """Decode one compiled XML document into an element tree."""
    doc_header = read_chunk_header(data, 0)
    if doc_header.type_code != CHUNK_XML:
        raise BadChunkError(f"expected XML document, found {doc_header.type_code:#06x}")

    pool: StringPool | None = None
    namespaces: dict[str, str] = {}
    stack: list[XmlElement] = []
    root: XmlElement | None = None

    for chunk in iter_chunks(data, doc_header.header_size, doc_header.end):
        if chunk.type_code == CHUNK_STRING_POOL:
            pool = decode_string_pool(data, chunk.offset)
            continue
        if chunk.type_code == CHUNK_XML_RESOURCE_MAP:
            continue  # attribute-name resource ids are not needed here
        if pool is None:
            raise BadChunkError("XML body chunk before the string pool")

        if chunk.type_code in (CHUNK_XML_START_NAMESPACE, CHUNK_XML_END_NAMESPACE):
            prefix_i, uri_i = struct.unpack_from("<II", data, chunk.offset + chunk.header_size)
            if chunk.type_code == CHUNK_XML_START_NAMESPACE:
                prefix = pool.get(prefix_i)
                uri = pool.get(uri_i)
                if prefix is not None and uri is not None:
                    namespaces[prefix] = uri
            continue

        if chunk.type_code == CHUNK_XML_START_ELEMENT:
            body = chunk.offset + chunk.header_size
            ns_i, name_i, attr_start, attr_size, attr_count = struct.unpack_from(
                "<IIHHH", data, body
            )
            element = XmlElement(namespace=pool.get(ns_i), name=pool[name_i])
            attrs_at = body + attr_start
            for i in range(attr_count):
                at = attrs_at + i * attr_size
                a_ns, a_name, a_raw = struct.unpack_from("<III", data, at)
                value, _ = decode_res_value(data, at + 12)
                value = _rewrite_string_index(value, pool)
                element.attributes.append(
                    XmlAttribute(
                        namespace=pool.get(a_ns),
                        name=pool[a_name],
                        value=value,
                        raw=pool.get(a_raw),
                    )
                )
            if stack:
                stack[-1].children.append(element)
            elif root is None:
                root = element
            else:
                raise UnbalancedElementsError("document has more than one root")
            stack.append(element)
            continue

        if chunk.type_code == CHUNK_XML_END_ELEMENT:
            ns_i, name_i = struct.unpack_from("<II", data, chunk.offset + chunk.header_size)
            if not stack:
                raise UnbalancedElementsError("end element with empty stack")
            open_element = stack.pop()
            if open_element.name != pool[name_i]:
                raise UnbalancedElementsError(
                    f"end of {pool[name_i]!r} closes {open_element.name!r}"
                )
            continue

        if chunk.type_code == CHUNK_XML_CDATA:
            continue  # text nodes carry no layout information

        raise BadChunkError(f"chunk {chunk.type_code:#06x} not valid inside XML")

    if stack:
        raise UnbalancedElementsError(f"{len(stack)} elements left open")
    if root is None:
        raise UnbalancedElementsError("document has no root element")
    return XmlDocument(root=root, namespaces=namespaces, pool=pool)


# ------------------------------------------------------------ resource table

NO_ENTRY = 0xFFFFFFFF
ENTRY_FLAG_COMPLEX = 0x0001


@dataclass(frozen=True)
class ResourceConfig:
    """The subset of a config record this tool distinguishes: locale."""

    locale: str = ""

    @property
    def is_default(self) -> bool:
        return self.locale == ""


@dataclass
class ResourceEntry:
    key: str
    values: list[tuple[ResourceConfig, TypedValue]] = field(default_factory=list)

    def configs(self) -> list[ResourceConfig]:
        return [config for config, _ in self.values]


@dataclass
class ResourcePackage:
    id: int
    name: str
    type_names: dict[int, str] = field(default_factory=dict)
    entries: dict[tuple[int, int], ResourceEntry] = field(default_factory=dict)

    def type_id_of(self, type_name: str) -> int | None:
        for type_id, name in self.type_names.items():
            if name == type_name:
                return type_id
        return None


@dataclass
class ResourceTable:
    packages: dict[int, ResourcePackage] = field(default_factory=dict)

    def lookup(self, rid: ResourceId) -> ResourceEntry:
        package = self.packages.get(rid.package_id)
        if package is None:
            raise ResourceNotFoundError(f"no package {rid.package_id:#04x} for {rid}")
        entry = package.entries.get((rid.type_id, rid.entry_id))
        if entry is None:
            raise ResourceNotFoundError(f"no entry for {rid}")
        return entry

    def id_for_name(self, type_name: str, entry_name: str) -> ResourceId | None:
        """Find the id of type/name in any package (app package first)."""
        for package in sorted(self.packages.values(), key=lambda p: -p.id):
            type_id = package.type_id_of(type_name)
            if type_id is None:
                continue
            for (tid, eid), entry in package.entries.items():
                if tid == type_id and entry.key == entry_name:
                    return ResourceId.from_parts(package.id, tid, eid)
        return None

    def name_for_id(self, rid: ResourceId) -> str | None:
        package = self.packages.get(rid.package_id)
        if package is None:
            return None
        entry = package.entries.get((rid.type_id, rid.entry_id))
        if entry is None:
            return None
        type_name = package.type_names.get(rid.type_id, f"type{rid.type_id}")
        return f"{type_name}/{entry.key}"


@dataclass(frozen=True)
class LocalePolicy:
    """Config selection for resolution: an explicit locale, or the default.

    With no preference the default (empty-locale) config wins; when it is
    absent the lexicographically first locale is used so resolution stays
    deterministic.
    """

    locale: str | None = None

    def choose(self, configs: list[ResourceConfig]) -> ResourceConfig | None:
        if not configs:
            return None
        if self.locale is not None:
            for config in configs:
                if config.locale == self.locale:
                    return config
        for config in configs:
            if config.is_default:
                return config
        return min(configs, key=lambda c: c.locale)


@dataclass
class ResolvedValue:
    value: TypedValue
    chain: list[ResourceId]
    config: ResourceConfig


def _decode_config(data: bytes, offset: int) -> tuple[ResourceConfig, int]:
    (size,) = struct.unpack_from("<I", data, offset)
    if size < 4 or offset + size > len(data):
        raise TruncatedEntryError(f"config record at {offset:#x} truncated")
    locale = ""
    if size >= 12:
        language = data[offset + 8 : offset + 10].rstrip(b"\x00").decode("ascii", "replace")
        country = data[offset + 10 : offset + 12].rstrip(b"\x00").decode("ascii", "replace")
        if language:
            locale = language if not country else f"{language}-{country}"
    return ResourceConfig(locale=locale), size


def decode_resource_table(data: bytes) -> ResourceTable:
    """Decode resources.arsc into a name/value table."""
    table_header = read_chunk_header(data, 0)
    if table_header.type_code != CHUNK_TABLE:
        raise BadChunkError(f"expected resource table, found {table_header.type_code:#06x}")
    (package_count,) = struct.unpack_from("<I", data, 8)

    table = ResourceTable()
    global_pool: StringPool | None = None

    for chunk in iter_chunks(data, table_header.header_size, table_header.end):
        if chunk.type_code == CHUNK_STRING_POOL:
            if global_pool is None:
                global_pool = decode_string_pool(data, chunk.offset)
            continue
        if chunk.type_code != CHUNK_TABLE_PACKAGE:
            raise BadChunkError(f"chunk {chunk.type_code:#06x} not valid inside table")
        if global_pool is None:
            raise BadChunkError("package chunk before the value string pool")
        package = _decode_package(data, chunk, global_pool)
        table.packages[package.id] = package

    if len(table.packages) != package_count:
        log.warning(
            "table declares %d packages, decoded %d", package_count, len(table.packages)
        )
    return table


def _decode_package(data: bytes, chunk: ChunkHeader, global_pool: StringPool) -> ResourcePackage:
    (package_id,) = struct.unpack_from("<I", data, chunk.offset + 8)
    raw_name = data[chunk.offset + 12 : chunk.offset + 12 + 256]
    name = raw_name.decode("utf-16-le").split("\x00", 1)[0]
    package = ResourcePackage(id=package_id, name=name)

    type_pool: StringPool | None = None
    key_pool: StringPool | None = None

    for sub in iter_chunks(data, chunk.offset + chunk.header_size, chunk.end):
        if sub.type_code == CHUNK_STRING_POOL:
            if type_pool is None:
                type_pool = decode_string_pool(data, sub.offset)
            elif key_pool is None:
                key_pool = decode_string_pool(data, sub.offset)
            else:
                log.warning("extra string pool in package %s ignored", name)
            continue
        if sub.type_code == CHUNK_TABLE_TYPE_SPEC:
            continue  # spec chunks only carry config-change masks
        if sub.type_code != CHUNK_TABLE_TYPE:
            raise BadChunkError(f"chunk {sub.type_code:#06x} not valid inside package")
        if type_pool is None or key_pool is None:
            raise BadChunkError("type chunk before the package string pools")

        type_id = data[sub.offset + 8]
        entry_count, entries_start = struct.unpack_from("<II", data, sub.offset + 12)
        config, _ = _decode_config(data, sub.offset + 20)
        package.type_names.setdefault(type_id, type_pool[type_id - 1])

        offsets = struct.unpack_from(
            f"<{entry_count}I", data, sub.offset + sub.header_size
        )
        for entry_id, rel in enumerate(offsets):
            if rel == NO_ENTRY:
                continue
            at = sub.offset + entries_start + rel
            if at + 8 > sub.end:
                raise TruncatedEntryError(f"entry {entry_id} outside type chunk")
            entry_size, flags, key_i = struct.unpack_from("<HHI", data, at)
            key = key_pool[key_i]
            entry = package.entries.setdefault((type_id, entry_id), ResourceEntry(key=key))
            if entry.key != key:
                log.warning("entry %d renames %r to %r", entry_id, entry.key, key)
            if flags & ENTRY_FLAG_COMPLEX:
                # bag entry (style/array); kept opaque, not resolvable
                entry.values.append((config, TypedValue("complex", None)))
                continue
            value, _ = decode_res_value(data, at + 8)
            value = _rewrite_string_index(value, global_pool)
            entry.values.append((config, value))
    return package


def resolve_resource(
    table: ResourceTable, rid: ResourceId, policy: LocalePolicy | None = None
) -> ResolvedValue:
    """Follow reference chains until a concrete value, cycle-checked."""
    if rid.is_null:
        raise ResourceNotFoundError("cannot resolve the null resource id")
    policy = policy or LocalePolicy()
    chain: list[ResourceId] = []
    seen: set[int] = set()
    current = rid
    while True:
        if current.raw in seen:
            raise CyclicReferenceError(
                " -> ".join(str(r) for r in chain + [current])
            )
        seen.add(current.raw)
        chain.append(current)
        entry = table.lookup(current)
        config = policy.choose(entry.configs())
        if config is None:
            raise ResourceNotFoundError(f"{current} has no values")
        value = next(v for c, v in entry.values if c == config)
        if value.kind == "reference":
            target: ResourceId = value.value  # type: ignore[assignment]
            if target.is_null:
                return ResolvedValue(TypedValue("null", None), chain, config)
            current = target
            continue
        return ResolvedValue(value, chain, config)
