"""Container-level behaviour: indexing, duplicates, error classes."""

import zipfile

import pytest

import fixture_app
from uiminer import apk
from uiminer.errors import (
    MissingManifestError,
    NotAZipError,
    TruncatedArchiveError,
    UnsupportedCompressionError,
)


@pytest.fixture
def fixture_apk(tmp_path):
    return fixture_app.write_fixture_apk(tmp_path / "sample.apk")


def test_load_indexes_all_entries(fixture_apk):
    handle = apk.load_apk(fixture_apk)
    names = handle.names()
    assert "AndroidManifest.xml" in names
    assert "resources.arsc" in names
    assert "res/layout/sample.xml" in names


def test_read_entry_returns_declared_size(fixture_apk):
    handle = apk.load_apk(fixture_apk)
    for name in handle.names():
        payload = handle.read_entry(name)
        assert len(payload) == handle.entries[name].size


def test_read_entry_roundtrips_payload(fixture_apk):
    handle = apk.load_apk(fixture_apk)
    expected = fixture_app.fixture_entries()
    assert handle.read_entry("resources.arsc") == expected["resources.arsc"]
    assert handle.read_entry("classes.dex") == expected["classes.dex"]


def test_two_loads_are_identical(fixture_apk):
    first = apk.load_apk(fixture_apk)
    second = apk.load_apk(fixture_apk)
    assert first.entries == second.entries
    for name in first.names():
        assert first.read_entry(name) == second.read_entry(name)


def test_duplicate_entry_last_wins(tmp_path, caplog):
    entries = fixture_app.fixture_entries()
    path = fixture_app.binenc.build_apk(
        tmp_path / "dup.apk", entries, duplicate="classes.dex"
    )
    with caplog.at_level("WARNING"):
        handle = apk.load_apk(path)
    assert "classes.dex" in handle.duplicates
    assert any("duplicate" in record.message for record in caplog.records)
    assert handle.read_entry("classes.dex") == entries["classes.dex"] + b"!"


def test_not_a_zip(tmp_path):
    path = tmp_path / "junk.apk"
    path.write_bytes(b"\x7fELF not even close")
    with pytest.raises(NotAZipError):
        apk.load_apk(str(path))


def test_truncated_archive(tmp_path, fixture_apk):
    data = open(fixture_apk, "rb").read()
    path = tmp_path / "cut.apk"
    path.write_bytes(data[: len(data) - 40])
    with pytest.raises(TruncatedArchiveError):
        apk.load_apk(str(path))


def test_missing_manifest(tmp_path):
    path = tmp_path / "nomanifest.apk"
    with zipfile.ZipFile(path, "w") as zf:
        zf.writestr("classes.dex", b"dex")
    with pytest.raises(MissingManifestError):
        apk.load_apk(str(path))


def test_unsupported_compression(tmp_path):
    path = tmp_path / "bzip.apk"
    with zipfile.ZipFile(path, "w") as zf:
        zf.writestr("AndroidManifest.xml", b"x")
        zi = zipfile.ZipInfo("classes.dex")
        zi.compress_type = zipfile.ZIP_BZIP2
        zf.writestr(zi, b"payload")
    with pytest.raises(UnsupportedCompressionError):
        apk.load_apk(str(path))


def test_unknown_entry_raises_keyerror(fixture_apk):
    handle = apk.load_apk(fixture_apk)
    with pytest.raises(KeyError):
        handle.read_entry("nope.bin")
