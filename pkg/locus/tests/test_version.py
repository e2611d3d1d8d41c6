from pytest import mark, param, raises

from locus import __version__
from locus.errors import DescriptorError
from locus.version import check_format_version, format_version


def test_format_version() -> None:
    assert format_version() == "1.0"
    assert __version__


@mark.parametrize(
    "ver,expected",
    [
        param("1.0", "1.0", id="same"),
        param("1.0.3", "1.0", id="patch_ignored"),
        param(1.0, "1.0", id="float"),
        param("1.0.dev1", "1.0", id="dev"),
    ],
)
def test_check_format_version(ver: object, expected: str) -> None:
    assert str(check_format_version(ver)) == expected


@mark.parametrize(
    "ver,match",
    [
        param("0.9", "0.9 is not supported", id="older_major"),
        param("2.0", "2.0 is not supported", id="newer_major"),
        param("1.1", "1.1 is not supported", id="newer_minor"),
        param("latest", "Invalid descriptor format_version", id="invalid"),
    ],
)
def test_check_format_version_rejects(ver: str, match: str) -> None:
    with raises(DescriptorError, match=match):
        check_format_version(ver)
