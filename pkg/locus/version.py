# Source of truth for the descriptor format version

from typing import Any

from packaging.version import InvalidVersion, Version

from .errors import DescriptorError

__format_version__: Version = Version("1.0")


def _get_version(ver: Any) -> Version:
    # Only consider major.minor as packaging will compare "1.2.0.dev2" < "1.2"
    try:
        pver = Version(str(ver))
    except InvalidVersion as e:
        raise DescriptorError(f"Invalid descriptor format_version : {ver!r}") from e
    return Version(f"{pver.major}.{pver.minor}")


def format_version() -> str:
    return str(__format_version__)


def check_format_version(ver: Any) -> Version:
    """
    A descriptor is readable when it has the same major version and is not newer than this release.
    """
    version = _get_version(ver)
    if version.major != __format_version__.major or version > __format_version__:
        raise DescriptorError(f"Descriptor format_version {version} is not supported (expected {__format_version__.major}.x <= {__format_version__})")
    return version
