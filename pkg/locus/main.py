import sys
from typing import List, Optional

from ._internal.utils import _run_locus, get_args_parser, run_and_report


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line and run one locus command.
    :return: the process exit code, 1 when a certificate holds a refuted claim
    """
    args = get_args_parser().parse_args(argv)
    return int(run_and_report(lambda: _run_locus(args)))


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
