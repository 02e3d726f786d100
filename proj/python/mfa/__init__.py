"""Multifractal box-counting analysis of grayscale images."""

from ._core import *  # noqa: F401,F403
from ._core import Error, MeasureMode, RunConfig, Spectrum, run  # noqa: F401


def main():
    import sys

    code, out, err = run(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
