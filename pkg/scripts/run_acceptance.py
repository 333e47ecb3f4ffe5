#!/usr/bin/env python3
"""Run the full acceptance grid and write the consolidated JSON report."""

import sys

from skewalg.cli import main

if __name__ == "__main__":
    sys.exit(main(["all"] + sys.argv[1:]))
