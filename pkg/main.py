#!/usr/bin/env python3
"""
Hierarchical consensus toolkit

Main entry point for the CLI. All functionality lives in the src/ package;
see src/cli.py for subcommands and exit codes.

Usage: python3 main.py {analyze,simulate,sweep,gen} --help
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
