"""
encprim Main Entry Point

Allows `python -m encprim.main`.
"""

from __future__ import annotations

from .cli import main as cli_main


def main() -> None:
    """Main entry point for encprim."""
    cli_main()


if __name__ == "__main__":
    main()
