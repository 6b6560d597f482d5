"""Command-line and HTTP entry points."""

from .cli import build_parser, main
from .service import create_app

__all__ = ["build_parser", "create_app", "main"]
