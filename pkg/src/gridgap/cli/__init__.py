"""Command-line interface: subcommand entry point, run manifests, SVG charts."""

from .main import EXIT_ERROR, EXIT_GAPS, EXIT_NO_MODEL, EXIT_OK, build_parser, main
from .manifest import MANIFEST_NAME, RunRecorder, read_manifest, sha256_file

__all__ = [
    "EXIT_ERROR",
    "EXIT_GAPS",
    "EXIT_NO_MODEL",
    "EXIT_OK",
    "MANIFEST_NAME",
    "RunRecorder",
    "build_parser",
    "main",
    "read_manifest",
    "sha256_file",
]
