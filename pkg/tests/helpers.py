"""Shared test plumbing: repo paths and in-process CLI invocation."""

from __future__ import annotations

import io
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from spa.cli import main

ROOT = Path(__file__).resolve().parent.parent
PROTOCOLS = ROOT / "protocols"
CONFIGS = ROOT / "configs"

ANDREW = str(PROTOCOLS / "andrew_rpc.spa")
X509_ORIGINAL = str(PROTOCOLS / "x509_original.spa")
X509_MODIFIED = str(PROTOCOLS / "x509_modified.spa")
X509_FULL = str(PROTOCOLS / "x509_full.spa")
KEY_WRAP = str(PROTOCOLS / "key_wrap.spa")
DEFAULT_CONFIG = str(CONFIGS / "default.json")

CORPUS = (ANDREW, X509_ORIGINAL, X509_MODIFIED, X509_FULL, KEY_WRAP)


def run_cli(*argv: str) -> tuple[int, str, str]:
    """Invoke the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()
