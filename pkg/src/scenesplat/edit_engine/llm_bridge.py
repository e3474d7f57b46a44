"""Optional bridge from free natural language to the command grammar.

An external process (configured via the SCENESPLAT_LLM_CMD environment
variable or an explicit executable) receives the user's text on stdin and
must print a single command line in the grammar.  Disabled by default;
any failure surfaces as a command syntax error so callers need only one
error path.
"""

from __future__ import annotations

import os
import shlex
import subprocess

from ..errors import CommandSyntaxError
from .command import EditCommand, parse_command

ENV_VAR = "SCENESPLAT_LLM_CMD"


def translate_freeform(text: str, bridge_cmd: str | None = None) -> EditCommand:
    cmd = bridge_cmd or os.environ.get(ENV_VAR)
    if not cmd:
        raise CommandSyntaxError(
            "no language bridge configured; write the command grammar directly"
        )
    try:
        proc = subprocess.run(
            shlex.split(cmd),
            input=text.encode("utf-8"),
            capture_output=True,
            timeout=60,
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise CommandSyntaxError(f"language bridge failed: {exc}") from exc
    if proc.returncode != 0:
        raise CommandSyntaxError(
            f"language bridge exited {proc.returncode}: "
            f"{proc.stderr.decode('utf-8', 'replace').strip()}"
        )
    line = proc.stdout.decode("utf-8", "replace").strip().splitlines()
    if not line:
        raise CommandSyntaxError("language bridge produced no output")
    return parse_command(line[0])
