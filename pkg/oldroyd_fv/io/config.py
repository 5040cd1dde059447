"""
Run configuration files.

INI text with four sections:

    scenario = vortex_domination      # may also be given as [scenario] name

    [scenario]
    end_time = 0.5
    [model]
    gamma = 1.4
    [grid]
    nx = 64
    [output]
    dir = out/vortex
    snapshot_every = 100

Every key is checked against the schema below and the resulting scenario is
built once, so that invalid parameters are reported before anything runs.
"""

import configparser
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..errors import ConfigError, ParameterError, ScenarioError
from ..scenarios import build

logger = logging.getLogger(__name__)

OUT_DIR_ENV = "OLDROYD_OUT_DIR"
DEFAULT_OUT_DIR = "out"

_ROOT = "__root__"

SCHEMA: Dict[str, Dict[str, Callable[[str], Any]]] = {
    "scenario": {
        "name": str, "end_time": float, "n_steps": int, "dt": float,
        "cfl": float, "splitting": str, "record_every": int,
    },
    "model": {
        "a": float, "gamma": float, "z": float, "k": float, "L": float, "lambda": float,
        "mu_s": float, "mu_b": float, "c_bar": float, "r1_bar": float, "r_bar": float,
    },
    "grid": {"nx": int, "ny": int, "bc": str, "lx": float, "ly": float},
    "output": {"dir": str, "snapshot_every": int, "diagnostics_every": int},
}
OVERRIDE_SECTIONS = ("scenario", "model", "grid")


@dataclass
class RunConfig:
    scenario: str
    overrides: Dict[str, Any] = field(default_factory=dict)
    output_dir: Optional[str] = None
    snapshot_every: int = 0
    diagnostics_every: int = 1

    def resolved_output_dir(self) -> str:
        return self.output_dir or os.environ.get(OUT_DIR_ENV, DEFAULT_OUT_DIR)


def _line_of(lines: List[str], section: str, key: str) -> Optional[int]:
    """1-based line of key inside section in the user's text."""
    current = _ROOT
    pattern = re.compile(rf"^\s*{re.escape(key)}\s*[=:]")
    for number, line in enumerate(lines, start=1):
        header = re.match(r"^\s*\[([^\]]+)\]", line)
        if header:
            current = header.group(1).strip()
        elif current == section and pattern.match(line):
            return number
    return None


def _section_line(lines: List[str], section: str) -> Optional[int]:
    for number, line in enumerate(lines, start=1):
        if re.match(rf"^\s*\[{re.escape(section)}\]", line):
            return number
    return None


def _parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(
        interpolation=None,
        comment_prefixes=("#",),
        inline_comment_prefixes=("#",),
        empty_lines_in_values=False,
        default_section="__defaults__",
    )
    parser.optionxform = str
    return parser


def _read(text: str) -> configparser.ConfigParser:
    parser = _parser()
    try:
        # the synthetic header shifts every reported line by one
        parser.read_string(f"[{_ROOT}]\n{text}")
    except configparser.ParsingError as e:
        lineno, line = e.errors[0]
        raise ConfigError(f"cannot parse {line.strip()!r}, expected 'key = value'", line=lineno - 1)
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as e:
        raise ConfigError(e.message.split(":", 1)[-1].strip(), line=(e.lineno or 1) - 1)
    except configparser.Error as e:
        raise ConfigError(str(e))
    return parser


def parse_config(text: str) -> RunConfig:
    """RunConfig from INI text; every problem is a ConfigError."""
    lines = text.splitlines()
    parser = _read(text)

    values: Dict[str, Dict[str, Any]] = {}
    for section in parser.sections():
        if section != _ROOT and section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]", line=_section_line(lines, section))
        keys = {"scenario": str} if section == _ROOT else SCHEMA[section]
        for key, raw in parser.items(section):
            if key not in keys:
                where = "top level" if section == _ROOT else f"[{section}]"
                raise ConfigError(f"unknown key '{key}' at {where}", line=_line_of(lines, section, key))
            try:
                values.setdefault(section, {})[key] = keys[key](raw.strip())
            except ValueError:
                raise ConfigError(f"{key} = {raw!r} is not a valid {keys[key].__name__}",
                                  line=_line_of(lines, section, key))

    top = values.get(_ROOT, {}).get("scenario")
    named = values.get("scenario", {}).pop("name", None)
    if top and named and top != named:
        raise ConfigError(f"scenario given twice: '{top}' and '{named}'")
    name = top or named
    if not name:
        raise ConfigError("no scenario named; add 'scenario = <preset>'")

    overrides = {f"{section}.{key}": value
                 for section in OVERRIDE_SECTIONS
                 for key, value in values.get(section, {}).items()}
    output = values.get("output", {})
    config = RunConfig(
        scenario=name,
        overrides=overrides,
        output_dir=output.get("dir"),
        snapshot_every=output.get("snapshot_every", 0),
        diagnostics_every=output.get("diagnostics_every", 1),
    )
    validate(config)
    return config


def validate(config: RunConfig):
    """Build the configured scenario once; parameter problems become ConfigErrors."""
    if config.snapshot_every < 0 or config.diagnostics_every < 1:
        raise ConfigError("snapshot_every must be >= 0 and diagnostics_every >= 1")
    try:
        build(config.scenario, config.overrides)
    except (ParameterError, ScenarioError, TypeError) as e:
        raise ConfigError(str(e))


def _format(value: Any) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def serialize(config: RunConfig) -> str:
    """Canonical text; parse_config(serialize(c)) == c."""
    out = [f"scenario = {config.scenario}"]
    for section in OVERRIDE_SECTIONS:
        entries = [(key.split(".", 1)[1], value) for key, value in config.overrides.items()
                   if key.startswith(section + ".")]
        if entries:
            out.append("")
            out.append(f"[{section}]")
            out.extend(f"{key} = {_format(value)}" for key, value in entries)
    out.append("")
    out.append("[output]")
    if config.output_dir:
        out.append(f"dir = {config.output_dir}")
    out.append(f"snapshot_every = {config.snapshot_every}")
    out.append(f"diagnostics_every = {config.diagnostics_every}")
    return "\n".join(out) + "\n"


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config '{path}': {e.strerror}")
    logger.info("loaded config %s", path)
    return parse_config(text)
