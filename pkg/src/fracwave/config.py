"""Experiment configuration: flat key-value file with one [experiment] section.

UTF-8, ``#`` comments, diff-friendly.  Ladders are comma- or
space-separated integers; every entry must be the base entry times a
power of two and strictly increasing.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .errors import ConfigError

KINDS = ("lemmas", "ode-regularity", "pde-regularity", "convergence", "manufactured")


@dataclass
class ExperimentConfig:
    kind: str
    alpha: float = 1.5
    T: float = 1.0
    grid_ladder: tuple = (512, 1024, 2048)
    k_ladder: tuple = (4, 8)
    case: str = ""
    lambda_ladder: tuple = (1.0, 10.0, 100.0)
    seed: int = 20240801
    tolerance_scale: float = 1.0
    out: str = "-"
    format: str = "json"
    jobs: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind: expected one of {KINDS}, got {self.kind!r}")
        if not (1.0 < self.alpha < 2.0):
            raise ConfigError(f"alpha: must lie in (1, 2) exclusive, got {self.alpha}")
        if not (self.T > 0.0):
            raise ConfigError(f"T: must be positive, got {self.T}")
        _validate_ladder("grid_ladder", self.grid_ladder)
        _validate_ladder("k_ladder", self.k_ladder)
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format: expected json or csv, got {self.format!r}")
        if self.jobs < 1:
            raise ConfigError(f"jobs: must be >= 1, got {self.jobs}")
        if self.tolerance_scale <= 0.0:
            raise ConfigError(f"tolerance_scale: must be positive, got {self.tolerance_scale}")


def _validate_ladder(name: str, ladder) -> None:
    if len(ladder) == 0:
        raise ConfigError(f"{name}: ladder must not be empty")
    if any(n < 2 for n in ladder):
        raise ConfigError(f"{name}: entries must be >= 2")
    if list(ladder) != sorted(set(ladder)):
        raise ConfigError(f"{name}: ladder must be strictly increasing")
    base = ladder[0]
    for n in ladder:
        q, r = divmod(n, base)
        if r != 0 or q & (q - 1) != 0:
            raise ConfigError(f"{name}: entry {n} is not {base} times a power of two")


def _parse_ints(text: str, fieldname: str) -> tuple:
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"{fieldname}: could not parse integer list {text!r}") from exc


def _parse_floats(text: str, fieldname: str) -> tuple:
    try:
        return tuple(float(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"{fieldname}: could not parse float list {text!r}") from exc


def parse_config(path: str, kind: str | None = None) -> ExperimentConfig:
    """Read a config file; ``kind`` from the CLI overrides/validates the file."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path!r}: {exc}") from exc
    if not parser.has_section("experiment"):
        raise ConfigError(f"config {path!r}: missing [experiment] section")
    section = parser["experiment"]

    def get(name, default=None):
        return section.get(name, default)

    file_kind = get("kind")
    if kind is not None and file_kind is not None and file_kind != kind:
        raise ConfigError(
            f"kind: config says {file_kind!r} but the command asked for {kind!r}")
    resolved_kind = kind or file_kind
    if resolved_kind is None:
        raise ConfigError("kind: missing from both the command and the config file")

    kwargs = {"kind": resolved_kind}
    try:
        if get("alpha") is not None:
            kwargs["alpha"] = float(get("alpha"))
        if get("t") is not None:
            kwargs["T"] = float(get("t"))
        if get("seed") is not None:
            kwargs["seed"] = int(get("seed"))
        if get("jobs") is not None:
            kwargs["jobs"] = int(get("jobs"))
        if get("tolerance_scale") is not None:
            kwargs["tolerance_scale"] = float(get("tolerance_scale"))
    except ValueError as exc:
        raise ConfigError(f"config {path!r}: bad scalar field: {exc}") from exc
    if get("grid_ladder") is not None:
        kwargs["grid_ladder"] = _parse_ints(get("grid_ladder"), "grid_ladder")
    if get("k_ladder") is not None:
        kwargs["k_ladder"] = _parse_ints(get("k_ladder"), "k_ladder")
    if get("lambda_ladder") is not None:
        kwargs["lambda_ladder"] = _parse_floats(get("lambda_ladder"), "lambda_ladder")
    if get("case") is not None:
        kwargs["case"] = get("case")
    if get("out") is not None:
        kwargs["out"] = get("out")
    if get("format") is not None:
        kwargs["format"] = get("format")
    return ExperimentConfig(**kwargs)
