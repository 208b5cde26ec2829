"""Run configuration, content-addressed result cache, and table emission.

A RunConfig is the complete input of a command run: the command name, its
numeric parameters, the seed that feeds every stochastic choice downstream,
and the output root.  Its canonical JSON form hashes to the cache key, so
identical configs find identical cached records and any field change moves
to a fresh key.

Records store scalars plus CSV table payloads.  Cache writes go through a
temp file in the target directory followed by an atomic rename, so readers
never observe a torn record.  The cache directory resolves from the
TWISTLAB_CACHE environment variable when set, else <out_dir>/cache.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .twist_core import ContractViolation

CACHE_ENV = "TWISTLAB_CACHE"
SCHEMA_VERSION = 1


def _jsonable(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    raise ContractViolation(f"config value {value!r} is not serializable")


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    out_dir: str = "runs"

    def __post_init__(self):
        if not self.command:
            raise ContractViolation("config needs a command name")
        object.__setattr__(self, "params", _jsonable(dict(self.params)))

    def canonical(self) -> str:
        """Key-stable serialization: sorted keys, no whitespace."""
        return json.dumps(
            {"command": self.command, "params": self.params,
             "seed": self.seed, "out_dir": self.out_dir},
            sort_keys=True, separators=(",", ":"))

    def cache_key(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        obj = json.loads(text)
        return cls(command=obj["command"], params=obj["params"],
                   seed=obj["seed"], out_dir=obj["out_dir"])


@dataclass(frozen=True)
class ResultRecord:
    config_hash: str
    command: str
    scalars: dict
    tables: dict
    wall_time: float
    version: str

    def to_json(self) -> str:
        return json.dumps(
            {"config_hash": self.config_hash, "command": self.command,
             "scalars": _jsonable(self.scalars), "tables": dict(self.tables),
             "wall_time": self.wall_time, "version": self.version},
            sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        obj = json.loads(text)
        return cls(config_hash=obj["config_hash"], command=obj["command"],
                   scalars=obj["scalars"], tables=obj["tables"],
                   wall_time=obj["wall_time"], version=obj["version"])


def csv_table(name: str, columns: list[str], rows) -> str:
    """CSV payload with a schema stamp comment line ahead of the header."""
    buf = io.StringIO()
    buf.write(f"# schema twistlab.{name} v{SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(list(row))
    return buf.getvalue()


# ------------------------------------------------------------------ run cache
def cache_dir(out_root: str | Path | None = None) -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    root = Path(out_root) if out_root is not None else Path("runs")
    return root / "cache"


def cache_load(key: str, out_root: str | Path | None = None) -> bytes | None:
    path = cache_dir(out_root) / f"{key}.json"
    try:
        return path.read_bytes()
    except FileNotFoundError:
        return None


def cache_store(key: str, payload: bytes,
                out_root: str | Path | None = None) -> Path:
    """Atomic publish: temp file in the destination directory, then rename."""
    target_dir = cache_dir(out_root)
    target_dir.mkdir(parents=True, exist_ok=True)
    target = target_dir / f"{key}.json"
    fd, tmp = tempfile.mkstemp(dir=target_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return target


def read_config_file(path: str | Path) -> dict:
    """key = value lines; values parse as JSON when possible, else strings."""
    out: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ContractViolation(f"config line without '=': {line!r}")
        key, _, value = line.partition("=")
        value = value.strip()
        try:
            out[key.strip()] = json.loads(value)
        except json.JSONDecodeError:
            out[key.strip()] = value
    return out
