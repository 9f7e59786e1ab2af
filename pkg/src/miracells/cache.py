"""On-disk cache for bimodule KL tables.

Files are canonical JSON named by table kind, N, package version and a hash
of the sign conventions, so a change in either makes old files invisible.
A loaded table is trusted only after five randomly chosen elements pass the
bar-invariance check again.
"""
from __future__ import annotations

import hashlib
import json
import os
import random
from pathlib import Path

from . import __version__, bimodule, rbperm
from .laurent_hecke import LaurentPoly

ENV_VAR = "MIRACELLS_CACHE"
CONVENTIONS = "H=(-v)^-l T; KL_s=H_s-v^-1; KL coefficients in v^-1 Z[v^-1]; base KL_tw_k=sum (-v)^(j-k) H_tw_j"


def convention_hash() -> str:
    return hashlib.sha256(CONVENTIONS.encode()).hexdigest()[:12]


def resolve_dir(explicit: str | os.PathLike | None = None) -> Path | None:
    """The environment variable wins over an explicit directory."""
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(explicit) if explicit else None


def table_path(directory: Path, kind: str, n: int) -> Path:
    return directory / f"{kind}-n{n}-v{__version__}-{convention_hash()}.json"


def dump_table(kind: str, n: int, table: dict) -> str:
    entries = [
        {
            "tw": rbperm.to_text(tw),
            "expansion": {rbperm.to_text(y): p.to_json() for y, p in sorted(exp.items(), key=lambda kv: rbperm.sort_key(kv[0]))},
        }
        for tw, exp in sorted(table.items(), key=lambda kv: rbperm.sort_key(kv[0]))
    ]
    doc = {"kind": kind, "n": n, "version": __version__, "conventions": CONVENTIONS, "entries": entries}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def parse_table(text: str) -> tuple[str, int, dict]:
    doc = json.loads(text)
    table = {
        rbperm.from_text(e["tw"]): {rbperm.from_text(y): LaurentPoly.from_json(p) for y, p in e["expansion"].items()}
        for e in doc["entries"]
    }
    return doc["kind"], doc["n"], table


def revalidate(n: int, table: dict, samples: int = 5, seed: int = 0) -> bool:
    if set(table) != set(rbperm.enumerate_rb(n)):
        return False
    keys = sorted(table, key=rbperm.sort_key)
    for tw in random.Random(seed).sample(keys, min(samples, len(keys))):
        exp = table[tw]
        if exp.get(tw) != LaurentPoly.const(1) or bimodule.bar_R(exp, n) != exp:
            return False
    return True


def load_kl_table(n: int, directory: Path | None) -> dict | None:
    if directory is None:
        return None
    path = table_path(directory, "kl_R", n)
    if not path.exists():
        return None
    try:
        kind, m, table = parse_table(path.read_text())
    except (ValueError, KeyError):
        return None
    if kind != "kl_R" or m != n or not revalidate(n, table):
        return None
    return table


def kl_table(n: int, directory: str | os.PathLike | None = None) -> dict:
    """KL table for RB_n, from the cache when possible; installs it for the rest of the process."""
    where = resolve_dir(directory)
    table = load_kl_table(n, where)
    if table is None:
        table = bimodule.kl_basis_R(n)
        if where is not None:
            where.mkdir(parents=True, exist_ok=True)
            table_path(where, "kl_R", n).write_text(dump_table("kl_R", n, table))
    bimodule.install_kl_table(n, table)
    return table
