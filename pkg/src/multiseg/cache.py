"""Persistent JSON cache for P-matrices and KL columns.

Every file carries its key and a format version; anything that does not match
is deleted and recomputed. Writes go to a temp file that replaces the target
atomically, so a reader sees either the old entry or the new one.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

from . import quantum, weyl
from .core import Multisegment, Weight, format_ms

FORMAT_VERSION = 1
ENV_VAR = "MULTISEG_CACHE_DIR"


def default_root() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "multiseg"


def weight_key(phi: Weight) -> str:
    return "pm:" + Weight(phi).encode()


def interval_key(a: Multisegment) -> str:
    return "iv:" + format_ms(a)


def kl_key(n: int) -> str:
    return "kl:S%d" % n


def _fname(key: str) -> str:
    return hashlib.sha256(key.encode()).hexdigest()[:32] + ".json"


@dataclass
class Stats:
    hits: int = 0
    misses: int = 0
    writes: int = 0
    discarded: int = 0
    errors: int = 0

    def as_dict(self) -> Dict[str, int]:
        return dict(self.__dict__)


@dataclass
class Store:
    root: Path = field(default_factory=default_root)
    version: int = FORMAT_VERSION
    stats: Stats = field(default_factory=Stats)

    def __post_init__(self):
        self.root = Path(self.root)
        self._kl_loaded: set = set()

    # raw entries
    def _path(self, kind: str, key: str) -> Path:
        return self.root / kind / _fname(key)

    def read(self, kind: str, key: str) -> Optional[object]:
        path = self._path(kind, key)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            self.stats.misses += 1
            return None
        except (OSError, ValueError) as exc:
            self._discard(path, "unreadable cache entry %s: %s" % (path.name, exc))
            return None
        if not isinstance(doc, dict) or doc.get("version") != self.version or doc.get("key") != key:
            self._discard(path, None)
            return None
        self.stats.hits += 1
        return doc.get("payload")

    def write(self, kind: str, key: str, payload: object) -> bool:
        path = self._path(kind, key)
        doc = {"version": self.version, "key": key, "payload": payload}
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(doc, fh, separators=(",", ":"))
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            self.stats.errors += 1
            warnings.warn("cache write failed (%s); continuing uncached" % exc)
            return False
        self.stats.writes += 1
        return True

    def _discard(self, path: Path, why: Optional[str]) -> None:
        self.stats.discarded += 1
        self.stats.misses += 1
        if why:
            warnings.warn(why)
        try:
            path.unlink()
        except OSError:
            pass

    # P-matrices
    def load_pmatrix(self, phi: Weight) -> Optional[quantum.PMatrix]:
        payload = self.read("pmatrix", weight_key(phi))
        if payload is None:
            return None
        try:
            pm = quantum.PMatrix.from_json(payload)
        except (KeyError, TypeError, ValueError) as exc:
            self._discard(self._path("pmatrix", weight_key(phi)), "corrupt P-matrix payload: %s" % exc)
            return None
        if pm.weight != Weight(phi):
            self._discard(self._path("pmatrix", weight_key(phi)), "P-matrix payload has the wrong weight")
            return None
        return pm

    def save_pmatrix(self, pm: quantum.PMatrix) -> bool:
        return self.write("pmatrix", weight_key(pm.weight), pm.to_json())

    def load_interval(self, a: Multisegment) -> Optional[quantum.PMatrix]:
        key = interval_key(a)
        payload = self.read("pmatrix", key)
        if payload is None:
            return None
        try:
            pm = quantum.PMatrix.from_json(payload)
        except (KeyError, TypeError, ValueError) as exc:
            self._discard(self._path("pmatrix", key), "corrupt P-matrix payload: %s" % exc)
            return None
        if pm.weight != a.weight() or a not in pm.labels:
            self._discard(self._path("pmatrix", key), "P-matrix payload does not cover %s" % a)
            return None
        return pm

    def save_interval(self, a: Multisegment, pm: quantum.PMatrix) -> bool:
        return self.write("pmatrix", interval_key(a), pm.to_json())

    # KL columns, one file per symmetric group
    def warm_kl(self, n: int, cols: Dict[weyl.Perm, Dict[weyl.Perm, Tuple[int, ...]]]) -> None:
        if n in self._kl_loaded:
            return
        self._kl_loaded.add(n)
        payload = self.read("kl", kl_key(n))
        if payload is None:
            return
        try:
            loaded = {
                weyl.parse_perm(y): {weyl.parse_perm(x): tuple(int(c) for c in p) for x, p in col}
                for y, col in payload.items()
            }
            if any(len(y) != n for y in loaded):
                raise ValueError("size mismatch")
        except (AttributeError, TypeError, ValueError) as exc:
            self._discard(self._path("kl", kl_key(n)), "corrupt KL payload: %s" % exc)
            return
        for y, col in loaded.items():
            cols.setdefault(y, col)

    def save_kl(self, n: int, cols: Dict[weyl.Perm, Dict[weyl.Perm, Tuple[int, ...]]]) -> bool:
        mine = {y: c for y, c in cols.items() if len(y) == n}
        if not mine:
            return False
        payload = {
            weyl.fmt_perm(y): sorted([weyl.fmt_perm(x), list(p)] for x, p in col.items())
            for y, col in sorted(mine.items())
        }
        return self.write("kl", kl_key(n), payload)

    def flush_kl(self) -> None:
        """Persist every KL column computed so far in this process."""
        for n in sorted({len(y) for y in weyl._kl_cols}):
            self.save_kl(n, weyl._kl_cols)

    # housekeeping
    def entries(self) -> Dict[str, int]:
        out = {}
        for kind in ("pmatrix", "kl"):
            d = self.root / kind
            out[kind] = len(list(d.glob("*.json"))) if d.is_dir() else 0
        return out

    def size_bytes(self) -> int:
        if not self.root.is_dir():
            return 0
        return sum(p.stat().st_size for p in self.root.rglob("*.json"))

    def clear(self) -> int:
        n = 0
        for kind in ("pmatrix", "kl"):
            d = self.root / kind
            if not d.is_dir():
                continue
            for p in d.glob("*.json"):
                try:
                    p.unlink()
                    n += 1
                except OSError as exc:
                    warnings.warn("could not remove %s: %s" % (p, exc))
        self._kl_loaded.clear()
        return n


_active: Optional[Store] = None


def install(root: Optional[os.PathLike] = None, version: int = FORMAT_VERSION) -> Store:
    """Route P-matrix and KL lookups through a store rooted at `root`."""
    global _active
    store = Store(Path(root) if root is not None else default_root(), version)
    quantum.set_store(store)
    weyl.set_store(store)
    _active = store
    return store


def uninstall() -> None:
    global _active
    quantum.set_store(None)
    weyl.set_store(None)
    _active = None


def active() -> Optional[Store]:
    return _active
