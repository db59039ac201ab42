"""Persistent, append-only cache of intersection results.

One record per line: ``sha256(canonical-query)<TAB>canonical-query<TAB>p/q``.
"""
import hashlib
import threading
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Union

from app.core.config import settings
from app.core.exceptions import CacheCorruptionError
from app.core.logging_config import get_logger

logger = get_logger("cache")


def query_digest(canonical: str) -> str:
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _parse_record(line: str) -> tuple:
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 3:
        raise CacheCorruptionError(f"expected 3 fields, got {len(parts)}")
    digest, canonical, text = parts
    if query_digest(canonical) != digest:
        raise CacheCorruptionError(f"digest mismatch for {canonical[:60]}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CacheCorruptionError(f"bad value {text!r}")
    return digest, canonical, value


class ResultCache:
    """Service for handling persisted intersection results."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path or settings.SELFMAP_CHOW_CACHE)
        self._entries: Dict[str, Fraction] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.rebuilt = False
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        entries: Dict[str, tuple] = {}
        conflicts = set()
        corrupt = 0
        with self.path.open("r", encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    digest, canonical, value = _parse_record(line)
                except CacheCorruptionError as exc:
                    logger.warning(f"Cache {self.path} line {number}: {exc}")
                    corrupt += 1
                    continue
                if digest in entries and entries[digest][1] != value:
                    logger.warning(f"Cache {self.path} line {number}: conflicting value for {digest[:12]}")
                    conflicts.add(digest)
                    continue
                entries[digest] = (canonical, value)
        for digest in conflicts:
            entries.pop(digest, None)
        self._entries = {digest: value for digest, (_, value) in entries.items()}
        if corrupt or conflicts:
            self._rewrite({digest: canonical for digest, (canonical, _) in entries.items()})
            self.rebuilt = True
            logger.warning(f"Cache {self.path} was corrupted and has been rebuilt with {len(self._entries)} records")

    def _rewrite(self, canonicals: Dict[str, str]) -> None:
        with self.path.open("w", encoding="utf-8") as handle:
            for digest, value in self._entries.items():
                handle.write(f"{digest}\t{canonicals[digest]}\t{value.numerator}/{value.denominator}\n")

    def get(self, canonical: str) -> Optional[Fraction]:
        value = self._entries.get(query_digest(canonical))
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def put(self, canonical: str, value: Fraction) -> None:
        digest = query_digest(canonical)
        with self._lock:
            known = self._entries.get(digest)
            if known is not None:
                if known != value:
                    raise CacheCorruptionError(f"Recomputed value {value} disagrees with cached {known}")
                return
            self._entries[digest] = Fraction(value)
            if self.path.parent and not self.path.parent.exists():
                self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(f"{digest}\t{canonical}\t{value.numerator}/{value.denominator}\n")

    def clear(self) -> int:
        count = len(self._entries)
        with self._lock:
            self._entries.clear()
            if self.path.exists():
                self.path.unlink()
        return count

    def stats(self) -> Dict[str, object]:
        return {
            "path": str(self.path),
            "entries": len(self._entries),
            "hits": self.hits,
            "misses": self.misses,
            "rebuilt": self.rebuilt,
        }

    def __len__(self) -> int:
        return len(self._entries)
