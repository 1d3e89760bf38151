from pathlib import Path
from typing import Dict, Optional, Tuple

from src.core.geodesics import GeodesicTable


class Cache:
    """In-memory cache for loaded geodesic tables."""

    def __init__(self):
        self._tables: Dict[Tuple[str, bytes], Tuple[float, GeodesicTable]] = {}

    @staticmethod
    def _key(path: Path, digest: bytes) -> Tuple[str, bytes]:
        return str(Path(path).resolve()), digest

    def get_table(self, path: Path, digest: bytes) -> Optional[GeodesicTable]:
        """Get cached table if the file has not changed since it was cached."""
        entry = self._tables.get(self._key(path, digest))
        if entry is None:
            return None
        mtime, table = entry
        try:
            if Path(path).stat().st_mtime != mtime:
                return None
        except OSError:
            return None
        return table

    def set_table(self, path: Path, digest: bytes, table: GeodesicTable):
        """Cache a loaded table."""
        self._tables[self._key(path, digest)] = (Path(path).stat().st_mtime, table)

    def clear(self):
        self._tables.clear()


# Global cache instance
_cache = Cache()


def get_cache() -> Cache:
    """Get the global cache instance."""
    return _cache
