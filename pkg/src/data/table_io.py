# Geodesic table persistence
"""
Binary table format (little-endian):

    header  = b"GEOS" | u32 version | 32-byte model digest | f64 cutoff_L
              | f64 complete_below | u64 record count
    record  = u16 word length | letters (u8: 1..2g generator, 129..128+2g inverse)
              | f64 length | f64 primitive_length | u32 power | 2g x i64 homology

The rank 2g is not stored; it is taken from the model at load time, or
inferred from the letters when no model is given.
"""

import struct
from pathlib import Path
from typing import List, Optional, Tuple, Union

import pandas as pd

from src.core.exceptions import DigestMismatch, TableIOError, TruncatedFile, VersionError
from src.core.geodesics import GeodesicRecord, GeodesicTable
from src.core.surfaces import SurfacePresentation
from src.utils.logger import get_logger

logger = get_logger(__name__)

MAGIC = b"GEOS"
FORMAT_VERSION = 1
INVERSE_OFFSET = 128

_HEADER = struct.Struct("<4sI32sddQ")
_U16 = struct.Struct("<H")
_TAIL = struct.Struct("<ddI")

PathLike = Union[str, Path]


def _encode_letter(x: int) -> int:
    code = x if x > 0 else INVERSE_OFFSET - x
    if not 0 < code < 256:
        raise TableIOError(f"Letter {x} cannot be encoded in one byte")
    return code


def _decode_letter(code: int) -> int:
    return code if code < INVERSE_OFFSET else -(code - INVERSE_OFFSET)


def encode_table(table: GeodesicTable) -> bytes:
    chunks = [
        _HEADER.pack(
            MAGIC, FORMAT_VERSION, table.model_digest,
            table.cutoff, table.complete_below, len(table.records),
        )
    ]
    hom = struct.Struct(f"<{table.rank}q")
    for rec in table.records:
        chunks.append(_U16.pack(len(rec.canon)))
        chunks.append(bytes(_encode_letter(x) for x in rec.canon))
        chunks.append(_TAIL.pack(rec.length, rec.primitive_length, rec.power))
        chunks.append(hom.pack(*rec.homology))
    return b"".join(chunks)


def save_table(table: GeodesicTable, path: PathLike) -> Path:
    """Write ``table`` to ``path``; output is a pure function of the table."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_table(table))
    except OSError as e:
        raise TableIOError(f"Cannot write table {path}: {e}") from e
    logger.info(f"Saved {len(table)} geodesics to {path}")
    return path


def _take(data: bytes, offset: int, size: int) -> Tuple[bytes, int]:
    if offset + size > len(data):
        raise TruncatedFile(f"Table file truncated at byte {offset} (need {size} more)")
    return data[offset:offset + size], offset + size


def decode_table(data: bytes, rank: Optional[int] = None, kind: str = "unknown") -> GeodesicTable:
    if len(data) < 4 or data[:4] != MAGIC:
        raise VersionError("Not a geodesic table (bad magic)")
    raw, offset = _take(data, 0, _HEADER.size)
    _, version, digest, cutoff, complete_below, count = _HEADER.unpack(raw)
    if version != FORMAT_VERSION:
        raise VersionError(f"Unsupported table format version {version}")

    if rank is None:
        rank = _infer_rank(data, offset, count)
    hom = struct.Struct(f"<{rank}q")
    records: List[GeodesicRecord] = []
    for _ in range(count):
        raw, offset = _take(data, offset, _U16.size)
        (wlen,) = _U16.unpack(raw)
        raw, offset = _take(data, offset, wlen)
        canon = tuple(_decode_letter(b) for b in raw)
        raw, offset = _take(data, offset, _TAIL.size)
        length, primitive_length, power = _TAIL.unpack(raw)
        raw, offset = _take(data, offset, hom.size)
        records.append(GeodesicRecord(canon, length, primitive_length, power, hom.unpack(raw)))
    if offset != len(data):
        raise TableIOError(f"{len(data) - offset} trailing bytes after {count} records")
    return GeodesicTable(digest, cutoff, complete_below, tuple(records), rank, kind)


def _infer_rank(data: bytes, offset: int, count: int) -> int:
    """Recover 2g as the homology width under which the records fill the file exactly."""
    if count == 0:
        return 0
    for rank in range(1, INVERSE_OFFSET):
        pos = offset
        for _ in range(count):
            if pos + _U16.size > len(data):
                break
            (wlen,) = _U16.unpack_from(data, pos)
            pos += _U16.size + wlen + _TAIL.size + 8 * rank
        else:
            if pos == len(data):
                return rank
    raise TruncatedFile("Record layout does not match the file size for any rank")


def load_table(path: PathLike, model: Optional[SurfacePresentation] = None) -> GeodesicTable:
    """Read a table; with ``model`` given, the stored digest must match it."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError as e:
        raise TableIOError(f"Table file not found: {path}") from e
    except OSError as e:
        raise TableIOError(f"Cannot read table {path}: {e}") from e

    if model is None:
        return decode_table(data)
    # header digest is checked before any record is decoded
    if len(data) >= _HEADER.size and data[:4] == MAGIC:
        stored = _HEADER.unpack_from(data, 0)[2]
        if stored != model.digest():
            raise DigestMismatch(f"Table {path} was enumerated for a different model")
    return decode_table(data, rank=model.rank, kind=model.kind)


def table_frame(table: GeodesicTable) -> pd.DataFrame:
    rows = []
    for rec in table.records:
        row = {
            "word": " ".join(str(x) for x in rec.canon),
            "length": rec.length,
            "primitive_length": rec.primitive_length,
            "power": rec.power,
        }
        row.update({f"h{i + 1}": h for i, h in enumerate(rec.homology)})
        rows.append(row)
    columns = ["word", "length", "primitive_length", "power"] + [f"h{i + 1}" for i in range(table.rank)]
    return pd.DataFrame(rows, columns=columns)


def export_csv(table: GeodesicTable, path: PathLike) -> Path:
    """Text mirror of the binary records (floats written round-trip exact)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table_frame(table).to_csv(path, index=False, float_format="%.17g")
    return path
