# src/core/files.py
import csv
import hashlib
import json
import logging
from pathlib import Path

from core.exceptions import DiagnosticsError

logger = logging.getLogger("cyclewalk.core")


def file_digest(path):
    """Calculate SHA256 hash of a file"""
    sha256_hash = hashlib.sha256()
    with open(path, "rb") as file_obj:
        # Read in chunks
        for chunk in iter(lambda: file_obj.read(4096), b""):
            sha256_hash.update(chunk)
    return sha256_hash.hexdigest()


def dump_record(record):
    """Canonical one-line JSON: sorted keys, no padding"""
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


class NDJSONWriter:
    """Newline-delimited JSON sink used for sample logs"""

    def __init__(self, path):
        self.path = Path(path)
        self.handle = None
        self.count = 0

    def __enter__(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.handle = open(self.path, "w", encoding="utf-8", newline="\n")
        return self

    def __exit__(self, exc_type, exc, tb):
        self.handle.close()
        self.handle = None
        return False

    def write(self, record):
        self.handle.write(dump_record(record))
        self.handle.write("\n")
        self.count += 1


def read_ndjson(path):
    """Yield records from a newline-delimited JSON file"""
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as e:
                raise DiagnosticsError(f"{path}:{number}: malformed record ({e.msg})")


class BaseTableWriter:
    """Base class for CSV outputs (one file per table)"""

    header = ()

    def __init__(self, path):
        self.path = Path(path)

    def rows(self, data):
        """Yield CSV rows for ``data``"""
        raise NotImplementedError

    def write(self, data):
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            count = 0
            with open(self.path, "w", newline="", encoding="utf-8") as csvfile:
                writer = csv.writer(csvfile, quoting=csv.QUOTE_MINIMAL)
                writer.writerow(self.header)
                for row in self.rows(data):
                    writer.writerow(row)
                    count += 1
            return {"success": True, "file_path": str(self.path), "rows": count}

        except OSError as e:
            logger.error(f"Error writing {self.path}: {str(e)}")
            return {"success": False, "error": str(e)}


def read_table(path):
    """Read a CSV written by a BaseTableWriter into a list of dicts"""
    with open(path, newline="", encoding="utf-8") as csvfile:
        return list(csv.DictReader(csvfile))
