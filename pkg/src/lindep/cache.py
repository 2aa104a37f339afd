"""On-disk cache of evaluated L-values.

One JSON file per (subject, method), holding the highest-precision value seen.
Writes go to a temporary file in the same directory and are moved into place
with os.replace, so concurrent readers never see a half-written entry.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from ._version import __version__
from .errors import CorruptEntry
from .lvalues import LValueRecord
from .numerics import Complex, Real

ENV_VAR = "LINDEP_CACHE"
log = logging.getLogger(__name__)


def default_cache_dir():
    return os.environ.get(ENV_VAR)


class ValueCache:
    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, subject, method):
        digest = hashlib.sha256(f"{subject}|{method}".encode()).hexdigest()[:32]
        return self.directory / f"{digest}.json"

    def _read(self, path):
        try:
            data = json.loads(path.read_text())
            for key in ("subject", "method", "precision", "value", "imag", "err", "kind"):
                if key not in data:
                    raise CorruptEntry(f"missing field {key!r}")
            int(data["precision"])
            return data
        except (OSError, ValueError, CorruptEntry) as exc:
            raise CorruptEntry(f"{path}: {exc}") from exc

    def lookup(self, subject, method, bits):
        """The cached record if one exists at >= bits of precision, else None."""
        path = self._path(subject, method)
        if not path.exists():
            return None
        try:
            data = self._read(path)
            if data["subject"] != subject or data["method"] != method or int(data["precision"]) < bits:
                return None
            re = Real.from_decimal(data["value"], data["err"], bits)
            im = Real.from_decimal(data["imag"], data["err"], bits)
        except (CorruptEntry, ValueError, ArithmeticError) as exc:
            log.warning("ignoring corrupt cache entry (%s); recomputing", exc)
            return None
        return LValueRecord(subject, method, Complex(re, im), bits, data["kind"])

    def store(self, record):
        path = self._path(record.subject, record.method)
        if path.exists():
            try:
                if int(self._read(path)["precision"]) >= record.bits:
                    return path
            except CorruptEntry:
                pass
        data = record.to_json()
        entry = {
            "subject": record.subject,
            "method": record.method,
            "kind": record.kind,
            "precision": record.bits,
            "value": data["value"],
            "imag": data["imag"],
            "err": data["err"],
            "version": __version__,
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path
