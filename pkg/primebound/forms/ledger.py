import hashlib
import json
import os
import re

from primebound.errors import AuditFailure, PreconditionError

_LINE = re.compile(r"^\[(\d+),(\d+)\) ([0-9a-f]+)$")


def segment_checksum(records):
    """First 16 hex digits of the sha256 of the segment's records as JSON."""
    payload = json.dumps(records, separators=(",", ":")).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


class ScanLedger:
    """
    Resumable record of completed scan segments, one '[start,end) checksum'
    line per segment. A ledger without a path keeps nothing.
    """

    def __init__(self, path=None):
        self.path = path
        self.entries = {}
        if path and os.path.exists(path):
            self._load()

    def _load(self):
        with open(self.path) as f:
            for number, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                match = _LINE.match(line)
                if match is None:
                    raise PreconditionError(
                        "{}:{}: malformed ledger line {!r}".format(self.path, number, line)
                    )
                start, end, checksum = match.groups()
                self.entries[(int(start), int(end))] = checksum

    def completed(self, start, end):
        return (start, end) in self.entries

    def verify(self, start, end, records):
        expected = self.entries[(start, end)]
        actual = segment_checksum(records)
        if actual != expected:
            raise AuditFailure(
                "segment [{},{}) checksum {} does not match the ledger ({})".format(
                    start, end, actual, expected
                )
            )

    def record(self, start, end, records):
        checksum = segment_checksum(records)
        self.entries[(start, end)] = checksum
        if self.path:
            with open(self.path, "a") as f:
                f.write("[{},{}) {}\n".format(start, end, checksum))
                f.flush()
                os.fsync(f.fileno())
        return checksum
