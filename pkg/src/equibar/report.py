"""Machine-readable reports.

Every check becomes a :class:`Record` with a status from ``STATUSES`` and a
short anchor naming the mathematical statement it exercises (``"plumbing"``
for pure bookkeeping).  Rendering sorts keys and omits timing unless asked,
so two runs with the same configuration produce identical bytes.
"""
import json
import time
from dataclasses import dataclass, field

STATUSES = ("PASS", "FAIL", "UNSTABILIZED", "SKIPPED")


def _plain(value):
    """Convert numpy scalars/arrays and tuples into JSON-friendly values."""
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class Record:
    name: str
    anchor: str
    status: str
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if not self.anchor:
            raise ValueError("every record needs an anchor")

    def to_json(self):
        return {"name": self.name, "anchor": self.anchor, "status": self.status,
                "witness": _plain(self.witness)}


class Report:
    def __init__(self, command, config, version):
        self.command = command
        self.config = dict(config)
        self.version = version
        self.records = []
        self.timing = {}
        self.results = {}

    def add(self, name, anchor, status, witness=None):
        rec = Record(name, anchor, status, witness or {})
        self.records.append(rec)
        return rec

    def check(self, name, anchor, ok, witness=None):
        return self.add(name, anchor, "PASS" if ok else "FAIL", witness)

    def timed(self, label):
        report = self

        class _Timer:
            def __enter__(self):
                self.start = time.perf_counter()

            def __exit__(self, *exc):
                report.timing[label] = round(time.perf_counter() - self.start, 4)
                return False

        return _Timer()

    @property
    def failed(self):
        return any(r.status == "FAIL" for r in self.records)

    def summary(self):
        counts = {s: 0 for s in STATUSES}
        for r in self.records:
            counts[r.status] += 1
        return counts

    def to_json(self, include_timing=False):
        out = {"tool": "equibar", "version": self.version, "command": self.command,
               "config": _plain(self.config), "records": [r.to_json() for r in self.records],
               "summary": self.summary()}
        if self.results:
            out["results"] = _plain(self.results)
        if include_timing:
            out["timing"] = dict(self.timing)
        return out

    def render(self, include_timing=False):
        return json.dumps(self.to_json(include_timing), indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"
