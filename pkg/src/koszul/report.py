"""Check results and their serialization."""

from dataclasses import asdict, dataclass, field
import json
import time

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Report:
    check: str
    status: str
    witness: str = None
    seed: int = 0
    window: int = 0
    millis: int = 0
    details: list = field(default_factory=list, compare=False, repr=False)

    @property
    def passed(self):
        return self.status == PASS

    def to_dict(self):
        d = asdict(self)
        d.pop("details")
        return d

    @staticmethod
    def from_dict(d):
        return Report(d["check"], d["status"], d.get("witness"), int(d.get("seed", 0)),
                      int(d.get("window", 0)), int(d.get("millis", 0)))


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.millis = int(round((time.perf_counter() - self.start) * 1000))


def verdict(check, failures, seed=0, window=0, millis=0):
    """Build a report from a list of failure descriptions (empty = pass)."""
    if failures:
        return Report(check, FAIL, "; ".join(str(f) for f in failures[:3]), seed, window, millis,
                      list(failures))
    return Report(check, PASS, None, seed, window, millis)


def emit(reports, fmt="json"):
    reports = sorted(reports, key=lambda r: r.check)
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=False)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    if not reports:
        return ""
    width = max(len(r.check) for r in reports)
    lines = [f"{'check'.ljust(width)}  status   millis  seed  window  witness"]
    for r in reports:
        lines.append(f"{r.check.ljust(width)}  {r.status.ljust(7)}  {r.millis:6d}  {r.seed:4d}  "
                     f"{r.window:6d}  {r.witness or ''}")
    return "\n".join(lines)


def load_reports(text):
    return [Report.from_dict(d) for d in json.loads(text)]


def overall_passed(reports):
    return all(r.status != FAIL for r in reports)
