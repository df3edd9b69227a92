"""Append-only JSON-lines cache of per-radicand results.

Each line is one object with the keys in ``FIELDS``; unknown values are null.
Later lines win over earlier ones field by field. Lines that fail to parse are
skipped with a warning, so a torn write never poisons the file.
"""
import json
import logging
import os
from pathlib import Path

__all__ = ["ResultCache", "FIELDS", "ENV_VAR", "resolve_path"]

log = logging.getLogger(__name__)

ENV_VAR = "CFRACT_CACHE"
FIELDS = ("n", "tau", "unit_A_digits", "unit_B_digits", "hr_value", "hr_method",
          "precision_bits", "hr_terms_used", "hr_est_error", "series_terms")


def resolve_path(flag_value):
    """--cache wins over the environment variable; neither means no cache."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


class ResultCache:
    def __init__(self, path):
        self.path = Path(path) if path else None
        self._lines = []
        if self.path and self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    if not isinstance(rec, dict) or "n" not in rec:
                        raise ValueError("not a cache record")
                except ValueError as exc:
                    log.warning("%s:%d: skipping corrupt cache line (%s)", self.path, lineno, exc)
                    continue
                self._lines.append(rec)

    def __bool__(self):
        return self.path is not None

    def _matching(self, n):
        key = str(n)
        return [r for r in self._lines if str(r.get("n")) == key]

    def unit(self, n):
        for r in reversed(self._matching(n)):
            if r.get("unit_A_digits") is not None:
                return int(r["tau"]), int(r["unit_A_digits"]), int(r["unit_B_digits"])
        return None

    def hr(self, n, method, precision, series_terms=None):
        for r in reversed(self._matching(n)):
            if (r.get("hr_value") is not None and r.get("hr_method") == method
                    and r.get("precision_bits") == precision and r.get("series_terms") == series_terms):
                return r
        return None

    def append(self, **fields):
        if self.path is None:
            return
        rec = {k: fields.get(k) for k in FIELDS}
        rec["n"] = str(rec["n"])
        self._lines.append(rec)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
