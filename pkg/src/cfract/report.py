from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    first_failure: object = None  # offending index (or tuple) when passed is False
    detail: str = ""


@dataclass
class CheckReport:
    """Per-identity pass/fail record. Failures are data, never exceptions."""

    subject: object = None
    checks: list = field(default_factory=list)

    def add(self, name, passed, first_failure=None, detail=""):
        self.checks.append(Check(name, bool(passed), first_failure, detail))

    def record(self, name, indices, predicate):
        """Evaluate ``predicate(i)`` over ``indices``; keep the first failing index."""
        for i in indices:
            if not predicate(i):
                self.add(name, False, i)
                return False
        self.add(name, True)
        return True

    def merge(self, other):
        self.checks.extend(other.checks)
        return self

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __bool__(self):
        return self.ok
