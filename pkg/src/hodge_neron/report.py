"""Check-list reports shared by the validation operations and the CLI."""

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))
        return ok

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failed(self):
        return [c.name for c in self.checks if not c.ok]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c.ok
        raise KeyError(name)

    def lines(self):
        out = []
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            out.append(f"[{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return out

    def to_dict(self):
        return {"title": self.title,
                "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
                "data": self.data}
