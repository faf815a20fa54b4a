"""Search caps.

Every exhaustive search in the engine is bounded by a :class:`Budget`.  The
defaults can be overridden process-wide with the ``DESPLA_BUDGET`` environment
variable, either a JSON object or ``key=value`` pairs separated by commas::

    DESPLA_BUDGET="comma_objects=2000,cocones=500000"
"""
import json
import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "DESPLA_BUDGET"


@dataclass(frozen=True)
class Budget:
    # equivalence search runs on skeleta; these cap the skeleton sizes
    equiv_objects: int = 5
    equiv_morphisms: int = 40
    # raw size accepted before skeletonization
    equiv_raw_objects: int = 4000
    search_nodes: int = 2_000_000
    comma_objects: int = 200
    cocones: int = 1_000_000
    pullback_objects: int = 5000
    pullback_morphisms: int = 2_000_000
    functions: int = 5_000_000
    finset_size: int = 4
    monoid_order: int = 4
    carrier: int = 3

    def override(self, **kw):
        return replace(self, **kw)

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if not text:
            return {}
        if text.startswith("{"):
            raw = json.loads(text)
        else:
            raw = {}
            for part in text.split(","):
                key, _, value = part.partition("=")
                raw[key.strip()] = value.strip()
        known = {f.name for f in fields(cls)}
        out = {}
        for key, value in raw.items():
            if key not in known:
                raise ValueError(f"unknown budget key {key!r}")
            out[key] = int(value)
        return out

    @classmethod
    def from_env(cls, environ=None):
        environ = os.environ if environ is None else environ
        return cls(**cls.parse(environ.get(ENV_VAR, "")))


def default_budget():
    return Budget.from_env()


def resolve(budget):
    return default_budget() if budget is None else budget


_usage = {}


def usage():
    """Work done by every search since the last :func:`reset_usage`, keyed by search kind."""
    return dict(_usage)


def reset_usage():
    _usage.clear()


class Counter:
    """Mutable tally of work done by one search, checked against a cap.

    Ticks also accumulate in a process-wide tally so reports can state the
    budget they consumed.
    """

    __slots__ = ("what", "limit", "count")

    def __init__(self, what, limit):
        self.what = what
        self.limit = limit
        self.count = 0

    def tick(self, n=1):
        self.count += n
        _usage[self.what] = _usage.get(self.what, 0) + n
        if self.count > self.limit:
            from .errors import BudgetExceeded
            raise BudgetExceeded(self.what, self.limit, self.count)
