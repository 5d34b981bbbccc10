"""Route cache keyed by scenario.

A scenario is the canonical topology text, the demand, the QoS thresholds
and every GA setting except the seed, hashed together. The store is a text
file with one record per line::

    kb <key-hash> <node> <node> ... <bottleneck> <hop_count> <iso-timestamp>

Writes rewrite the whole file into a temporary sibling and rename it over
the original, so readers never see a half-written store.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import KnowledgeBaseError
from .ga import GaConfig, RouteResult, path_available_bandwidth
from .grading import QosThresholds
from .topology import Demand, Topology, canonical_form

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioKey:
    topology_hash: str
    demand: tuple
    thresholds: tuple
    config: tuple

    @property
    def digest(self) -> str:
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def scenario_key(topology: Topology, demand: Demand, thresholds: QosThresholds,
                 config: GaConfig, max_hops: int | None = None) -> ScenarioKey:
    topo_hash = hashlib.sha256(canonical_form(topology).encode()).hexdigest()
    settings = dataclasses.asdict(config)
    settings.pop("seed")
    settings["max_hops"] = max_hops
    return ScenarioKey(
        topology_hash=topo_hash,
        demand=(demand.source, demand.destination, repr(demand.required_bandwidth), repr(demand.message_size)),
        thresholds=(repr(thresholds.delay_max), repr(thresholds.jitter_max), repr(thresholds.loss_max)),
        config=tuple(sorted((k, repr(v)) for k, v in settings.items())),
    )


@dataclass(frozen=True)
class KnowledgeEntry:
    key: str
    path: tuple
    bottleneck_ab: float
    hop_count: int
    created_at: datetime

    @classmethod
    def from_route(cls, key, route: RouteResult, created_at=None):
        digest = key.digest if isinstance(key, ScenarioKey) else key
        when = created_at or datetime.now(timezone.utc).replace(microsecond=0)
        return cls(digest, tuple(route.path), route.bottleneck_ab, route.hop_count, when)

    def to_route(self) -> RouteResult:
        return RouteResult(self.path, self.hop_count, self.bottleneck_ab)

    def to_line(self) -> str:
        nodes = " ".join(map(str, self.path))
        return f"kb {self.key} {nodes} {self.bottleneck_ab!r} {self.hop_count} {self.created_at.isoformat()}"

    @classmethod
    def from_line(cls, line: str) -> KnowledgeEntry:
        fields = line.split()
        if len(fields) < 7 or fields[0] != "kb":
            raise ValueError(f"malformed record: {line!r}")
        path = tuple(int(x) for x in fields[2:-3])
        return cls(fields[1], path, float(fields[-3]), int(fields[-2]),
                   datetime.fromisoformat(fields[-1]))


def _check_feasible(entry: KnowledgeEntry, topology=None, demand=None):
    if len(entry.path) < 2 or len(set(entry.path)) != len(entry.path):
        raise ValueError("route is not a simple path")
    if entry.hop_count != len(entry.path) - 1:
        raise ValueError("hop count does not match the path")
    if not entry.bottleneck_ab > 0:
        raise ValueError("route has no spare bandwidth")
    if topology is not None and demand is not None:
        if path_available_bandwidth(entry.path, topology, demand) <= 0:
            raise ValueError("route crosses a saturated link")


class KnowledgeBase:
    """Single-writer, many-reader route store backed by one text file."""

    def __init__(self, path):
        self.path = Path(path)

    def entries(self) -> dict:
        """All records keyed by hash; raises KnowledgeBaseError on a malformed file."""
        if not self.path.exists():
            return {}
        out = {}
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise KnowledgeBaseError(f"cannot read {self.path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                entry = KnowledgeEntry.from_line(line)
            except ValueError as exc:
                raise KnowledgeBaseError(f"{self.path}:{lineno}: {exc}") from None
            out[entry.key] = entry
        return out

    def lookup(self, key, topology: Topology | None = None, demand: Demand | None = None):
        digest = key.digest if isinstance(key, ScenarioKey) else key
        try:
            entry = self.entries().get(digest)
        except KnowledgeBaseError as exc:
            log.warning("knowledge base unreadable, treating as miss: %s", exc)
            return None
        if entry is None:
            return None
        try:
            _check_feasible(entry, topology, demand)
        except ValueError as exc:
            log.warning("discarding cached route %s: %s", digest[:12], exc)
            return None
        return entry

    def store(self, entry: KnowledgeEntry, topology: Topology | None = None,
              demand: Demand | None = None) -> None:
        _check_feasible(entry, topology, demand)
        try:
            records = self.entries()
        except KnowledgeBaseError as exc:
            log.warning("overwriting unreadable knowledge base: %s", exc)
            records = {}
        records[entry.key] = entry
        body = "".join(e.to_line() + "\n" for e in records.values())
        directory = self.path.parent
        try:
            directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=self.path.name + ".", suffix=".tmp", dir=directory)
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(body)
                os.replace(tmp, self.path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            raise KnowledgeBaseError(f"cannot write {self.path}: {exc}") from exc
