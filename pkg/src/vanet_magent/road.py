"""Manhattan road grid and vehicle movement along its segments."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace

from .errors import BadConfig
from .net import NodeId

Point = tuple[float, float]


@dataclass(frozen=True)
class Segment:
    a: int
    b: int
    length: float


@dataclass(frozen=True, eq=False)
class RoadNetwork:
    intersections: tuple[Point, ...]
    segments: tuple[Segment, ...]
    dfa_sites: tuple[int, ...]

    def __post_init__(self):
        n = len(self.intersections)
        if not self.segments:
            raise BadConfig("road network has no segments")
        for s in self.segments:
            if not (0 <= s.a < n and 0 <= s.b < n) or s.a == s.b:
                raise BadConfig(f"segment {s} has invalid endpoints")
            if s.length <= 0:
                raise BadConfig(f"segment {s} has zero length")
            d = math.dist(self.intersections[s.a], self.intersections[s.b])
            if abs(d - s.length) > 1e-6:
                raise BadConfig(f"segment {s} length differs from endpoint distance {d}")
        if not self.dfa_sites:
            raise BadConfig("no DFA sites")
        if len(set(self.dfa_sites)) != len(self.dfa_sites):
            raise BadConfig("duplicate DFA site")
        for i in self.dfa_sites:
            if not 0 <= i < n:
                raise BadConfig(f"DFA site {i} is not an intersection")
        incident: list[list[int]] = [[] for _ in range(n)]
        for k, s in enumerate(self.segments):
            incident[s.a].append(k)
            incident[s.b].append(k)
        object.__setattr__(self, "incident", tuple(tuple(x) for x in incident))
        if not self._connected():
            raise BadConfig("road network is not connected")

    def _connected(self) -> bool:
        seen = {0}
        todo = deque([0])
        while todo:
            u = todo.popleft()
            for k in self.incident[u]:
                s = self.segments[k]
                v = s.b if s.a == u else s.a
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
        return len(seen) == len(self.intersections)

    @classmethod
    def from_edges(cls, points, edges, dfa_sites) -> "RoadNetwork":
        pts = tuple((float(x), float(y)) for x, y in points)
        segs = tuple(Segment(a, b, math.dist(pts[a], pts[b])) for a, b in edges)
        return cls(pts, segs, tuple(dfa_sites))


def placement_sites(rule, n: int) -> tuple[int, ...]:
    if rule == "all":
        return tuple(range(n))
    if isinstance(rule, str) and rule.startswith("every:"):
        try:
            k = int(rule.split(":", 1)[1])
        except ValueError:
            raise BadConfig(f"bad placement rule {rule!r}") from None
        if k < 1:
            raise BadConfig("placement stride must be >= 1")
        return tuple(range(0, n, k))
    if isinstance(rule, (list, tuple)):
        return tuple(int(i) for i in rule)
    raise BadConfig(f"bad placement rule {rule!r}")


def build_road_network(rows: int, cols: int, block_m: float, placement="all") -> RoadNetwork:
    """Manhattan grid; intersection ``r*cols + c`` sits at ``(c*block_m, r*block_m)``."""
    if rows < 1 or cols < 1 or block_m <= 0:
        raise BadConfig(f"bad grid dimensions rows={rows} cols={cols} block_m={block_m}")
    pts = tuple((c * float(block_m), r * float(block_m)) for r in range(rows) for c in range(cols))
    segs = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                segs.append(Segment(i, i + 1, float(block_m)))
            if r + 1 < rows:
                segs.append(Segment(i, i + cols, float(block_m)))
    return RoadNetwork(pts, tuple(segs), placement_sites(placement, rows * cols))


@dataclass(frozen=True)
class Vehicle:
    id: NodeId
    segment: int
    offset_m: float
    speed_mps: float
    heading: int  # 1: toward segment.b, 0: toward segment.a

    @property
    def status(self) -> str:
        return "stationary" if self.speed_mps == 0 else "moving"


def advance_vehicle(v: Vehicle, dt: int, net: RoadNetwork, rng) -> Vehicle:
    """Move ``v`` for ``dt`` ms, turning at intersections (no U-turn unless dead end)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if v.speed_mps == 0:
        return v
    dist = v.speed_mps * dt / 1000.0
    seg, off, head = v.segment, v.offset_m, v.heading
    while True:
        s = net.segments[seg]
        remaining = s.length - off if head == 1 else off
        if dist < remaining:
            off = off + dist if head == 1 else off - dist
            break
        dist -= remaining
        node = s.b if head == 1 else s.a
        options = [k for k in net.incident[node] if k != seg] or [seg]
        seg = rng.choice(options)
        s = net.segments[seg]
        if s.a == node:
            off, head = 0.0, 1
        else:
            off, head = s.length, 0
    off = min(max(off, 0.0), net.segments[seg].length)
    return replace(v, segment=seg, offset_m=off, heading=head)


def vehicle_xy(v: Vehicle, net: RoadNetwork) -> Point:
    s = net.segments[v.segment]
    (ax, ay), (bx, by) = net.intersections[s.a], net.intersections[s.b]
    f = v.offset_m / s.length
    return (ax + (bx - ax) * f, ay + (by - ay) * f)


def place_vehicles(count: int, net: RoadNetwork, speed_min: float, speed_max: float, rng) -> list[Vehicle]:
    out = []
    for i in range(count):
        seg = rng.uniform(0, len(net.segments) - 1)
        off = rng.random() * net.segments[seg].length
        head = rng.uniform(0, 1)
        speed = speed_min + (speed_max - speed_min) * rng.random()
        out.append(Vehicle(NodeId("vehicle", i), seg, off, speed, head))
    return out
