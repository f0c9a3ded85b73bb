"""Implicit graph topologies with packed-integer vertex keys.

Every topology studied here is infinite, so vertices are never stored up
front.  Instead each vertex is a non-negative integer key whose decoded
form depends on the topology: a position on the (half) line, an (x, y)
pair on the ladder, a root-path digit string on trees, or a coordinate
tuple on lattices (signed coordinates pass through a zig-zag map before
bit interleaving).  The codec is injective per topology and total on the
documented key range, which is what makes lazy simulation on unbounded
graphs possible.

One auxiliary vertex, ``AUX`` (key ``-1``), is attached to the root of
every topology by a single edge.  It is where the chasing color starts
and it is excluded from distances and path counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

AUX = -1
ROOT = 0

RED = 1
BLUE = 2


class Kind(IntEnum):
    HALF_LINE = 0
    LINE = 1
    LADDER = 2
    TREE = 3
    LATTICE = 4
    ORIENTED_LATTICE = 5


class MalformedVertex(ValueError):
    """Key is not a valid vertex of the topology."""


class RangeLimit(ValueError):
    """Coordinates exceed what the packed 63-bit key can hold."""


@dataclass(frozen=True)
class DirectedEdge:
    src: int
    dst: int


def _zigzag(x: int) -> int:
    return 2 * x if x >= 0 else -2 * x - 1


def _unzigzag(z: int) -> int:
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


def _interleave(parts: tuple[int, ...], bits: int) -> int:
    code = 0
    k = len(parts)
    for i in range(bits):
        for j in range(k):
            code |= ((parts[j] >> i) & 1) << (i * k + j)
    return code


def _deinterleave(code: int, k: int, bits: int) -> tuple[int, ...]:
    parts = [0] * k
    for i in range(bits):
        for j in range(k):
            parts[j] |= ((code >> (i * k + j)) & 1) << i
    return tuple(parts)


@dataclass(frozen=True)
class PathCount:
    """Result of a self-avoiding path enumeration.

    ``truncated`` is set instead of ever reporting a silently wrong
    count: when true, ``count`` is only a lower bound (the cap).
    """

    count: int
    truncated: bool


@dataclass(frozen=True)
class Topology:
    """An implicit rooted graph plus the auxiliary vertex ``AUX``.

    ``param`` is the branching factor for trees and the dimension for
    lattices; it is 0 for the three one-dimensional kinds.
    """

    kind: Kind
    param: int = 0

    def __post_init__(self):
        if self.kind == Kind.TREE and self.param < 2:
            raise ValueError("tree branching factor must be >= 2")
        if self.kind in (Kind.LATTICE, Kind.ORIENTED_LATTICE) and self.param < 1:
            raise ValueError("lattice dimension must be >= 1")

    # ---- construction ---------------------------------------------------

    @staticmethod
    def half_line() -> "Topology":
        return Topology(Kind.HALF_LINE)

    @staticmethod
    def line() -> "Topology":
        return Topology(Kind.LINE)

    @staticmethod
    def ladder() -> "Topology":
        return Topology(Kind.LADDER)

    @staticmethod
    def tree(d: int) -> "Topology":
        return Topology(Kind.TREE, d)

    @staticmethod
    def lattice(dim: int) -> "Topology":
        return Topology(Kind.LATTICE, dim)

    @staticmethod
    def oriented_lattice(dim: int) -> "Topology":
        return Topology(Kind.ORIENTED_LATTICE, dim)

    @staticmethod
    def from_descriptor(text: str) -> "Topology":
        """Parse a plain-text descriptor such as ``tree:d=3`` or ``ladder``.

        Recognized forms: ``half-line``/``halfline``, ``line``, ``ladder``,
        ``tree:d=K``, ``zd:dim=K`` (aliases ``z1``, ``z2``, ...) and
        ``oriented-zd:dim=K`` (aliases ``oriented-z2``, ...).
        """
        s = text.strip().lower()
        name, _, argpart = s.partition(":")
        args = {}
        if argpart:
            for piece in argpart.split(","):
                k, _, v = piece.partition("=")
                if not v:
                    raise ValueError(f"bad descriptor argument {piece!r} in {text!r}")
                args[k.strip()] = v.strip()
        if name in ("half-line", "halfline"):
            return Topology.half_line()
        if name == "line":
            return Topology.line()
        if name == "ladder":
            return Topology.ladder()
        if name == "tree":
            return Topology.tree(int(args.get("d", "0")))
        if name == "zd":
            return Topology.lattice(int(args.get("dim", "0")))
        if name == "oriented-zd":
            return Topology.oriented_lattice(int(args.get("dim", "0")))
        if name.startswith("oriented-z") and name[10:].isdigit():
            return Topology.oriented_lattice(int(name[10:]))
        if name.startswith("z") and name[1:].isdigit():
            return Topology.lattice(int(name[1:]))
        raise ValueError(f"unknown topology descriptor {text!r}")

    def descriptor(self) -> str:
        return {
            Kind.HALF_LINE: "half-line",
            Kind.LINE: "line",
            Kind.LADDER: "ladder",
            Kind.TREE: f"tree:d={self.param}",
            Kind.LATTICE: f"zd:dim={self.param}",
            Kind.ORIENTED_LATTICE: f"oriented-zd:dim={self.param}",
        }[self.kind]

    # ---- codec ----------------------------------------------------------

    @property
    def coord_bits(self) -> int:
        """Bits available per coordinate in a packed lattice key."""
        return 63 // self.param

    @property
    def is_oriented(self) -> bool:
        return self.kind == Kind.ORIENTED_LATTICE

    def key_upper_bound(self) -> int:
        """Exclusive upper bound of the valid key range (AUX excluded)."""
        if self.kind in (Kind.LATTICE, Kind.ORIENTED_LATTICE):
            return 1 << (self.coord_bits * self.param)
        return 1 << 62

    def encode(self, decoded) -> int:
        """Pack a decoded vertex back into its integer key."""
        k = self.kind
        if k == Kind.HALF_LINE:
            (n,) = self._as_tuple(decoded, 1)
            if n < 0:
                raise MalformedVertex(f"half-line position {n} < 0")
            return n
        if k == Kind.LINE:
            (x,) = self._as_tuple(decoded, 1)
            return _zigzag(x)
        if k == Kind.LADDER:
            x, y = self._as_tuple(decoded, 2)
            if y not in (0, 1):
                raise MalformedVertex(f"ladder rung {y} not in {{0, 1}}")
            return _zigzag(x) * 2 + y
        if k == Kind.TREE:
            key = 0
            for digit in decoded:
                if not 0 <= digit < self.param:
                    raise MalformedVertex(f"tree child index {digit} out of range")
                key = key * self.param + 1 + digit
            return key
        coords = self._as_tuple(decoded, self.param)
        bits = self.coord_bits
        if k == Kind.ORIENTED_LATTICE:
            parts = []
            for c in coords:
                if c < 0:
                    raise MalformedVertex(f"oriented lattice coordinate {c} < 0")
                parts.append(c)
        else:
            parts = [_zigzag(c) for c in coords]
        for part in parts:
            if part >> bits:
                raise RangeLimit(
                    f"coordinate too large for {self.descriptor()} "
                    f"({bits} bits per axis)"
                )
        return _interleave(tuple(parts), bits)

    def decode(self, key: int):
        """Unpack a key into its decoded form (tuple, int, or digit path)."""
        self._check_key(key)
        k = self.kind
        if k == Kind.HALF_LINE:
            return key
        if k == Kind.LINE:
            return _unzigzag(key)
        if k == Kind.LADDER:
            return (_unzigzag(key >> 1), key & 1)
        if k == Kind.TREE:
            digits = []
            while key > 0:
                key -= 1
                digits.append(key % self.param)
                key //= self.param
            return tuple(reversed(digits))
        parts = _deinterleave(key, self.param, self.coord_bits)
        if k == Kind.ORIENTED_LATTICE:
            return parts
        return tuple(_unzigzag(z) for z in parts)

    def _as_tuple(self, decoded, n: int) -> tuple[int, ...]:
        if n == 1 and isinstance(decoded, int):
            return (decoded,)
        t = tuple(decoded)
        if len(t) != n:
            raise MalformedVertex(f"expected {n} coordinates, got {len(t)}")
        return t

    def _check_key(self, key: int) -> None:
        if not isinstance(key, int) or isinstance(key, bool):
            raise MalformedVertex(f"vertex key must be an integer, got {key!r}")
        if key == AUX:
            raise MalformedVertex("auxiliary vertex has no decoded form")
        if key < 0 or key >= self.key_upper_bound():
            raise MalformedVertex(f"key {key} outside valid range")

    # ---- structure ------------------------------------------------------

    def neighbors(self, v: int) -> list[DirectedEdge]:
        """All edges usable for spreading from ``v``.

        Undirected topologies list both orientations (the reverse edge
        appears in the other endpoint's list); the oriented lattice only
        yields edges along the positive basis vectors.  ``AUX`` has the
        single edge to the root, and the root lists the edge back except
        on the oriented lattice, where that edge points root-ward only.
        """
        if v == AUX:
            return [DirectedEdge(AUX, ROOT)]
        self._check_key(v)
        k = self.kind
        out: list[DirectedEdge] = []
        if k == Kind.HALF_LINE:
            if v == 0:
                return [DirectedEdge(0, 1), DirectedEdge(0, AUX)]
            return [DirectedEdge(v, v - 1), DirectedEdge(v, v + 1)]
        if k == Kind.LINE:
            x = _unzigzag(v)
            out = [
                DirectedEdge(v, _zigzag(x - 1)),
                DirectedEdge(v, _zigzag(x + 1)),
            ]
            if v == ROOT:
                out.append(DirectedEdge(v, AUX))
            return out
        if k == Kind.LADDER:
            x, y = self.decode(v)
            out = [
                DirectedEdge(v, self.encode((x - 1, y))),
                DirectedEdge(v, self.encode((x + 1, y))),
                DirectedEdge(v, self.encode((x, 1 - y))),
            ]
            if v == ROOT:
                out.append(DirectedEdge(v, AUX))
            return out
        if k == Kind.TREE:
            d = self.param
            out = [DirectedEdge(v, v * d + 1 + i) for i in range(d)]
            out.append(DirectedEdge(v, (v - 1) // d if v > 0 else AUX))
            return out
        coords = self.decode(v)
        if k == Kind.ORIENTED_LATTICE:
            for i in range(self.param):
                nb = list(coords)
                nb[i] += 1
                out.append(DirectedEdge(v, self.encode(nb)))
            return out
        for i in range(self.param):
            for step in (-1, 1):
                nb = list(coords)
                nb[i] += step
                out.append(DirectedEdge(v, self.encode(nb)))
        if v == ROOT:
            out.append(DirectedEdge(v, AUX))
        return out

    def in_neighbors(self, v: int) -> list[int]:
        """Sources of edges that point at ``v`` (used by the chaser)."""
        if self.kind != Kind.ORIENTED_LATTICE:
            return [e.dst for e in self.neighbors(v)]
        if v == AUX:
            return []
        coords = self.decode(v)
        srcs = []
        for i in range(self.param):
            if coords[i] > 0:
                nb = list(coords)
                nb[i] -= 1
                srcs.append(self.encode(nb))
        if v == ROOT:
            srcs.append(AUX)
        return srcs

    def distance_to_root(self, v: int) -> int:
        """Graph distance from the root (l1 norm on lattices)."""
        self._check_key(v)
        k = self.kind
        if k == Kind.HALF_LINE:
            return v
        if k == Kind.LINE:
            return abs(_unzigzag(v))
        if k == Kind.LADDER:
            x, y = self.decode(v)
            return abs(x) + y
        if k == Kind.TREE:
            depth = 0
            while v > 0:
                v = (v - 1) // self.param
                depth += 1
            return depth
        return sum(abs(c) for c in self.decode(v))

    def count_self_avoiding_paths(self, n: int, cap: int = 10_000_000) -> PathCount:
        """Exact count of self-avoiding paths of length ``n`` from the root.

        The enumeration is a depth-first search over the implicit graph,
        never visiting ``AUX``.  Once the running count exceeds ``cap``
        the search stops and the result is flagged as truncated.
        """
        if n < 1:
            raise ValueError("path length must be >= 1")
        count = 0
        visited = {ROOT}
        stack: list[tuple[int, int]] = [(ROOT, 0)]
        path: list[int] = [ROOT]

        def extensions(u: int) -> list[int]:
            return [e.dst for e in self.neighbors(u) if e.dst != AUX]

        # iterative DFS keeping the current path as the visited set
        frames = [(ROOT, iter(extensions(ROOT)))]
        while frames:
            u, it = frames[-1]
            advanced = False
            for w in it:
                if w in visited:
                    continue
                if len(frames) == n:
                    count += 1
                    if count > cap:
                        return PathCount(cap, True)
                    continue
                visited.add(w)
                frames.append((w, iter(extensions(w))))
                advanced = True
                break
            if not advanced:
                frames.pop()
                if frames:
                    visited.discard(u)
        return PathCount(count, False)

    def certify_growth_base(self, d: int, lengths, cap: int = 10_000_000) -> bool:
        """Check ``count(n) <= d**n`` on the sampled lengths.

        Returns False as soon as a length fails or an enumeration is
        truncated (a truncated count cannot certify the inequality when
        the cap itself is below ``d**n``).
        """
        for n in lengths:
            res = self.count_self_avoiding_paths(n, cap)
            if res.truncated and res.count <= d**n:
                return False
            if res.count > d**n:
                return False
        return True

    def degree_bound(self) -> int:
        """Max number of spread edges out of any vertex, AUX edge included."""
        k = self.kind
        if k == Kind.HALF_LINE or k == Kind.LINE:
            return 3
        if k == Kind.LADDER:
            return 4
        if k == Kind.TREE:
            return self.param + 1
        if k == Kind.LATTICE:
            return 2 * self.param + 1
        return self.param
