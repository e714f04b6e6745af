"""Combinatorial model of compact oriented surfaces and embedded curves.

A surface is given by a cell decomposition: a list of faces, each face a
cyclic word of signed edge references.  Reading a face counterclockwise,
sign +1 means the face lies on the left of the (directed) edge, sign -1 on
the right.  Each signed reference may appear at most once globally, which
forces orientability; an edge referenced from both sides is interior, an
edge referenced once lies on the boundary.

Vertices are not part of the input.  They are recovered from the corner
structure: walking a face boundary, the head end of one reference and the
tail end of the next meet at a vertex, and that corner also records the
counterclockwise rotation there.  Around an interior vertex the rotation
closes into a cycle; around a boundary vertex it forms a path.

Curves are itineraries: a cyclic sequence of transverse edge crossings,
each crossing recording the edge, the crossing direction (+1 for crossing
the edge left-to-right, i.e. from the side of the +1 slot), and an exact
rational position along the edge.  Between consecutive crossings the curve
runs as a chord through a single face, so embeddedness is a finite check
on chord interleaving along face boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .errors import PreconditionError, ValidationError

# An edge end: (edge name, 0) is the tail, (edge name, 1) the head.
End = tuple[str, int]
# A slot: (edge name, sign).  Sign +1 iff the referencing face is on the
# left of the directed edge.
Slot = tuple[str, int]
# A crossing event: (edge, direction, position), position in (0, 1) along
# the edge from tail to head.
Event = tuple[str, int, Fraction]


def head_end(edge: str, sign: int) -> End:
    """End at which a face walk along this slot arrives."""
    return (edge, 1 if sign > 0 else 0)


def tail_end(edge: str, sign: int) -> End:
    """End from which a face walk along this slot departs."""
    return (edge, 0 if sign > 0 else 1)


class UnionFind:
    def __init__(self):
        self._parent: dict = {}

    def find(self, x):
        parent = self._parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb

    def groups(self) -> dict:
        out: dict = {}
        for x in self._parent:
            out.setdefault(self.find(x), []).append(x)
        return out


@dataclass(frozen=True)
class CellSurface:
    """Compact connected oriented surface with a cell decomposition.

    `faces` is a tuple of faces; each face is a tuple of (edge, sign)
    slots read counterclockwise.  `chirality` fixes the global handedness
    convention: +1 means crossing an edge from the +1 side to the -1 side
    counts as a left-to-right crossing.  Flipping it mirrors every signed
    convention downstream (crossing signs, positive twist direction).

    All topology (vertices, rotations, boundary circuits, genus) is
    derived in __post_init__ and cached on the instance.
    """

    faces: tuple[tuple[Slot, ...], ...]
    chirality: int = 1

    def __post_init__(self):
        faces = tuple(
            tuple((str(e), int(s)) for e, s in face) for face in self.faces
        )
        object.__setattr__(self, "faces", faces)
        if self.chirality not in (1, -1):
            raise ValidationError(f"chirality must be +1 or -1, got {self.chirality}")
        self._validate_and_index()

    # -- construction-time validation and indexing --

    def _validate_and_index(self) -> None:
        if not self.faces:
            raise ValidationError("surface needs at least one face")
        slot_map: dict[Slot, tuple[int, int]] = {}
        for fi, face in enumerate(self.faces):
            if not face:
                raise ValidationError(f"face {fi} is empty")
            for ei, (edge, sign) in enumerate(face):
                if not edge:
                    raise ValidationError("empty edge name")
                if sign not in (1, -1):
                    raise ValidationError(f"bad sign {sign!r} on edge {edge!r}")
                slot = (edge, sign)
                if slot in slot_map:
                    raise ValidationError(
                        f"slot {slot} appears twice; same-side regluing is not orientable"
                    )
                slot_map[slot] = (fi, ei)

        edges = sorted({e for e, _ in slot_map})
        interior = frozenset(
            e for e in edges if (e, 1) in slot_map and (e, -1) in slot_map
        )
        boundary = frozenset(e for e in edges if e not in interior)

        # Corners: consecutive slots f[i], f[i+1] meet at a vertex, with
        # head_end(f[i]) the immediate ccw neighbour of tail_end(f[i+1]).
        uf = UnionFind()
        ccw_next: dict[End, End] = {}
        for face in self.faces:
            m = len(face)
            for i in range(m):
                arrive = head_end(*face[i])
                depart = tail_end(*face[(i + 1) % m])
                uf.union(arrive, depart)
                ccw_next[depart] = arrive
        for e in edges:
            uf.find((e, 0))
            uf.find((e, 1))

        # Each end has at most one ccw successor and one predecessor, so a
        # connected component is automatically a single cycle (interior
        # vertex) or a single source-to-sink path (boundary vertex).
        has_pred = set(ccw_next.values())
        rotations: list[tuple[End, ...]] = []
        is_interior_vertex: list[bool] = []
        for _, ends in sorted(uf.groups().items()):
            ends_set = set(ends)
            sources = [x for x in ends_set if x not in has_pred]
            if sources:
                cur = sources[0]
                rot = [cur]
                while cur in ccw_next:
                    cur = ccw_next[cur]
                    rot.append(cur)
                if len(rot) != len(ends_set):
                    raise ValidationError(f"broken rotation at vertex {sorted(ends_set)}")
                rotations.append(tuple(rot))
                is_interior_vertex.append(False)
            else:
                start = min(ends_set)
                rot = [start]
                cur = ccw_next[start]
                while cur != start:
                    rot.append(cur)
                    cur = ccw_next[cur]
                if len(rot) != len(ends_set):
                    raise ValidationError(f"broken rotation at vertex {sorted(ends_set)}")
                rotations.append(tuple(rot))
                is_interior_vertex.append(True)

        vertex_of_end: dict[End, int] = {}
        for vi, rot in enumerate(rotations):
            for end in rot:
                vertex_of_end[end] = vi

        # Connectivity through interior edges.
        fuf = UnionFind()
        for fi in range(len(self.faces)):
            fuf.find(fi)
        for e in interior:
            fuf.union(slot_map[(e, 1)][0], slot_map[(e, -1)][0])
        if len(fuf.groups()) != 1:
            raise ValidationError("surface is disconnected")

        # Boundary circuits: after walking boundary slot (e, s) the walk
        # resumes at the source end of the vertex at head_end(e, s).
        boundary_slot_of_source = {}
        for e in boundary:
            s = 1 if (e, 1) in slot_map else -1
            boundary_slot_of_source[tail_end(e, s)] = (e, s)
        circuits: list[tuple[Slot, ...]] = []
        seen: set[Slot] = set()
        for e in sorted(boundary):
            s = 1 if (e, 1) in slot_map else -1
            if (e, s) in seen:
                continue
            circuit = []
            slot = (e, s)
            while slot not in seen:
                seen.add(slot)
                circuit.append(slot)
                v = vertex_of_end[head_end(*slot)]
                source = rotations[v][0]
                slot = boundary_slot_of_source[source]
            circuits.append(tuple(circuit))

        V = len(rotations)
        E = len(edges)
        F = len(self.faces)
        chi = V - E + F
        n = len(circuits)
        if (2 - n - chi) % 2 or chi + n > 2:
            raise ValidationError(f"inconsistent cell structure: chi={chi}, boundary={n}")
        genus = (2 - n - chi) // 2

        object.__setattr__(self, "_slot_map", slot_map)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "interior_edges", interior)
        object.__setattr__(self, "boundary_edges", boundary)
        object.__setattr__(self, "rotations", tuple(rotations))
        object.__setattr__(self, "_is_interior_vertex", tuple(is_interior_vertex))
        object.__setattr__(self, "_vertex_of_end", vertex_of_end)
        object.__setattr__(self, "ccw_next", ccw_next)
        object.__setattr__(self, "boundary_circuits", tuple(circuits))
        object.__setattr__(self, "euler_characteristic", chi)
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "num_boundary", n)

    # -- queries --

    def has_slot(self, edge: str, sign: int) -> bool:
        return (edge, sign) in self._slot_map

    def slot_position(self, edge: str, sign: int) -> tuple[int, int]:
        """(face index, entry index) of a slot."""
        try:
            return self._slot_map[(edge, sign)]
        except KeyError:
            raise ValidationError(f"no slot ({edge!r}, {sign})") from None

    def face_of_slot(self, edge: str, sign: int) -> int:
        return self.slot_position(edge, sign)[0]

    def vertex_at(self, end: End) -> int:
        return self._vertex_of_end[end]

    def vertex_is_interior(self, vi: int) -> bool:
        return self._is_interior_vertex[vi]

    @property
    def is_closed(self) -> bool:
        return self.num_boundary == 0

    @property
    def norm(self) -> int:
        """3g - 3 + n, the number of curves in a maximal disjoint system."""
        return 3 * self.genus - 3 + self.num_boundary

    def __repr__(self) -> str:
        return (
            f"CellSurface(genus={self.genus}, boundary={self.num_boundary}, "
            f"faces={len(self.faces)}, edges={len(self.edges)})"
        )

    # -- serialization --

    def to_json(self) -> dict:
        return {
            "format": 1,
            "chirality": self.chirality,
            "genus": self.genus,
            "boundary": self.num_boundary,
            "faces": [[[e, s] for e, s in face] for face in self.faces],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CellSurface":
        if not isinstance(data, Mapping) or data.get("format") != 1:
            raise ValidationError("surface JSON must carry format: 1")
        try:
            faces = tuple(
                tuple((str(e), int(s)) for e, s in face) for face in data["faces"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad faces field: {exc}") from exc
        surf = cls(faces=faces, chirality=int(data.get("chirality", 1)))
        for key, got in (("genus", surf.genus), ("boundary", surf.num_boundary)):
            if key in data and int(data[key]) != got:
                raise ValidationError(
                    f"declared {key}={data[key]} but cell structure gives {got}"
                )
        return surf


def _walk_coord(sign: int, pos: Fraction) -> Fraction:
    # Parameter of an edge point along the face walk over that slot: a +1
    # slot walks the edge tail-to-head, a -1 slot head-to-tail.
    return pos if sign > 0 else 1 - pos


@dataclass(frozen=True, eq=False)
class EmbeddedCurve:
    """Simple closed curve on a CellSurface, given by its crossing itinerary.

    Each event (edge, direction, position) crosses an interior edge at an
    exact rational position; direction +1 crosses from the face of the +1
    slot to the face of the -1 slot.  Consecutive events must exit into
    and enter from a common face, and the chords drawn inside each face
    must be pairwise non-crossing (embeddedness).

    Curves are oriented by default; set oriented=False for a free curve.
    Equality and hashing compare isotopy-representative normal forms only
    to the extent of reparametrisation (rotation of the itinerary and
    per-edge position renormalisation), not full isotopy.
    """

    surface: CellSurface
    events: tuple[Event, ...]
    oriented: bool = True

    def __post_init__(self):
        events = tuple(
            (str(e), int(d), Fraction(p)) for e, d, p in self.events
        )
        object.__setattr__(self, "events", events)
        self._validate()

    def _validate(self) -> None:
        surf = self.surface
        if not self.events:
            raise ValidationError("curve needs at least one crossing event")
        seen: set[tuple[str, int, int]] = set()
        for e, d, p in self.events:
            if e not in surf.interior_edges:
                raise ValidationError(f"curve crosses non-interior edge {e!r}")
            if d not in (1, -1):
                raise ValidationError(f"bad crossing direction {d}")
            if not 0 < p < 1:
                raise ValidationError(f"crossing position {p} outside (0, 1)")
            # integer key: hashing a Fraction costs a modular inverse
            key = (e, p.numerator, p.denominator)
            if key in seen:
                raise ValidationError(f"repeated crossing point ({e!r}, {p})")
            seen.add(key)

        n = len(self.events)
        chords_by_face: dict[int, list[tuple[tuple, tuple]]] = {}
        for i in range(n):
            e1, d1, p1 = self.events[i]
            e2, d2, p2 = self.events[(i + 1) % n]
            f_exit, ent_exit = surf.slot_position(e1, -d1)
            f_enter, ent_enter = surf.slot_position(e2, d2)
            if f_exit != f_enter:
                raise ValidationError(
                    f"events {i} and {(i + 1) % n} do not share a face: "
                    f"exit into face {f_exit}, enter from face {f_enter}"
                )
            key_a = (ent_exit, _walk_coord(-d1, p1))
            key_b = (ent_enter, _walk_coord(d2, p2))
            chords_by_face.setdefault(f_exit, []).append((key_a, key_b))

        # Pairwise non-crossing chords of a disc nest like brackets: cut the
        # boundary circle before the smallest key and demand stack discipline.
        for f, chords in chords_by_face.items():
            ends = []
            for i, (key_a, key_b) in enumerate(chords):
                lo, hi = (key_a, key_b) if key_a < key_b else (key_b, key_a)
                ends.append((lo, True, i))
                ends.append((hi, False, i))
            ends.sort(key=lambda t: (t[0][0], float(t[0][1]), t[0][1]))
            stack: list[int] = []
            for _, opening, i in ends:
                if opening:
                    stack.append(i)
                elif not stack or stack.pop() != i:
                    raise ValidationError(f"curve crosses itself inside face {f}")

    # -- basic manipulations --

    @classmethod
    def _respaced(
        cls, surface: CellSurface, events: tuple, oriented: bool
    ) -> "EmbeddedCurve":
        # Fast path for per-edge order-preserving respacings of an already
        # validated curve: the combinatorics cannot change, so skip the
        # constructor's revalidation.  Caller supplies canonical events.
        self = object.__new__(cls)
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "oriented", oriented)
        return self

    def __len__(self) -> int:
        return len(self.events)

    def reverse(self) -> "EmbeddedCurve":
        ev = tuple((e, -d, p) for e, d, p in reversed(self.events))
        return EmbeddedCurve(self.surface, ev, oriented=self.oriented)

    def with_orientation(self, oriented: bool) -> "EmbeddedCurve":
        if oriented == self.oriented:
            return self
        return EmbeddedCurve(self.surface, self.events, oriented=oriented)

    def positions_on_edge(self, edge: str) -> list[Fraction]:
        return sorted(p for e, _, p in self.events if e == edge)

    def renormalized(self) -> "EmbeddedCurve":
        """Move crossing positions to (k+1)/(m+1) by per-edge rank."""
        rank: dict[tuple[str, Fraction], Fraction] = {}
        by_edge: dict[str, list[Fraction]] = {}
        for e, _, p in self.events:
            by_edge.setdefault(e, []).append(p)
        for e, ps in by_edge.items():
            ps.sort(key=lambda p: (float(p), p))
            m = len(ps)
            for k, p in enumerate(ps):
                rank[(e, p)] = Fraction(k + 1, m + 1)
        ev = tuple((e, d, rank[(e, p)]) for e, d, p in self.events)
        return EmbeddedCurve._respaced(self.surface, ev, self.oriented)

    @cached_property
    def canonical_key(self) -> tuple:
        ev = self.renormalized().events
        variants = [ev]
        if not self.oriented:
            variants.append(tuple((e, -d, p) for e, d, p in reversed(ev)))
        best = None
        for var in variants:
            n = len(var)
            for r in range(n):
                rot = var[r:] + var[:r]
                if best is None or rot < best:
                    best = rot
        return best

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddedCurve):
            return NotImplemented
        return (
            self.surface.faces == other.surface.faces
            and self.oriented == other.oriented
            and self.canonical_key == other.canonical_key
        )

    def __hash__(self) -> int:
        return hash((self.surface.faces, self.oriented, self.canonical_key))

    def __repr__(self) -> str:
        ev = ", ".join(f"({e!r},{d:+d},{p})" for e, d, p in self.events)
        tag = "" if self.oriented else ", unoriented"
        return f"EmbeddedCurve([{ev}]{tag})"

    # -- serialization --

    def to_json(self, surface_id: str | None = None) -> dict:
        order: dict[tuple[str, Fraction], int] = {}
        for e in {e for e, _, _ in self.events}:
            for k, p in enumerate(self.positions_on_edge(e)):
                order[(e, p)] = k
        data = {
            "format": 1,
            "itinerary": [[e, order[(e, p)], d] for e, d, p in self.events],
            "oriented": self.oriented,
        }
        if surface_id is not None:
            data["surface"] = surface_id
        return data

    @classmethod
    def from_json(cls, surface: CellSurface, data: Mapping) -> "EmbeddedCurve":
        if not isinstance(data, Mapping) or data.get("format") != 1:
            raise ValidationError("curve JSON must carry format: 1")
        try:
            raw = [(str(e), int(k), int(d)) for e, k, d in data["itinerary"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad itinerary field: {exc}") from exc
        counts: dict[str, int] = {}
        for e, _, _ in raw:
            counts[e] = counts.get(e, 0) + 1
        events = []
        for e, k, d in raw:
            m = counts[e]
            if not 0 <= k < m:
                raise ValidationError(f"crossing index {k} out of range on edge {e!r}")
            events.append((e, d, Fraction(k + 1, m + 1)))
        return cls(surface, tuple(events), oriented=bool(data.get("oriented", True)))


@dataclass(frozen=True)
class Flow:
    """Integer edge weights with zero net flux around every interior vertex.

    Such a weighting pairs with oriented curves (sum of direction times
    weight over the itinerary) and the pairing only depends on the isotopy
    class, so a family of flows computes homology coordinates.
    """

    name: str
    surface: CellSurface
    weights: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(
            self, "weights", {str(e): int(w) for e, w in self.weights.items()}
        )
        surf = self.surface
        for e in self.weights:
            if e not in surf.interior_edges:
                raise ValidationError(f"flow {self.name!r} weights non-interior edge {e!r}")
        # A small ccw circle around an interior vertex crosses head ends
        # left-to-right and tail ends right-to-left.
        for vi, rot in enumerate(surf.rotations):
            if not surf.vertex_is_interior(vi):
                continue
            flux = sum(
                (1 if which == 1 else -1) * self.weights.get(e, 0)
                for e, which in rot
            )
            if flux != 0:
                raise ValidationError(
                    f"flow {self.name!r} has flux {flux} at vertex {vi}"
                )

    def pair(self, curve: EmbeddedCurve) -> int:
        if not curve.oriented:
            raise PreconditionError("homology pairing needs an oriented curve")
        return sum(d * self.weights.get(e, 0) for e, d, _ in curve.events)
