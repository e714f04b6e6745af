"""Exact overlay arrangements of curve systems on a cell surface.

A JointSystem places several embedded curves on one surface in general
position: crossing positions on each edge are jointly renormalised (ties
broken by curve index, a legal isotopy), every face is realised as a
convex polygon with its boundary items at exact rational points of the
parabola t -> (t, t^2), and curve chords become straight segments.  All
intersection arithmetic runs over Fraction, so the combinatorics of the
arrangement is exact.

From the arrangement we build a doubly-connected edge list whose cells
are the complementary pieces inside single faces; cells glue across the
skeleton edges into regions, the connected components of the complement
of the curve system.  Each region knows its Euler characteristic and its
boundary circuits (computed on the abstract cut complex, so no embedding
subtleties), which is enough to recognise discs, annuli, bigons, and to
cut the surface along a curve.

Degenerate triple concurrencies cannot occur for two curves and are
dissolved for larger systems by retrying with perturbed polygon points;
the region structure does not depend on the choice.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Optional, Sequence

from .errors import ComputationError, PreconditionError, ValidationError
from .surface import CellSurface, EmbeddedCurve, UnionFind, _walk_coord

Vec = tuple[Fraction, Fraction]


def _sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def _cross(u: Vec, v: Vec) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _angular_cmp(u: Vec, v: Vec) -> int:
    """Counterclockwise comparison of nonzero direction vectors from angle 0."""
    hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
    hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    if hu != hv:
        return hu - hv
    c = _cross(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


class _Degenerate(Exception):
    """Triple concurrency in one face; rebuild with perturbed points."""


@dataclass(frozen=True)
class Crossing:
    """Transverse crossing of two chords inside one face.

    `sign` is the orientation of the ordered frame (direction of curve i,
    direction of curve j) against the surface orientation, with i < j.
    """

    face: int
    curve_i: int
    gap_i: int
    curve_j: int
    gap_j: int
    sign: int
    node: tuple


@dataclass(frozen=True)
class Region:
    """Connected component of the complement of the curve system."""

    index: int
    cells: frozenset
    chi: int
    circuits: tuple[tuple[int, ...], ...]  # dart ids along each boundary circuit

    @property
    def is_disc(self) -> bool:
        return self.chi == 1

    @property
    def is_annulus(self) -> bool:
        return self.chi == 0 and len(self.circuits) == 2


class JointSystem:
    """Exact arrangement of one or more curves on a common surface."""

    def __init__(self, surface: CellSurface, curves: Sequence[EmbeddedCurve]):
        if not curves:
            raise PreconditionError("need at least one curve")
        for c in curves:
            if c.surface.faces != surface.faces:
                raise PreconditionError("curve lives on a different surface")
        self.surface = surface
        self.curves = tuple(curves)
        for attempt in range(32):
            try:
                self._build(attempt)
                return
            except _Degenerate:
                continue
        raise ComputationError("could not resolve arrangement degeneracies")

    # ------------------------------------------------------------------
    # construction

    def _build(self, attempt: int) -> None:
        surf = self.surface

        # Joint renormalisation: merge all crossing points per edge, sort
        # by (position, curve, event) and respace.  Order, not position,
        # carries the combinatorics.
        edge_points: dict[str, list[tuple[int, int]]] = {}
        for ci, c in enumerate(self.curves):
            for ei, (e, _, p) in enumerate(c.events):
                edge_points.setdefault(e, []).append((p, ci, ei))
        self.edge_order: dict[str, list[tuple[int, int]]] = {}
        self.position: dict[tuple[int, int], Fraction] = {}
        self.edge_rank: dict[tuple[int, int], int] = {}
        for e, pts in edge_points.items():
            # float leads, exact value breaks the (rare) float ties: rounding
            # to nearest is monotone, so the composite order is the exact one
            pts.sort(key=lambda t: (float(t[0]), t[0], t[1], t[2]))
            m = len(pts)
            refs = []
            for k, (_, ci, ei) in enumerate(pts):
                refs.append((ci, ei))
                self.position[(ci, ei)] = Fraction(k + 1, m + 1)
                self.edge_rank[(ci, ei)] = k
            self.edge_order[e] = refs
        self.events: list[list[tuple[str, int, Fraction]]] = [
            [(e, d, self.position[(ci, ei)]) for ei, (e, d, _) in enumerate(c.events)]
            for ci, c in enumerate(self.curves)
        ]

        def t_of(rank: int):
            if attempt == 0:
                return rank  # integer coordinates keep the arithmetic cheap
            wob = (rank * 2654435761 + attempt * 7919) % 997
            return Fraction(rank) + Fraction(wob, 10000)

        # Per-face boundary items: corners and curve points in ccw order.
        # Walking the face slot by slot, taking each slot's points in edge
        # order (reversed when the slot runs the edge backwards), already
        # yields the (entry, walk coordinate) order, so no sort is needed.
        n_faces = len(surf.faces)
        items: list[list[tuple]] = [[] for _ in range(n_faces)]
        for fi, face in enumerate(surf.faces):
            for j, (e, s) in enumerate(face):
                items[fi].append((Fraction(j), Fraction(0), "corner", j))
                along = self.edge_order.get(e, ())
                if s < 0:
                    along = reversed(along)
                for ci, ei in along:  # points on this slot
                    p = self.position[(ci, ei)]
                    items[fi].append(
                        (Fraction(j), _walk_coord(s, p), "point", (ci, ei, s))
                    )

        point_rank: dict[tuple[int, int, int], tuple[int, int]] = {}
        coords: list[list[Vec]] = [[] for _ in range(n_faces)]
        for fi in range(n_faces):
            for r, item in enumerate(items[fi]):
                t = t_of(r)
                coords[fi].append((t, t * t))
                if item[2] == "point":
                    point_rank[item[3]] = (fi, r)

        # Chords: one per curve gap, living in the face both events share.
        chords: list[list[dict]] = [[] for _ in range(n_faces)]
        for ci, evs in enumerate(self.events):
            n = len(evs)
            for g in range(n):
                e1, d1, _ = evs[g]
                e2, d2, _ = evs[(g + 1) % n]
                fi = surf.face_of_slot(e1, -d1)
                ra = point_rank[(ci, g, -d1)][1]
                rb = point_rank[(ci, (g + 1) % n, d2)][1]
                chords[fi].append(
                    {"curve": ci, "gap": g, "ra": ra, "rb": rb, "hits": []}
                )

        # Crossings: straight chords in convex position cross iff their
        # endpoint ranks interleave.  Sweep the cut boundary circle once;
        # when a chord closes, the still-open chords that opened inside it
        # are exactly its interleaving partners (a sorted suffix), so the
        # work is proportional to the crossings found, not all pairs.
        self.crossings: list[Crossing] = []
        node_pt: dict[tuple, Vec] = {}
        cross_of_node: dict[tuple, Crossing] = {}
        for fi in range(n_faces):
            pts = coords[fi]
            ch = chords[fi]
            ends = []
            for x, c in enumerate(ch):
                lo, hi = sorted((c["ra"], c["rb"]))
                ends.append((lo, x))
                ends.append((hi, x))
            ends.sort()
            open_at: dict[int, int] = {}  # chord -> its lo rank
            open_by_lo: list[tuple[int, int]] = []  # sorted (lo, chord)
            pairs: list[tuple[int, int]] = []
            for rank, x in ends:
                if x not in open_at:
                    open_at[x] = rank
                    insort(open_by_lo, (rank, x))
                    continue
                pos = bisect_left(open_by_lo, (open_at[x], x))
                for _, y in open_by_lo[pos + 1:]:
                    if ch[x]["curve"] != ch[y]["curve"]:
                        pairs.append((min(x, y), max(x, y)))
                open_by_lo.pop(pos)
                del open_at[x]
            pairs.sort()
            for x, y in pairs:
                A, B = ch[x], ch[y]
                a1, a2, b1, b2 = A["ra"], A["rb"], B["ra"], B["rb"]
                p, q = pts[a1], pts[a2]
                a, b = pts[b1], pts[b2]
                d1v, d2v = _sub(q, p), _sub(b, a)
                den = _cross(d1v, d2v)
                if den == 0:
                    raise _Degenerate
                w = _sub(a, p)
                if isinstance(den, int):
                    s = Fraction(_cross(w, d2v), den)
                    t = Fraction(_cross(w, d1v), den)
                else:
                    s = _cross(w, d2v) / den
                    t = _cross(w, d1v) / den
                if not (0 < s < 1 and 0 < t < 1):
                    raise ComputationError("interleaved chords failed to cross")
                node = ("x", fi, len(self.crossings))
                pt = (p[0] + s * d1v[0], p[1] + s * d1v[1])
                ij = A if A["curve"] < B["curve"] else B
                ji = B if A["curve"] < B["curve"] else A
                di = _sub(pts[ij["rb"]], pts[ij["ra"]])
                dj = _sub(pts[ji["rb"]], pts[ji["ra"]])
                cr = _cross(di, dj)
                xg = Crossing(
                    face=fi,
                    curve_i=ij["curve"],
                    gap_i=ij["gap"],
                    curve_j=ji["curve"],
                    gap_j=ji["gap"],
                    sign=(1 if cr > 0 else -1) * surf.chirality,
                    node=node,
                )
                self.crossings.append(xg)
                node_pt[node] = pt
                cross_of_node[node] = xg
                A["hits"].append((s, node))
                B["hits"].append((t, node))
            for c in ch:
                c["hits"].sort(key=lambda h: (float(h[0]), h[0]))
                lams = [h[0] for h in c["hits"]]
                if len(set(lams)) != len(lams):
                    raise _Degenerate

        # ---- darts ----
        # Boundary nodes ("b", face, rank); crossing nodes as above.
        darts: list[dict] = []
        twin: list[int] = []

        def new_dart(frm, to, kind, label, gfrm, gto) -> int:
            darts.append(
                {"frm": frm, "to": to, "kind": kind, "label": label,
                 "gfrm": gfrm, "gto": gto}
            )
            return len(darts) - 1

        # boundary segment darts, and the edge-interval key for gluing
        fwd_seg: dict[tuple[int, int], int] = {}
        bwd_seg: dict[tuple[int, int], int] = {}
        glue_key_of: dict[int, tuple] = {}
        for fi in range(n_faces):
            M = len(items[fi])
            for r in range(M):
                r2 = (r + 1) % M
                na, nb = ("b", fi, r), ("b", fi, r2)
                f_id = new_dart(na, nb, "B", None, coords[fi][r], coords[fi][r2])
                b_id = new_dart(nb, na, "B", None, coords[fi][r2], coords[fi][r])
                fwd_seg[(fi, r)] = f_id
                bwd_seg[(fi, r)] = b_id
                twin.extend([0, 0])
                twin[f_id], twin[b_id] = b_id, f_id
                # entry of this segment and its interval on the edge
                item = items[fi][r]
                j = int(item[0])
                e, s = surf.faces[fi][j]
                c_lo = item[1]
                if r2 == r or items[fi][r2][0] != item[0]:
                    c_hi = Fraction(1)  # runs to the entry's far corner
                else:
                    c_hi = items[fi][r2][1]
                if s > 0:
                    lo, hi = c_lo, c_hi
                else:
                    lo, hi = 1 - c_hi, 1 - c_lo
                darts[f_id]["label"] = ("B", e, s, lo, hi, True)
                darts[b_id]["label"] = ("B", e, s, lo, hi, False)
                # glue identity as an integer gap index: the number of edge
                # points strictly below the interval in the edge frame
                m_e = len(self.edge_order.get(e, ()))
                if item[2] == "corner":
                    gap = 0 if s > 0 else m_e
                else:
                    q = self.edge_rank[item[3][:2]]
                    gap = q + 1 if s > 0 else q
                glue_key_of[f_id] = (e, gap)

        # chord segment darts
        chord_darts: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for fi in range(n_faces):
            for c in chords[fi]:
                ci, g = c["curve"], c["gap"]
                stops: list[tuple] = [("b", fi, c["ra"])]
                stops += [h[1] for h in c["hits"]]
                stops.append(("b", fi, c["rb"]))
                pts_stop = [coords[fi][c["ra"]]]
                pts_stop += [node_pt[h[1]] for h in c["hits"]]
                pts_stop.append(coords[fi][c["rb"]])
                segs = []
                for k in range(len(stops) - 1):
                    f_id = new_dart(stops[k], stops[k + 1], "C",
                                    ("C", ci, g, k, True),
                                    pts_stop[k], pts_stop[k + 1])
                    b_id = new_dart(stops[k + 1], stops[k], "C",
                                    ("C", ci, g, k, False),
                                    pts_stop[k + 1], pts_stop[k])
                    twin.extend([0, 0])
                    twin[f_id], twin[b_id] = b_id, f_id
                    segs.append((f_id, b_id))
                chord_darts[(ci, g)] = segs

        # ---- rotation at each node (ccw order of outgoing darts) ----
        sigma: dict[tuple, list[int]] = {}
        for fi in range(n_faces):
            M = len(items[fi])
            for r in range(M):
                node = ("b", fi, r)
                f_next = fwd_seg[(fi, r)]
                b_prev = bwd_seg[(fi, (r - 1) % M)]
                item = items[fi][r]
                if item[2] == "corner":
                    sigma[node] = [f_next, b_prev]
                else:
                    ci, ei, s = item[3]
                    # chord end here: exit end of gap ei or entry end of
                    # gap ei-1, by which slot side the point occupies
                    e, d, _ = self.events[ci][ei]
                    if s == -d:  # exit point: chord of gap ei starts here
                        out = chord_darts[(ci, ei)][0][0]
                    else:  # entry point: chord of gap ei-1 ends here
                        n_ev = len(self.events[ci])
                        out = chord_darts[(ci, (ei - 1) % n_ev)][-1][1]
                    sigma[node] = [f_next, out, b_prev]
        by_node: dict[tuple, list[int]] = {}
        for did, d in enumerate(darts):
            if d["frm"][0] == "x":
                by_node.setdefault(d["frm"], []).append(did)
        for node, outs in by_node.items():
            if len(outs) != 4:
                raise ComputationError("crossing node without four darts")
            dirs = {d: _sub(darts[d]["gto"], darts[d]["gfrm"]) for d in outs}
            outs.sort(key=cmp_to_key(lambda a, b: _angular_cmp(dirs[a], dirs[b])))
            sigma[node] = outs

        # ---- cells: orbits of phi(d) = sigma-predecessor of twin(d) ----
        phi: list[int] = [0] * len(darts)
        for did in range(len(darts)):
            tw = twin[did]
            rot = sigma[darts[tw]["frm"]]
            phi[did] = rot[(rot.index(tw) - 1) % len(rot)]

        cell_of: dict[int, int] = {}
        cells: list[list[int]] = []
        exterior: set[int] = set()
        for fi in range(n_faces):
            M = len(items[fi])
            orbit = set()
            d0 = bwd_seg[(fi, 0)]
            d = d0
            while d not in orbit:
                orbit.add(d)
                d = phi[d]
            expected = {bwd_seg[(fi, r)] for r in range(M)}
            if orbit != expected:
                raise ComputationError("exterior walk left the face boundary")
            exterior |= orbit
        for did in range(len(darts)):
            if did in cell_of or did in exterior:
                continue
            cycle = []
            d = did
            while d not in cell_of:
                cell_of[d] = len(cells)
                cycle.append(d)
                d = phi[d]
            if d != did:
                raise ComputationError("broken face orbit")
            cells.append(cycle)

        # ---- glue cells across interior-edge intervals into regions ----
        partner: dict[int, int] = {}
        by_key: dict[tuple, list[int]] = {}
        for f_id, key in glue_key_of.items():
            if key[0] in surf.interior_edges:
                by_key.setdefault(key, []).append(f_id)
        for key, pair in by_key.items():
            if len(pair) != 2:
                raise ComputationError(f"unmatched edge interval {key}")
            a, b = pair
            partner[a] = b
            partner[b] = a

        ruf = UnionFind()
        for idx in range(len(cells)):
            ruf.find(idx)
        for a, b in partner.items():
            ruf.union(cell_of[a], cell_of[b])

        # ---- region topology on the abstract cut complex ----
        pos_in_cell: dict[int, tuple[int, int]] = {}
        for cidx, cyc in enumerate(cells):
            for k, did in enumerate(cyc):
                pos_in_cell[did] = (cidx, k)

        def head_corner(did: int) -> tuple[int, int]:
            cidx, k = pos_in_cell[did]
            return (cidx, k)

        def tail_corner(did: int) -> tuple[int, int]:
            cidx, k = pos_in_cell[did]
            return (cidx, (k - 1) % len(cells[cidx]))

        groups: dict[int, list[int]] = {}
        for cidx in range(len(cells)):
            groups.setdefault(ruf.find(cidx), []).append(cidx)

        regions: list[Region] = []
        self.region_of_cell: dict[int, int] = {}
        for root in sorted(groups):
            cell_idxs = sorted(groups[root])
            ridx = len(regions)
            for cidx in cell_idxs:
                self.region_of_cell[cidx] = ridx
            cuf = UnionFind()
            region_darts = [d for cidx in cell_idxs for d in cells[cidx]]
            for did in region_darts:
                cuf.find(head_corner(did))
                cuf.find(tail_corner(did))
            glued_pairs = 0
            unglued: list[int] = []
            for did in region_darts:
                if did in partner:
                    other = partner[did]
                    if did < other:
                        glued_pairs += 1
                        cuf.union(head_corner(did), tail_corner(other))
                        cuf.union(tail_corner(did), head_corner(other))
                else:
                    unglued.append(did)
            V = len(cuf.groups())
            E = glued_pairs + len(unglued)
            F = len(cell_idxs)
            chi = V - E + F

            # boundary circuits: at each boundary corner class exactly one
            # unglued dart departs
            out_at: dict = {}
            for did in unglued:
                key = cuf.find(tail_corner(did))
                if key in out_at:
                    raise ComputationError("boundary corner with two outgoing darts")
                out_at[key] = did
            circuits = []
            seen: set[int] = set()
            for did in sorted(unglued):
                if did in seen:
                    continue
                circuit = []
                d = did
                while d not in seen:
                    seen.add(d)
                    circuit.append(d)
                    d = out_at[cuf.find(head_corner(d))]
                if d != did:
                    raise ComputationError("boundary walk did not close")
                circuits.append(tuple(circuit))
            regions.append(
                Region(index=ridx, cells=frozenset(cell_idxs), chi=chi,
                       circuits=tuple(circuits))
            )

        self.regions = tuple(regions)
        self._darts = darts
        self._twin = twin
        self._phi = phi
        self._sigma = sigma
        self._cells = cells
        self._cell_of = cell_of
        self._partner = partner
        self._chord_darts = chord_darts
        self._point_rank = point_rank
        self._items = items
        self._cross_of_node = cross_of_node

    # ------------------------------------------------------------------
    # queries

    def dart_label(self, did: int) -> tuple:
        return self._darts[did]["label"]

    def crossings_between(self, i: int, j: int) -> list[Crossing]:
        i, j = min(i, j), max(i, j)
        return [c for c in self.crossings if (c.curve_i, c.curve_j) == (i, j)]

    def renormalized_curve(self, i: int) -> EmbeddedCurve:
        """Curve i with its events respaced to the joint coordinate frame."""
        return EmbeddedCurve._respaced(
            self.surface, tuple(self.events[i]), self.curves[i].oriented
        )

    def crossing_count(self, i: int, j: int) -> int:
        return len(self.crossings_between(i, j))

    def crossing_order_along(self, ci: int) -> list[Crossing]:
        """All crossings met by curve ci, in traversal order (cyclically)."""
        out = []
        for g in range(len(self.events[ci])):
            # interior stops of the gap's chord are crossing nodes, in order
            for f_id, _ in self._chord_darts[(ci, g)][1:]:
                out.append(self._cross_of_node[self._darts[f_id]["frm"]])
        return out

    def circuit_curve_runs(self, circuit: tuple[int, ...]) -> list[tuple]:
        """Maximal blocks of consecutive chord darts of one curve.

        Returns [(curve, [dart ids]), ...] in circuit order; surface
        boundary darts appear as (None, [dart ids]) blocks.
        """
        blocks: list[tuple] = []
        for did in circuit:
            lab = self._darts[did]["label"]
            key = lab[1] if lab[0] == "C" else None
            if blocks and blocks[-1][0] == key:
                blocks[-1][1].append(did)
            else:
                blocks.append((key, [did]))
        if len(blocks) > 1 and blocks[0][0] == blocks[-1][0]:
            last = blocks.pop()
            blocks[0] = (blocks[0][0], last[1] + blocks[0][1])
        return blocks

    def find_bigons(self, i: int, j: int) -> list[Region]:
        """Innermost discs bounded by one run of curve i and one of curve j."""
        out = []
        for reg in self.regions:
            if not reg.is_disc or len(reg.circuits) != 1:
                continue
            runs = self.circuit_curve_runs(reg.circuits[0])
            if len(runs) != 2:
                continue
            curves = {runs[0][0], runs[1][0]}
            if curves == {i, j}:
                out.append(reg)
        return out

    # ------------------------------------------------------------------
    # bigon removal

    def _run_events(self, labels, curve: int, n: int, fwd: bool) -> list[int]:
        """Event indices a chord-dart run passes, in run order.

        Consecutive darts either step across a crossing on one chord
        (adjacent segments, no event) or hop to the neighbouring chord
        through the curve's crossing point on the skeleton; the hop is
        recognised by segment indices, which keeps single-event curves
        (whose only chord wraps onto itself) honest.
        """
        out: list[int] = []
        for l1, l2 in zip(labels, labels[1:]):
            g1, k1 = l1[2], l1[3]
            g2, k2 = l2[2], l2[3]
            if fwd:
                if (g2, k2) == (g1, k1 + 1):
                    continue
                last = len(self._chord_darts[(curve, g1)]) - 1
                if g2 == (g1 + 1) % n and k2 == 0 and k1 == last:
                    out.append(g2)
                    continue
            else:
                if (g2, k2) == (g1, k1 - 1):
                    continue
                last = len(self._chord_darts[(curve, g2)]) - 1
                if g2 == (g1 - 1) % n and k1 == 0 and k2 == last:
                    out.append(g1)
                    continue
            raise ComputationError("run of darts is not a curve arc")
        return out

    def _bigon_splice(self, region: Region, move: int):
        """Splice data for pushing curve `move`'s side of a bigon across.

        Returns (g_enter, m, new_events, a_used): the moved curve keeps
        its event at gap g_enter, drops the next m events and runs
        new_events in their place; a_used names the stationary curve's
        events the replacement strand shadows.
        """
        if not region.is_disc or len(region.circuits) != 1:
            raise PreconditionError("region is not a bigon")
        runs = self.circuit_curve_runs(region.circuits[0])
        if len(runs) != 2 or None in {runs[0][0], runs[1][0]}:
            raise PreconditionError("region is not a bigon")
        (ca, darts_a), (cb, darts_b) = runs
        if cb != move:
            (ca, darts_a), (cb, darts_b) = (cb, darts_b), (ca, darts_a)
        if cb != move or ca == cb:
            raise PreconditionError(f"bigon does not involve curve {move}")

        labels_a = [self._darts[d]["label"] for d in darts_a]
        labels_b = [self._darts[d]["label"] for d in darts_b]
        a_fwd = labels_a[0][4]
        b_fwd = labels_b[0][4]
        if any(l[4] != a_fwd for l in labels_a) or any(l[4] != b_fwd for l in labels_b):
            raise ComputationError("bigon run changes direction")

        na = len(self.curves[ca].events)
        nb = len(self.curves[cb].events)
        a_inside = self._run_events(labels_a, ca, na, a_fwd)
        b_inside = self._run_events(labels_b, cb, nb, b_fwd)

        # In curve cb's own direction the run enters on this gap:
        g_enter = labels_b[0][2] if b_fwd else labels_b[-1][2]
        inside_own = b_inside if b_fwd else list(reversed(b_inside))

        # Replacement path walks curve ca's run from cb's entry crossing to
        # its exit crossing; that traversal runs against circuit order iff
        # cb's run is in circuit order.
        walk = list(reversed(a_inside)) if b_fwd else list(a_inside)
        along_a = (not a_fwd) if b_fwd else a_fwd
        # The bigon sits on ca's left iff its run is forward; the rerouted
        # strand is pushed across ca to the far side.
        offset_sign = -1 if a_fwd else 1

        joint_a = self.events[ca]
        new_events: list[tuple[str, int, Fraction]] = []
        for ev_idx in walk:
            e, d_a, p = joint_a[ev_idx]
            d_new = d_a if along_a else -d_a
            direction = offset_sign * d_a
            order = self.edge_order[e]
            k = self.edge_rank[(ca, ev_idx)]
            if direction > 0:
                nb_pos = (
                    self.position[order[k + 1]] if k + 1 < len(order) else Fraction(1)
                )
            else:
                nb_pos = self.position[order[k - 1]] if k > 0 else Fraction(0)
            new_events.append((e, d_new, p + (nb_pos - p) * Fraction(1, 3)))

        a_used = frozenset((ca, ev) for ev in a_inside)
        return g_enter, len(inside_own), new_events, a_used

    def reroute_through_bigons(
        self, regions: Sequence[Region], move: int
    ) -> tuple[EmbeddedCurve, int]:
        """Push curve `move` across several independent bigons at once.

        Bigons whose support overlaps one already taken are skipped, so
        the splices never interfere.  Returns (curve, taken); each taken
        bigon drops the raw crossing count by exactly two.
        """
        nb = len(self.curves[move].events)
        splices: list[tuple[int, int, list]] = []
        used_b: set[int] = set()
        used_a: set = set()
        for region in regions:
            g, m, new_events, a_used = self._bigon_splice(region, move)
            if m >= nb:
                # Run wraps the whole curve: every old event is replaced.
                if splices:
                    continue
                if not new_events:
                    raise ComputationError("bigon removal would erase the curve")
                whole = EmbeddedCurve(
                    self.surface, tuple(new_events),
                    oriented=self.curves[move].oriented,
                )
                return whole, 1
            block = {(g + t) % nb for t in range(m + 1)}
            if block & used_b or a_used & used_a:
                continue
            splices.append((g, m, new_events))
            used_b |= block
            used_a |= a_used

        joint_b = self.events[move]
        skip = {g: (m, evs) for g, m, evs in splices}
        out: list[tuple[str, int, Fraction]] = []
        t = splices[0][0]
        steps = 0
        while steps < nb:
            idx = t % nb
            out.append(joint_b[idx])
            if idx in skip:
                m, evs = skip[idx]
                out.extend(evs)
                t += m + 1
                steps += m + 1
            else:
                t += 1
                steps += 1
        curve = EmbeddedCurve(
            self.surface, tuple(out), oriented=self.curves[move].oriented
        )
        return curve, len(splices)


# ----------------------------------------------------------------------
# minimal position


def minimal_position(
    a: EmbeddedCurve, b: EmbeddedCurve
) -> tuple[EmbeddedCurve, EmbeddedCurve, JointSystem]:
    """Isotope b until no bigon with a remains; a is never rerouted.

    Returns (a', b', system) where the system holds the final arrangement.
    a' differs from a only by sliding points along their edges: rerouting
    works in the joint coordinate frame, so once b moves, a must be respaced
    to that frame as well or the new points land on the wrong side of it.
    A pair with all crossings of equal sign is already minimal, so the
    common case returns after one arrangement build.
    """
    if a.surface.faces != b.surface.faces:
        raise PreconditionError("curves live on different surfaces")
    expect = None
    while True:
        system = JointSystem(a.surface, (a, b))
        k = system.crossing_count(0, 1)
        if expect is not None and k != expect:
            raise ComputationError(f"bigon removal changed crossings to {k}")
        if k == 0:
            return a, b, system
        signs = {c.sign for c in system.crossings_between(0, 1)}
        if len(signs) == 1:
            return a, b, system
        bigons = system.find_bigons(0, 1)
        if not bigons:
            return a, b, system
        a = system.renormalized_curve(0)
        try:
            b, removed = system.reroute_through_bigons(bigons, move=1)
        except ValidationError:
            # Independence filtering is conservative, not airtight; one
            # bigon at a time always assembles.
            b, removed = system.reroute_through_bigons(bigons[:1], move=1)
        expect = k - 2 * removed


def geometric_intersection_number(a: EmbeddedCurve, b: EmbeddedCurve) -> int:
    return minimal_position(a, b)[2].crossing_count(0, 1)


# ----------------------------------------------------------------------
# region-based predicates (single curve)


def _full_copy_circuit(system: JointSystem, circuit, curve: int) -> bool:
    """Circuit consisting of one full traversal of `curve`, no other darts."""
    labels = [system.dart_label(d) for d in circuit]
    if any(l[0] != "C" or l[1] != curve for l in labels):
        return False
    return len(labels) == len(system.curves[curve].events)


def is_null_homotopic(c: EmbeddedCurve) -> bool:
    system = JointSystem(c.surface, (c,))
    for reg in system.regions:
        if reg.is_disc and len(reg.circuits) == 1:
            if _full_copy_circuit(system, reg.circuits[0], 0):
                return True
    return False


def is_boundary_parallel(c: EmbeddedCurve) -> bool:
    system = JointSystem(c.surface, (c,))
    for reg in system.regions:
        if not reg.is_annulus:
            continue
        sides = []
        for circuit in reg.circuits:
            labels = [system.dart_label(d) for d in circuit]
            kinds = {l[0] for l in labels}
            if kinds == {"C"} and _full_copy_circuit(system, circuit, 0):
                sides.append("curve")
            elif kinds == {"B"}:
                sides.append("boundary")
            else:
                sides.append("mixed")
        if sorted(sides) == ["boundary", "curve"]:
            return True
    return False


def is_separating(c: EmbeddedCurve) -> bool:
    return len(JointSystem(c.surface, (c,)).regions) == 2


def curves_isotopic(a: EmbeddedCurve, b: EmbeddedCurve) -> bool:
    """Free (ambient) isotopy; orientation must match if both are oriented."""
    if a.surface.faces != b.surface.faces:
        return False
    oriented = a.oriented and b.oriented
    if a.with_orientation(oriented) == b.with_orientation(oriented):
        return True
    a2, b2, system = minimal_position(a, b)
    if system.crossing_count(0, 1) != 0:
        return False
    for reg in system.regions:
        if not reg.is_annulus:
            continue
        found_a = found_b = None
        for circuit in reg.circuits:
            if _full_copy_circuit(system, circuit, 0):
                found_a = circuit
            elif _full_copy_circuit(system, circuit, 1):
                found_b = circuit
        if found_a is None or found_b is None:
            continue
        if not oriented:
            return True
        # With the region kept on the left, parallel same-oriented curves
        # are walked in opposite senses (one forward, one backward).
        sense_a = system.dart_label(found_a[0])[4]
        sense_b = system.dart_label(found_b[0])[4]
        return sense_a != sense_b
    return False


# ----------------------------------------------------------------------
# connector construction


def _two_disjoint_cell_paths(adj, sources, sinks):
    """Two cell-disjoint paths joining {s1, s2} to {t1, t2}, either pairing.

    Unit vertex capacities via node splitting; two augmenting rounds find
    the pair exactly when it exists (Menger). Each returned path is
    [(cell, None), (cell, dart), ...] with the dart on the previous cell's
    side of the glued interval; the first path starts at s1.
    """
    s1, s2 = sources
    res: dict = {}
    orig: set = set()

    def arc(u, v):
        res.setdefault(u, {})
        if res[u].get(v, 0) == 0:
            res[u][v] = 1
        res.setdefault(v, {}).setdefault(u, 0)
        orig.add((u, v))

    pair_dart = {}
    for u in sorted(adj):
        arc(("in", u), ("out", u))
        for v, d in adj[u]:
            if (u, v) not in pair_dart:
                pair_dart[(u, v)] = d
            arc(("out", u), ("in", v))
    for s in sources:
        arc("S", ("in", s))
    for t in sinks:
        arc(("out", t), "T")

    def augment():
        prev = {"S": None}
        queue = deque(["S"])
        while queue:
            u = queue.popleft()
            for v in sorted(res.get(u, {}), key=repr):
                if v not in prev and res[u][v] > 0:
                    prev[v] = u
                    if v == "T":
                        queue.clear()
                        break
                    queue.append(v)
        if "T" not in prev:
            return False
        v = "T"
        while prev[v] is not None:
            u = prev[v]
            res[u][v] -= 1
            res[v][u] = res[v].get(u, 0) + 1
            v = u
        return True

    if not (augment() and augment()):
        return None

    def flow(u, v):
        return res[v].get(u, 0) if (u, v) in orig else 0

    def walk(start):
        path = [(start, None)]
        node = ("out", start)
        while True:
            nxt = next(v for v in sorted(res.get(node, {}), key=repr)
                       if flow(node, v) > 0)
            res[nxt][node] -= 1
            if nxt == "T":
                return path
            cell = nxt[1]
            path.append((cell, pair_dart[(node[1], cell)]))
            node = ("out", cell)

    return walk(s1), walk(s2)


def connecting_curve(system: JointSystem, i: int, j: Optional[int] = None,
                     max_candidates: Optional[int] = None) -> Optional[EmbeddedCurve]:
    """Embedded loop crossing system curves i and j once each, others never.

    Such a loop meets the complement of the system in two arcs, each inside
    a single region, pinned at one crossing with curve i and one with
    curve j. Candidates pair a chord segment of i with one of j whose
    flanking regions agree; the two arcs are then routed cell by cell
    through glued edge intervals, and the loop is read off as one event
    per interval crossed. Cells are convex, each hosts at most one piece
    of the loop, and the arcs never touch a chord, so the crossing counts
    are exactly 1, 1, and 0 by construction; a final check guards the
    bookkeeping. Returns None when no candidate pairing routes.

    With j omitted the loop is pinned at a single crossing with curve i
    and meets the complement in one arc joining the two sides.
    """
    darts = system._darts
    partner = system._partner
    cell_of = system._cell_of
    region_of = system.region_of_cell

    adj: dict[int, list[tuple[int, int]]] = {c: [] for c in range(len(system._cells))}
    for f_id in sorted(partner):
        adj[cell_of[f_id]].append((cell_of[partner[f_id]], f_id))
    for u in adj:
        adj[u].sort(key=lambda t: (t[0], darts[t[1]]["label"][1:]))

    def flanks(ci):
        out = []
        for g in range(len(system.events[ci])):
            for f_id, b_id in system._chord_darts[(ci, g)]:
                out.append((cell_of[f_id], cell_of[b_id]))
        return out

    def bfs(start, goal):
        prev = {start: (None, None)}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            if u == goal:
                path = []
                while u is not None:
                    pu, d = prev[u]
                    path.append((u, d))
                    u = pu
                path.reverse()
                return path
            for v, d in adj[u]:
                if v not in prev:
                    prev[v] = (u, d)
                    queue.append(v)
        return None

    def event_of(f_id):
        _, e, s, lo, hi, _ = darts[partner[f_id]]["label"]
        return (e, -s, (lo + hi) / 2)

    def reversed_path(path):
        out = [(path[-1][0], None)]
        for k in range(len(path) - 1, 0, -1):
            out.append((path[k - 1][0], partner[path[k][1]]))
        return out

    def synthesize(*strands):
        evs = [event_of(d) for strand in strands for _, d in strand[1:]]
        try:
            c = EmbeddedCurve(system.surface, tuple(evs), oriented=False)
        except ValidationError:
            return None
        for m, cm in enumerate(system.curves):
            if geometric_intersection_number(c, cm) != (1 if m in (i, j) else 0):
                return None
        return c.renormalized()

    tried = 0
    if j is None:
        for af, ab in flanks(i):
            if af == ab or region_of[af] != region_of[ab]:
                continue
            tried += 1
            if max_candidates is not None and tried > max_candidates:
                return None
            path = bfs(af, ab)
            if path is None:
                continue
            c = synthesize(path)
            if c is not None:
                return c
        return None

    for af, ab in flanks(i):
        if af == ab:
            continue
        for bf, bb in flanks(j):
            if len({af, ab, bf, bb}) != 4:
                continue
            ra = {region_of[af], region_of[ab]}
            if ra != {region_of[bf], region_of[bb]}:
                continue
            tried += 1
            if max_candidates is not None and tried > max_candidates:
                return None
            if len(ra) == 2:
                bx, by = (bf, bb) if region_of[bf] == region_of[af] else (bb, bf)
                p1 = bfs(af, bx)
                p2 = bfs(by, ab)
                if p1 is None or p2 is None:
                    continue
                c = synthesize(p1, p2)
            else:
                pair = _two_disjoint_cell_paths(adj, (af, ab), (bf, bb))
                if pair is None:
                    continue
                c = synthesize(pair[0], reversed_path(pair[1]))
            if c is not None:
                return c
    return None


# ----------------------------------------------------------------------
# cutting


@dataclass(frozen=True)
class CutPiece:
    surface: CellSurface
    # new boundary edge -> ("cut", "left"/"right") or ("boundary", old edge)
    boundary_labels: dict
    # (old edge, interval index) -> (new edge name, +1 if the new edge runs
    # up the old positions, -1 if down); intervals count gaps between the
    # cut curve's points, 0 .. m along each old edge
    interval_edges: dict


@dataclass(frozen=True)
class CutResult:
    pieces: tuple[CutPiece, ...]
    piece_of_region: dict
    transferred: tuple  # (piece index, EmbeddedCurve) per carried curve


def cut_along_curve(
    c: EmbeddedCurve, carry: Sequence[EmbeddedCurve] = ()
) -> CutResult:
    """Cut the surface along c; carried curves must be disjoint from c.

    Every piece must be hyperbolic-type (negative Euler characteristic).
    Carried curves reappear on the piece containing them, crossing the new
    edges at rescaled positions.
    """
    surf = c.surface
    system = JointSystem(surf, (c,))
    for reg in system.regions:
        if reg.chi >= 0:
            raise PreconditionError(
                f"cutting would create a piece with Euler characteristic {reg.chi}"
            )

    # interval index of a position among the cut curve's points on an edge
    cut_positions: dict[str, list[Fraction]] = {}
    for e, _, p in c.events:
        cut_positions.setdefault(e, []).append(p)
    for ps in cut_positions.values():
        ps.sort()

    def interval_index(e: str, p: Fraction) -> int:
        ps = cut_positions.get(e, ())
        k = 0
        for q in ps:
            if p > q:
                k += 1
            elif p == q:
                raise PreconditionError("carried curve touches the cut curve")
        return k

    # joint interval index of a glued boundary dart, from joint coordinates
    def joint_interval(did: int) -> tuple[str, int]:
        lab = system.dart_label(did)
        e, hi = lab[1], lab[4]
        order = system.edge_order.get(e, [])
        k = sum(1 for ref in order if system.position[ref] < hi)
        return e, k  # intervals count gaps between cut points, 0..m

    pieces: list[CutPiece] = []
    piece_of_region: dict[int, int] = {}
    for reg in system.regions:
        piece_of_region[reg.index] = len(pieces)
        glued_name: dict[int, tuple[str, int]] = {}
        interval_edges: dict[tuple[str, int], tuple[str, int]] = {}
        boundary_labels: dict[str, tuple] = {}
        faces: list[tuple[tuple[str, int], ...]] = []
        for cidx in sorted(reg.cells):
            word: list[tuple[str, int]] = []
            for did in system._cells[cidx]:
                if did in system._partner:
                    if did in glued_name:
                        name, sgn = glued_name[did]
                    else:
                        name = f"g{len(interval_edges)}"
                        sgn = 1
                        glued_name[system._partner[did]] = (name, -1)
                        glued_name[did] = (name, 1)
                        e, k = joint_interval(did)
                        lab = system.dart_label(did)
                        # +1 side forward darts ascend the old edge
                        ascends = 1 if lab[2] > 0 else -1
                        interval_edges[(e, k)] = (name, ascends)
                    word.append((name, sgn))
                else:
                    lab = system.dart_label(did)
                    name = f"u{did}"
                    if lab[0] == "C":
                        side = "left" if lab[4] else "right"
                        boundary_labels[name] = ("cut", side)
                    else:
                        boundary_labels[name] = ("boundary", lab[1])
                    word.append((name, 1))
            faces.append(tuple(word))
        piece = CellSurface(tuple(faces), chirality=surf.chirality)
        if piece.euler_characteristic != reg.chi:
            raise ComputationError("piece does not match its region")
        pieces.append(CutPiece(piece, boundary_labels, interval_edges))

    transferred = []
    for k in carry:
        if JointSystem(surf, (c, k)).crossing_count(0, 1) != 0:
            raise PreconditionError("carried curve is not disjoint from the cut curve")
        home: set[int] = set()
        new_events = []
        for e, d, p in k.events:
            idx = interval_index(e, p)
            ps = cut_positions.get(e, [])
            lo = ps[idx - 1] if idx > 0 else Fraction(0)
            hi = ps[idx] if idx < len(ps) else Fraction(1)
            owner = None
            for ridx, piece in enumerate(pieces):
                if (e, idx) in piece.interval_edges:
                    owner = ridx
                    name, ascends = piece.interval_edges[(e, idx)]
                    break
            if owner is None:
                raise ComputationError(f"no piece owns interval ({e}, {idx})")
            home.add(owner)
            if ascends > 0:
                new_events.append((name, d, (p - lo) / (hi - lo)))
            else:
                new_events.append((name, -d, (hi - p) / (hi - lo)))
        if len(home) != 1:
            raise ComputationError("carried curve straddles several pieces")
        pi = home.pop()
        transferred.append(
            (pi, EmbeddedCurve(pieces[pi].surface, tuple(new_events),
                               oriented=k.oriented))
        )
    return CutResult(tuple(pieces), piece_of_region, tuple(transferred))
