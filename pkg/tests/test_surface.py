"""Cell-surface and embedded-curve model tests.

Fixtures are small cell structures whose vertex counts, rotations, Euler
characteristics and boundary circuits were worked out by hand.
"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dehnkit.errors import PreconditionError, ValidationError
from dehnkit.surface import CellSurface, EmbeddedCurve, Flow

F = Fraction

SQUARE_TORUS = ((("h", 1), ("v", 1), ("h", -1), ("v", -1)),)
PENTAGON_TORUS = ((("h", 1), ("v", 1), ("h", -1), ("v", -1), ("bdy", 1)),)
FOUR_HOLED = (
    (("p", 1), ("d1", 1), ("p", -1), ("q", 1), ("d2", 1), ("q", -1), ("w", 1)),
    (("p2", 1), ("d3", 1), ("p2", -1), ("q2", 1), ("d4", 1), ("q2", -1), ("w", -1)),
)
GENUS2 = (
    (("b0", 1), ("c1", 1), ("b1", 1), ("c1", -1), ("c2", 1), ("b2", 1), ("c2", -1)),
    (("b0", -1), ("c1p", 1), ("b1", -1), ("c1p", -1), ("c2p", 1), ("b2", -1), ("c2p", -1)),
)


def torus():
    return CellSurface(SQUARE_TORUS)


class TestCellSurface:
    def test_square_torus_invariants(self):
        s = torus()
        assert s.euler_characteristic == 0
        assert s.genus == 1
        assert s.num_boundary == 0
        assert s.is_closed
        assert s.norm == 0
        assert len(s.rotations) == 1
        assert s.interior_edges == {"h", "v"}
        # single interior vertex, rotation is a 4-cycle
        rot = s.rotations[0]
        assert len(rot) == 4
        assert s.ccw_next[("v", 0)] == ("h", 1)
        assert s.ccw_next[("h", 1)] == ("v", 1)
        assert s.ccw_next[("v", 1)] == ("h", 0)
        assert s.ccw_next[("h", 0)] == ("v", 0)

    def test_monogon_disc(self):
        s = CellSurface(((("e", 1),),))
        assert s.euler_characteristic == 1
        assert (s.genus, s.num_boundary) == (0, 1)
        assert s.boundary_circuits == ((("e", 1),),)
        assert not s.is_closed

    def test_sphere_two_monogons(self):
        s = CellSurface(((("e", 1),), (("e", -1),)))
        assert s.euler_characteristic == 2
        assert (s.genus, s.num_boundary) == (0, 0)

    def test_sphere_one_folded_face(self):
        s = CellSurface(((("a", 1), ("a", -1)),))
        assert s.euler_characteristic == 2
        assert len(s.rotations) == 2

    def test_one_holed_torus(self):
        s = CellSurface(PENTAGON_TORUS)
        assert s.euler_characteristic == -1
        assert (s.genus, s.num_boundary) == (1, 1)
        assert s.norm == 1
        assert len(s.rotations) == 1
        # boundary vertex: source-to-sink path through all six ends
        rot = s.rotations[0]
        assert rot == (("bdy", 0), ("v", 0), ("h", 1), ("v", 1), ("h", 0), ("bdy", 1))
        assert not s.vertex_is_interior(0)
        assert s.boundary_circuits == ((("bdy", 1),),)

    def test_four_holed_sphere(self):
        s = CellSurface(FOUR_HOLED)
        assert s.euler_characteristic == -2
        assert (s.genus, s.num_boundary) == (0, 4)
        assert s.norm == 1
        assert len(s.rotations) == 5
        assert len(s.boundary_circuits) == 4
        mid = s.vertex_at(("w", 0))
        assert s.vertex_is_interior(mid)
        assert len(s.rotations[mid]) == 6
        assert s.ccw_next[("w", 0)] == ("q", 0)
        assert s.ccw_next[("p", 0)] == ("w", 1)
        assert s.ccw_next[("w", 1)] == ("q2", 0)

    def test_genus2(self):
        s = CellSurface(GENUS2)
        assert s.euler_characteristic == -2
        assert (s.genus, s.num_boundary) == (2, 0)
        assert s.norm == 3
        assert len(s.rotations) == 3
        v = s.vertex_at(("b0", 0))
        assert len(s.rotations[v]) == 6
        assert s.ccw_next[("b0", 0)] == ("c2", 0)
        assert s.ccw_next[("c1", 0)] == ("b0", 1)
        assert s.ccw_next[("b0", 1)] == ("c2p", 0)
        w1 = s.vertex_at(("b1", 0))
        assert s.rotations[w1] in (
            (("b1", 0), ("c1", 1), ("b1", 1), ("c1p", 1)),
            (("b1", 1), ("c1p", 1), ("b1", 0), ("c1", 1)),
            (("c1", 1), ("b1", 1), ("c1p", 1), ("b1", 0)),
            (("c1p", 1), ("b1", 0), ("c1", 1), ("b1", 1)),
        )

    def test_rejects_duplicate_slot(self):
        with pytest.raises(ValidationError, match="twice"):
            CellSurface(((("e", 1), ("e", 1)),))

    def test_rejects_disconnected(self):
        with pytest.raises(ValidationError, match="disconnected"):
            CellSurface(((("a", 1), ("a", -1)), (("b", 1), ("b", -1))))

    def test_rejects_empty_face(self):
        with pytest.raises(ValidationError):
            CellSurface(((),))

    def test_rejects_bad_sign(self):
        with pytest.raises(ValidationError):
            CellSurface(((("e", 2),),))

    def test_rejects_bad_chirality(self):
        with pytest.raises(ValidationError):
            CellSurface(SQUARE_TORUS, chirality=0)

    def test_json_round_trip(self):
        s = CellSurface(GENUS2)
        again = CellSurface.from_json(s.to_json())
        assert again.faces == s.faces
        assert again.genus == 2

    def test_json_rejects_wrong_genus(self):
        data = torus().to_json()
        data["genus"] = 5
        with pytest.raises(ValidationError, match="genus"):
            CellSurface.from_json(data)


class TestEmbeddedCurve:
    def test_single_crossing_on_torus(self):
        c = EmbeddedCurve(torus(), (("v", 1, F(1, 2)),))
        assert len(c) == 1

    def test_rejects_boundary_edge(self):
        s = CellSurface(PENTAGON_TORUS)
        with pytest.raises(ValidationError, match="non-interior"):
            EmbeddedCurve(s, (("bdy", 1, F(1, 2)),))

    def test_rejects_face_mismatch(self):
        s = CellSurface(FOUR_HOLED)
        # p sits in face 0 on both sides, p2 in face 1: no shared face
        with pytest.raises(ValidationError, match="share a face"):
            EmbeddedCurve(s, (("p", 1, F(1, 2)), ("p2", 1, F(1, 2))))

    def test_rejects_repeated_point(self):
        with pytest.raises(ValidationError, match="repeated"):
            EmbeddedCurve(torus(), (("v", 1, F(1, 2)), ("v", -1, F(1, 2))))

    def test_rejects_self_crossing(self):
        # two same-direction strands through v must link up with a crossing
        with pytest.raises(ValidationError, match="crosses itself"):
            EmbeddedCurve(torus(), (("v", 1, F(1, 3)), ("v", 1, F(2, 3))))

    def test_small_trivial_circle_is_embedded(self):
        c = EmbeddedCurve(torus(), (("v", 1, F(1, 3)), ("v", -1, F(2, 3))))
        assert len(c) == 2

    def test_rotation_invariance(self):
        s = torus()
        ev = (("v", 1, F(1, 2)), ("h", -1, F(1, 2)))
        a = EmbeddedCurve(s, ev)
        b = EmbeddedCurve(s, ev[1:] + ev[:1])
        assert a == b
        assert hash(a) == hash(b)

    def test_renormalization_invariance(self):
        s = torus()
        a = EmbeddedCurve(s, (("v", 1, F(1, 7)), ("h", -1, F(3, 5))))
        b = EmbeddedCurve(s, (("v", 1, F(1, 2)), ("h", -1, F(1, 2))))
        assert a == b

    def test_reverse(self):
        s = torus()
        a = EmbeddedCurve(s, (("v", 1, F(1, 2)), ("h", -1, F(1, 2))))
        r = a.reverse()
        assert r.events == (("h", 1, F(1, 2)), ("v", -1, F(1, 2)))
        assert a != r
        assert a.reverse().reverse() == a
        assert a.with_orientation(False) == r.with_orientation(False)

    def test_oriented_flag_separates(self):
        a = EmbeddedCurve(torus(), (("v", 1, F(1, 2)),))
        assert a != a.with_orientation(False)

    def test_json_round_trip(self):
        s = torus()
        a = EmbeddedCurve(s, (("v", 1, F(3, 4)), ("h", -1, F(2, 5)), ("v", 1, F(1, 4))))
        again = EmbeddedCurve.from_json(s, a.to_json())
        assert again == a

    @given(
        st.lists(
            st.fractions(min_value=F(1, 100), max_value=F(99, 100)),
            min_size=5, max_size=5, unique=True,
        ),
        st.integers(min_value=0, max_value=4),
    )
    def test_key_stable_under_positions_and_rotation(self, vals, r):
        # a (1, 4)-style line, with positions moved by a monotone relabelling
        s = torus()
        q = sorted(vals)
        base = [
            ("h", -1, q[2]), ("h", -1, q[3]), ("v", 1, q[4]),
            ("h", -1, q[0]), ("h", -1, q[1]),
        ]
        ref = EmbeddedCurve(
            s,
            (("h", -1, F(5, 8)), ("h", -1, F(7, 8)), ("v", 1, F(1, 2)),
             ("h", -1, F(1, 8)), ("h", -1, F(3, 8))),
        )
        a = EmbeddedCurve(s, tuple(base))
        b = EmbeddedCurve(s, tuple(base[r:] + base[:r]))
        assert a == b == ref


class TestFlow:
    def test_torus_pairing(self):
        s = torus()
        x = Flow("x", s, {"v": 1})
        y = Flow("y", s, {"h": -1})
        one_zero = EmbeddedCurve(s, (("v", 1, F(1, 2)),))
        zero_one = EmbeddedCurve(s, (("h", -1, F(1, 2)),))
        assert (x.pair(one_zero), y.pair(one_zero)) == (1, 0)
        assert (x.pair(zero_one), y.pair(zero_one)) == (0, 1)

    def test_conservation_enforced(self):
        s = CellSurface(FOUR_HOLED)
        with pytest.raises(ValidationError, match="flux"):
            Flow("bad", s, {"p": 1})
        Flow("ok", s, {"p": 1, "q": -1})

    def test_rejects_boundary_weight(self):
        s = CellSurface(FOUR_HOLED)
        with pytest.raises(ValidationError, match="non-interior"):
            Flow("bad", s, {"d1": 1})

    def test_needs_oriented_curve(self):
        s = torus()
        x = Flow("x", s, {"v": 1})
        c = EmbeddedCurve(s, (("v", 1, F(1, 2)),), oriented=False)
        with pytest.raises(PreconditionError):
            x.pair(c)
