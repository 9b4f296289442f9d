"""Maps: axiom validation, types, automorphisms, stars."""

import pytest

from tropmap import (
    canonical_map,
    combinatorial_type,
    discrete_data_of,
    recession_type,
    stable_map,
    star,
    type_automorphisms,
    validate_map,
)
from tropmap.curves import Edge, INF, Marking, Vertex, tropical_curve
from tropmap.exactgeom import build_fan, cone, zero_cone
from tropmap.gallery import square_loop
from tropmap.maps import EdgeMapData

from builders import build_map, parallel_pair, three_rays
from oracles import exhaustive_automorphisms


class TestValidate:
    def test_balanced_three_rays(self):
        assert validate_map(three_rays()) == []

    def test_unbalanced_two_rays(self):
        m = build_map(
            2,
            ["o"],
            [],
            [("r1", "o", (1, 0), 1, "p1"), ("r2", "o", (0, 1), 1, "p2")],
            {"o": (0, 0)},
        )
        diags = validate_map(m)
        assert any("balancing" in d and "o" in d for d in diags)

    def test_integrality_violation(self):
        m = build_map(
            2,
            ["a", "b"],
            [("e", ("a", "b"), (1, 0), 2, "a", 1)],
            [
                ("ra", "a", (-1, 0), 2, "p1"),
                ("rb", "b", (1, 0), 2, "p2"),
            ],
            {"a": (0, 0), "b": (1, 0)},
        )
        diags = validate_map(m)
        assert any("integrality" in d and "e" in d for d in diags)

    def test_stability_two_valent(self):
        m = build_map(
            2,
            ["a", "b", "c"],
            [
                ("e1", ("a", "b"), (1, 0), 1, "a", 1),
                ("e2", ("b", "c"), (1, 0), 1, "b", 1),
            ],
            [
                ("ra", "a", (-1, 0), 1, "p1"),
                ("rc", "c", (1, 0), 1, "p2"),
            ],
            {"a": (0, 0), "b": (1, 0), "c": (2, 0)},
        )
        diags = validate_map(m)
        assert any("stability" in d and "b" in d for d in diags)
        # a and c are 1-valent plus a ray each: also 2-valent, also straight
        assert len([d for d in diags if "stability" in d]) == 3

    def test_stability_kept_at_stratum_change(self):
        # a line through the origin of a strict two-ray fan: the origin
        # vertex star spans two cones, so the vertex survives
        fan = build_fan(1, [[(1,)], [(-1,)]], embedded=False)
        vs = [Vertex("o"), Vertex("q1"), Vertex("q2")]
        es = [Edge("r1", ("o", "q1"), INF), Edge("r2", ("o", "q2"), INF)]
        mk = [Marking("p1", "q1"), Marking("p2", "q2")]
        c = tropical_curve(vs, es, mk)
        m = stable_map(
            c,
            fan,
            {"o": (0,)},
            {"r1": EdgeMapData((1,), 1, "o"), "r2": EdgeMapData((-1,), 1, "o")},
        )
        assert validate_map(m) == []

    def test_weight_zero_direction_mismatch(self):
        m = build_map(
            2,
            ["a", "b"],
            [("e", ("a", "b"), (1, 0), 0, "a", 1)],
            [],
            {"a": (0, 0), "b": (0, 0)},
        )
        assert any("weight" in d for d in validate_map(m))

    def test_contact_check(self):
        m = three_rays()
        data = discrete_data_of(m)
        assert validate_map(m, data) == []
        bad = discrete_data_of(m).contact | {"p1": (9, 9)}
        from tropmap import discrete_data

        assert any(
            "contact" in d for d in validate_map(m, discrete_data(0, bad))
        )

    def test_orientation_flip_invariance(self):
        m = square_loop()
        d = m.edge_data["s1"]
        e = m.curve.edge("s1")
        other = e.ends[0] if e.ends[1] == d.tail else e.ends[1]
        flipped = dict(m.edge_data)
        flipped["s1"] = EdgeMapData(tuple(-x for x in d.u), d.w, other)
        m2 = stable_map(m.curve, m.fan, m.positions, flipped)
        assert validate_map(m2) == []
        assert canonical_map(m2) == canonical_map(m)


class TestTypes:
    def test_embedded_zero_cones(self):
        t = combinatorial_type(square_loop())
        assert all(c == zero_cone(3) for c in t.vertex_cones.values())
        assert len(t.vertex_cones) == 4

    def test_strict_ray_cone(self):
        fan = build_fan(1, [[(1,)], [(-1,)]], embedded=False)
        vs = [Vertex("o"), Vertex("q1"), Vertex("q2")]
        es = [Edge("r1", ("o", "q1"), INF), Edge("r2", ("o", "q2"), INF)]
        mk = [Marking("p1", "q1"), Marking("p2", "q2")]
        c = tropical_curve(vs, es, mk)
        m = stable_map(
            c,
            fan,
            {"o": (2,)},
            {"r1": EdgeMapData((1,), 1, "o"), "r2": EdgeMapData((-1,), 1, "o")},
        )
        t = combinatorial_type(m)
        assert t.vertex_cones["o"] == cone(1, [(1,)])

    def test_strict_outside_support(self):
        fan = build_fan(1, [[(1,)]], embedded=False)
        vs = [Vertex("o"), Vertex("q1"), Vertex("q2")]
        es = [Edge("r1", ("o", "q1"), INF), Edge("r2", ("o", "q2"), INF)]
        mk = [Marking("p1", "q1"), Marking("p2", "q2")]
        c = tropical_curve(vs, es, mk)
        m = stable_map(
            c,
            fan,
            {"o": (-1,)},
            {"r1": EdgeMapData((1,), 1, "o"), "r2": EdgeMapData((-1,), 1, "o")},
        )
        with pytest.raises(ValueError):
            combinatorial_type(m)

    def test_recession_three_rays(self):
        rt = recession_type(combinatorial_type(three_rays()))
        assert rt.genus == 0
        assert sorted(v for _, v in rt.contacts) == sorted(
            [(1, 0), (0, 1), (-1, -1)]
        )

    def test_recession_square_loop(self):
        rt = recession_type(combinatorial_type(square_loop()))
        assert rt.genus == 1
        assert len(rt.contacts) == 4

    def test_recession_no_markings(self):
        from builders import lone_genus_one_vertex

        rt = recession_type(combinatorial_type(lone_genus_one_vertex()))
        assert rt.genus == 1 and rt.contacts == ()

    def test_type_balancing_is_length_free(self):
        # the weighted directions of a valid map balance at every finite
        # vertex of the forgotten type
        for m in (square_loop(), three_rays(), parallel_pair()):
            t = combinatorial_type(m)
            for vid in t.graph.unmarked_vertex_ids():
                total = None
                for e in t.graph.edges_at(vid):
                    if e.ends[0] == e.ends[1]:
                        continue
                    u = t.direction_from(e, vid)
                    w = t.edge_data[e.id].w
                    vec = tuple(w * x for x in u)
                    total = vec if total is None else tuple(a + b for a, b in zip(total, vec))
                assert total is None or all(x == 0 for x in total)

    def test_recession_invariant_under_contraction(self):
        from tropmap import contract_type

        t = combinatorial_type(square_loop())
        rt = recession_type(t)
        for edges in (["s0"], ["s0", "s2"], list(t.bounded_edge_ids())):
            assert recession_type(contract_type(t, edges)) == rt


class TestAutomorphisms:
    def test_asymmetric_three_rays_identity(self):
        auts = type_automorphisms(combinatorial_type(three_rays()))
        assert len(auts) == 1

    def test_parallel_pair_swap(self):
        t = combinatorial_type(parallel_pair())
        auts = type_automorphisms(t)
        assert len(auts) == 2
        assert sorted(a.edge_map["e1"][0] for a in auts) == ["e1", "e2"]

    def test_square_loop_identity(self):
        assert len(type_automorphisms(combinatorial_type(square_loop()))) == 1

    def test_contracted_loop_flip(self):
        from tropmap.gallery import speyer_tree

        t = combinatorial_type(speyer_tree())
        auts = type_automorphisms(t)
        # only the contracted self-loop can move: identity and the loop flip
        assert len(auts) == 2
        assert sorted(a.edge_map["loop"][1] for a in auts) == [False, True]

    def test_oracle_cross_check(self):
        for m in (three_rays(), parallel_pair(), square_loop()):
            t = combinatorial_type(m)
            vertices = {v.id: v.genus for v in t.graph.vertices}
            edges = {}
            for e in t.graph.edges:
                d = t.edge_data[e.id]
                a, b = e.ends
                u = d.u if d.tail == a else tuple(-x for x in d.u)
                edges[e.id] = (a, b, u, d.w)
            markings = {mk.label: mk.vertex for mk in t.graph.markings}
            assert len(type_automorphisms(t)) == exhaustive_automorphisms(
                vertices, edges, markings
            )

    def test_group_closure(self):
        t = combinatorial_type(parallel_pair())
        auts = type_automorphisms(t)
        keys = {
            (tuple(sorted(a.vertex_map.items())), tuple(sorted(a.edge_map.items())))
            for a in auts
        }
        for a in auts:
            for b in auts:
                vcomp = {v: b.vertex_map[w] for v, w in a.vertex_map.items()}
                ecomp = {}
                for e, (f, flip1) in a.edge_map.items():
                    g, flip2 = b.edge_map[f]
                    ecomp[e] = (g, flip1 != flip2)
                key = (tuple(sorted(vcomp.items())), tuple(sorted(ecomp.items())))
                assert key in keys


class TestStar:
    def test_three_rays_fixed_point(self):
        m = three_rays()
        s = star(m, "o")
        assert canonical_map(s) == canonical_map(m)

    def test_square_loop_corner(self):
        s = star(square_loop(), "c0")
        assert validate_map(s) == []
        dirs = sorted(s.weighted_direction(e.id) for e in s.curve.edges)
        assert dirs == sorted([(1, 0, 0), (0, 1, 0), (-1, -1, 0)])

    def test_contracted_loop_dropped(self):
        from tropmap.gallery import speyer_tree

        s = star(speyer_tree(), "v0")
        assert not any(e.ends[0] == e.ends[1] for e in s.curve.edges)
        assert len(s.curve.edges) == 2  # the two tree edges become rays

    def test_unknown_vertex(self):
        with pytest.raises(ValueError):
            star(three_rays(), "nope")
