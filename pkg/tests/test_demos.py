import pytest
from hypothesis import given, settings, strategies as st

from topoteach.demos import (
    DemoFormatError,
    DemonstrationSet,
    PointSequence,
    SequenceOfSequences,
    build_demo_complex,
    format_demo,
    parse_demo,
)
from topoteach.homology import betti_gf2
from topoteach.teaching import DEMOS, circle_demo, pants_demo, pants_gluing_demo, torus_demo


def counts(demo):
    c = build_demo_complex(demo)
    return c.V, c.E, c.F


def test_construction_examples():
    assert counts(circle_demo()) == (3, 3, 0)
    assert counts(torus_demo()) == (9, 27, 18)
    assert counts(DemonstrationSet.of(["a", "b"])) == (2, 1, 0)
    assert counts(pants_demo()) == (12, 24, 12)


def test_torus_edges_split_into_loops_rungs_diagonals():
    c = build_demo_complex(torus_demo())
    same_ring = {e for e in c.edges if e[0][0] == e[1][0]}
    assert len(same_ring) == 9
    assert c.euler_characteristic() == 0


def test_gluing_skips_degenerate_triangles():
    c = build_demo_complex(pants_gluing_demo())
    assert all(len(set(t)) == 3 for t in c.triangles)
    assert (c.V, c.E, c.F) == (5, 9, 4)


def test_structure_invariants():
    for make in DEMOS.values():
        c = build_demo_complex(make())
        assert all(a in c.vertices and b in c.vertices for a, b in c.edges)
        for a, b, d in c.triangles:
            assert {(a, b), (a, d), (b, d)} <= c.edges
        assert c.as_complex().is_closed()


def test_ragged_sequences_rejected():
    with pytest.raises(ValueError):
        SequenceOfSequences((PointSequence(("a", "b")), PointSequence(("c",))))
    with pytest.raises(ValueError):
        DemonstrationSet.of([["a", "b"], ["c"]])


def test_open_path_vs_loop():
    assert betti_gf2(build_demo_complex(DemonstrationSet.of(["a", "b", "c"]))) == (1, 0, 0)
    assert betti_gf2(build_demo_complex(circle_demo())) == (1, 1, 0)


labels = st.sampled_from("abcdefgh")
sequences = st.lists(labels, min_size=1, max_size=5)


@st.composite
def demo_items(draw):
    if draw(st.booleans()):
        return draw(sequences)
    m = draw(st.integers(1, 4))
    k = draw(st.integers(2, 4))
    return [draw(st.lists(labels, min_size=m, max_size=m)) for _ in range(k)]


@given(st.lists(demo_items(), min_size=1, max_size=4), st.data())
@settings(max_examples=150, deadline=None)
def test_duplicating_an_item_changes_nothing(items, data):
    demo = DemonstrationSet.of(*items)
    i = data.draw(st.integers(0, len(items) - 1))
    dup = DemonstrationSet.of(*items, items[i])
    assert build_demo_complex(dup) == build_demo_complex(demo)


@given(st.lists(demo_items(), min_size=1, max_size=4))
@settings(max_examples=150, deadline=None)
def test_euler_matches_betti(items):
    c = build_demo_complex(DemonstrationSet.of(*items))
    b = betti_gf2(c)
    assert c.euler_characteristic() == b.b0 - b.b1 + b.b2


@given(st.lists(demo_items(), min_size=1, max_size=4))
@settings(max_examples=80, deadline=None)
def test_text_roundtrip(items):
    demo = DemonstrationSet.of(*items)
    again = parse_demo(format_demo(demo))
    assert again.items == demo.items


def test_parse_with_coordinates_and_comments():
    text = """# a triangle
point a 0 0
point b 1 0
point c 0.5 0.8
seq a b c a   # closed
"""
    demo = parse_demo(text)
    assert demo.points["c"] == (0.5, 0.8)
    assert counts(demo) == (3, 3, 0)


def test_parse_multiline_sos():
    text = "sos {\n  seq a1 a2 a3 a1;\n  seq b1 b2 b3 b1;\n  seq c1 c2 c3 c1;\n  seq a1 a2 a3 a1;\n}\n"
    assert counts(parse_demo(text)) == (9, 27, 18)


@pytest.mark.parametrize("text, line", [
    ("seq a b\nbogus x\n", 2),
    ("point a 1\n", 1),
    ("sos { seq a b; seq c; }\n", 1),
    ("seq a\nsos {\nseq a b\n", 2),
    ("}\n", 1),
    ("sos { sos {\n", 1),
    ("point a x y\n", 1),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(DemoFormatError) as info:
        parse_demo(text)
    assert info.value.lineno == line
    assert f"line {line}" in str(info.value)
