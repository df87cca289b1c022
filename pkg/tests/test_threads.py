import pytest
from conftest import (
    tq_empty_thread,
    tq_fin1_thread,
    tq_fin3_thread,
    tq_mixed,
    tq_two_empty_threads,
    tq_z_thread,
)

from threadquiver.errors import BoundaryContaminated, ZNotExtOrthogonal
from threadquiver.orders import Fin
from threadquiver.quiver import Quiver, Relation
from threadquiver.reps import SIMPLE, std_module
from threadquiver.threads import (
    LEFT,
    RIGHT,
    adjunction_check,
    almost_split,
    extract_threadquiver,
    gabriel_quiver,
    interval_adjoint,
    perp_adjoint,
    rad_irr_dims,
    supp_adjoint,
    thread_analysis,
    thread_hom_check,
    thread_runs,
)
from threadquiver.windows import expand, normalize, window_from_quiver, window_iso


def a2_window():
    return window_from_quiver(Quiver(["1", "2"], [("a", "1", "2")]))


def a3_window(zero_rel=False):
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    rels = [Relation(((1, q.path(("a", "b"))),))] if zero_rel else []
    return window_from_quiver(q, rels)


def an_window(n):
    q = Quiver(
        [str(i) for i in range(1, n + 1)],
        [(f"a{i}", str(i), str(i + 1)) for i in range(1, n)],
    )
    return window_from_quiver(q)


# -- radical and irreducible dimensions ------------------------------------------


def test_rad_irr_a2():
    w = a2_window()
    assert rad_irr_dims(w, "1", "2") == (1, 0, 1)


def test_rad_irr_a3_composite():
    w = a3_window()
    assert rad_irr_dims(w, "1", "3") == (1, 1, 0)


def test_rad_irr_diagonal():
    w = a3_window()
    for v in w.quiver.vertices:
        assert rad_irr_dims(w, v, v) == (0, 0, 0)


def test_gabriel_quiver_matches_expansion():
    tq = tq_fin1_thread()
    w = expand(tq, 1)
    g = gabriel_quiver(w)
    orig = {(a.src, a.tgt) for a in w.quiver.arrows}
    got = {(a.src, a.tgt) for a in g.arrows}
    assert orig == got
    assert len(g.arrows) == len(w.quiver.arrows)


def test_gabriel_quiver_with_zero_relation():
    w = a3_window(zero_rel=True)
    g = gabriel_quiver(w)
    assert len(g.arrows) == 2


def test_gabriel_single_vertex():
    w = window_from_quiver(Quiver(["v"], []))
    assert gabriel_quiver(w).arrows == []


# -- almost split neighbors -------------------------------------------------------


def test_almost_split_a2():
    w = a2_window()
    assert almost_split(w, "2", LEFT) == ("1",)
    assert almost_split(w, "1", RIGHT) == ("2",)


def test_almost_split_source_with_two_arrows():
    q = Quiver(["s", "a", "b"], [("f", "s", "a"), ("g", "s", "b")])
    w = window_from_quiver(q)
    assert tuple(sorted(almost_split(w, "s", RIGHT))) == ("a", "b")


def test_almost_split_chain_interior():
    w = expand(tq_empty_thread(), 2)
    order = w.topological_order()
    interior_chain = [v for v in order[1:-1] if v not in w.boundary]
    assert interior_chain
    for v in interior_chain:
        assert len(almost_split(w, v, LEFT)) == 1
        assert len(almost_split(w, v, RIGHT)) == 1


def test_almost_split_boundary_refused():
    w = expand(tq_z_thread(), 1)
    b = sorted(w.boundary)[0]
    with pytest.raises(BoundaryContaminated):
        almost_split(w, b, LEFT)


# -- thread analysis ---------------------------------------------------------------


def test_thread_analysis_chain_expansion():
    w = expand(tq_empty_thread(), 2)
    tv, threads = thread_analysis(w)
    # interior chain vertices are thread vertices; src/tgt are not (degree),
    # cut-adjacent ones are not (boundary)
    order = w.topological_order()
    assert order[0] not in tv and order[-1] not in tv
    for b in w.boundary:
        assert b not in tv
    assert all(v in set(order[1:-1]) for v in tv)


def test_thread_analysis_branch_vertex_is_nonthread():
    q = Quiver(
        ["b", "c1", "c2", "d1", "d2"],
        [("f", "b", "c1"), ("g", "c1", "c2"), ("h", "b", "d1"), ("i", "d1", "d2")],
    )
    w = window_from_quiver(q)
    tv, _ = thread_analysis(w)
    assert "b" not in tv


def test_thread_analysis_linear_an():
    w = an_window(5)
    tv, threads = thread_analysis(w)
    assert tv == {"2", "3", "4"}
    assert threads == [("2", "4")]


def test_doubled_arrow_breaks_thread():
    q = Quiver(
        ["1", "2", "3", "4"],
        [("a", "1", "2"), ("b", "2", "3"), ("b2", "2", "3"), ("c", "3", "4")],
    )
    w = window_from_quiver(q)
    tv, _ = thread_analysis(w)
    assert "2" not in tv and "3" not in tv


def test_thread_hom_check_fixtures():
    for tq in (tq_empty_thread(), tq_z_thread(), tq_mixed()):
        w = expand(tq, 1)
        report = thread_hom_check(w)
        assert report.passed, report.items


def test_thread_hom_check_single_vertex_vacuous():
    w = window_from_quiver(Quiver(["v"], []))
    assert thread_hom_check(w).passed


# -- extraction ---------------------------------------------------------------------


def test_extract_fin1_depth1_gives_fin5():
    w = expand(tq_fin1_thread(), 1)  # seven-vertex chain
    tq = extract_threadquiver(w, 1)
    assert len(tq.thread_arrows) == 1
    t = tq.thread_arrows[0]
    assert t.label == Fin(5)
    assert len(tq.vertices) == 2


def test_extract_no_long_threads():
    w = a3_window()
    tq = extract_threadquiver(w, 3)
    assert tq.thread_arrows == []
    assert len(tq.standard_arrows) == 2


def test_extract_expand_roundtrip_depth0():
    for maker in (tq_empty_thread, tq_fin1_thread, tq_fin3_thread, tq_z_thread,
                  tq_two_empty_threads):
        for d in (0, 1, 2):
            w = expand(maker(), d)
            tq2 = extract_threadquiver(w, 1)
            w2 = expand(tq2, 0)
            assert window_iso(w2, w) is not None, (maker.__name__, d)


# -- adjoints -----------------------------------------------------------------------


def test_perp_adjoint_empty_family():
    w = a3_window()
    verts, unit = perp_adjoint(w, "3", [], RIGHT)
    assert verts == ("3",)


def test_perp_adjoint_a3_simple_family():
    w = a3_window()
    s2 = std_module(w, "2", SIMPLE)
    verts, _ = perp_adjoint(w, "2", [s2], RIGHT)
    assert verts == ("1",)
    verts3, _ = perp_adjoint(w, "3", [s2], RIGHT)
    assert verts3 == ("3",)
    # adjunction dims against the perp vertices 1, 3
    assign = {v: perp_adjoint(w, v, [s2], RIGHT)[0] for v in w.quiver.vertices}
    report = adjunction_check(w, ["1", "3"], assign, RIGHT)
    assert report.passed, report.items


def test_perp_adjoint_left_side():
    w = a3_window()
    s2 = std_module(w, "2", SIMPLE)
    verts, _ = perp_adjoint(w, "2", [s2], LEFT)
    assert verts == ("3",)
    assign = {v: perp_adjoint(w, v, [s2], LEFT)[0] for v in w.quiver.vertices}
    report = adjunction_check(w, ["1", "3"], assign, LEFT)
    assert report.passed, report.items


def test_perp_adjoint_rejects_nonorthogonal():
    w = a3_window()
    s2 = std_module(w, "2", SIMPLE)
    s3 = std_module(w, "3", SIMPLE)
    with pytest.raises(ZNotExtOrthogonal):
        perp_adjoint(w, "1", [s2, s3], RIGHT)


def test_supp_adjoint_trivial_cases():
    w = a2_window()
    verts, _ = supp_adjoint(w, "1", "1")
    assert verts == ("1",)
    verts, _ = supp_adjoint(w, "1", "2")
    assert verts == ("1",)
    verts, _ = supp_adjoint(w, "2", "1")
    assert verts == ()


def test_supp_adjoint_branch():
    # A -> y-branch and A -> elsewhere: corestriction lands on the y-branch part
    q = Quiver(
        ["A", "y1", "y2", "w"],
        [("f", "A", "y1"), ("g", "y1", "y2"), ("h", "A", "w")],
    )
    w = window_from_quiver(q)
    verts, _ = supp_adjoint(w, "A", "y2")
    assert verts == ("A",) or verts == ("y1",)
    # hom(-, y2) of the image must match hom(-, A) on the branch
    assert w.hom_dim(verts[0], "y2") == 1


def test_interval_adjoint_inside():
    w = an_window(5)
    verts, _ = interval_adjoint(w, "2", "4", "3", LEFT)
    assert verts == ("3",)


def test_interval_adjoint_before_interval():
    w = an_window(5)
    verts, _ = interval_adjoint(w, "2", "4", "1", LEFT)
    assert verts == ("2",)
    verts, _ = interval_adjoint(w, "2", "4", "5", LEFT)
    assert verts == ()


def test_interval_adjoint_right_side():
    w = an_window(5)
    verts, _ = interval_adjoint(w, "2", "4", "5", RIGHT)
    assert verts == ("4",)
    verts, _ = interval_adjoint(w, "2", "4", "1", RIGHT)
    assert verts == ()


def test_interval_adjoint_full_assignment_checks():
    w = an_window(6)
    sub = ["2", "3", "4"]
    for side in (LEFT, RIGHT):
        assign = {
            v: interval_adjoint(w, "2", "4", v, side)[0] for v in w.quiver.vertices
        }
        report = adjunction_check(w, sub, assign, side)
        assert report.passed, (side, report.items)


def test_adjunction_check_flags_wrong_assignment():
    w = an_window(5)
    sub = ["2", "3", "4"]
    assign = {v: interval_adjoint(w, "2", "4", v, LEFT)[0] for v in w.quiver.vertices}
    assign["1"] = ("3",)  # deliberately shifted
    report = adjunction_check(w, sub, assign, LEFT)
    assert not report.passed


def test_maps_out_of_threads_instance():
    # for a maximal thread [F..L] with successor Y+ off the thread:
    # dim hom(F, Y+) = 1 and v -> Y+ is a left adjoint assignment
    w = expand(normalize(tq_z_thread()), 2)
    runs = thread_runs(w)
    runs = [r for r in runs if len(r) >= 2]
    assert runs
    run = runs[0]
    ins = {a.tgt: a.src for a in w.quiver.arrows}
    outs = {a.src: a.tgt for a in w.quiver.arrows}
    y_plus = outs[run[-1]]
    assert w.hom_dim(run[0], y_plus) == 1
    complement = [v for v in w.quiver.vertices if v not in set(run)]
    assign = {}
    for v in w.quiver.vertices:
        if v in set(run):
            assign[v] = (y_plus,)
        else:
            assign[v] = (v,)
    report = adjunction_check(w, complement, assign, LEFT, probes=list(run))
    assert report.passed, report.items
