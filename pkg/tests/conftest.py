"""Shared fixture quivers used across the test suite.

These are the concrete instances the structural checks are exercised on:
small path categories, thread quivers with empty/finite/Z labels, the
mixed five-vertex thread quiver, the zig-zag category with radical-square
zero, and its linearly oriented cousin.
"""

import random

from threadquiver.linalg import QQ
from threadquiver.orders import INT, Fin
from threadquiver.quiver import Quiver, Relation
from threadquiver.reps import hom_basis, map_factor, proj_sum
from threadquiver.windows import ThreadQuiver, window_from_quiver


def tq_a2():
    return ThreadQuiver(["a", "b"], [("f", "a", "b")], [])


def tq_comm_square():
    tq = ThreadQuiver(
        ["p", "q", "r", "s"],
        [("a", "p", "q"), ("b", "q", "s"), ("c", "p", "r"), ("d", "r", "s")],
        [],
    )
    q = Quiver(tq.vertices, tq.standard_arrows)
    rel = Relation(((1, q.path(("a", "b"))), (-1, q.path(("c", "d")))))
    return ThreadQuiver(tq.vertices, tq.standard_arrows, [], [rel])


def tq_z_thread():
    return ThreadQuiver(["x", "y"], [], [("t", "x", "y", INT)])


def tq_fin3_thread():
    return ThreadQuiver(["x", "y"], [], [("t", "x", "y", Fin(3))])


def tq_fin1_thread():
    return ThreadQuiver(["x", "y"], [], [("t", "x", "y", Fin(1))])


def tq_empty_thread():
    return ThreadQuiver(["x", "y"], [], [("t", "x", "y", Fin(0))])


def tq_two_empty_threads():
    return ThreadQuiver(
        ["x", "y", "z"], [], [("t", "x", "y", Fin(0)), ("u", "y", "z", Fin(0))]
    )


def tq_mixed():
    """The five-vertex thread quiver: two standard arrows out of A, a standard
    and a Z-thread arrow B -> E, a 3-thread C -> B, an empty thread C -> D."""
    return ThreadQuiver(
        ["A", "B", "C", "D", "E"],
        [("ab", "A", "B"), ("ae", "A", "E"), ("be", "B", "E")],
        [
            ("tz", "B", "E", INT),
            ("t3", "C", "B", Fin(3)),
            ("te", "C", "D", Fin(0)),
        ],
    )


def dualizing_fixtures():
    return [
        ("z-thread", tq_z_thread()),
        ("fin3-thread", tq_fin3_thread()),
        ("mixed", tq_mixed()),
        ("a2", tq_a2()),
        ("comm-square", tq_comm_square()),
    ]


def chain_fixtures():
    return [
        ("empty-thread", tq_empty_thread()),
        ("fin1-thread", tq_fin1_thread()),
        ("fin3-thread", tq_fin3_thread()),
        ("z-thread", tq_z_thread()),
        ("two-empty-threads", tq_two_empty_threads()),
    ]


def zigzag_window(field=QQ):
    """First three zig/zag segments with all length-2 compositions zero.

    All arrows point down the page; zig i has i arrows, zag i has i arrows,
    sharing tops (b^i_0 = a^{i+1}_0) and bottoms (a^i_i = b^i_i).
    """
    vertices = [
        "a10", "a11",
        "a20", "a21", "a22", "b21",
        "a30", "a31", "a32", "a33", "b31", "b32", "b30",
    ]
    arrows = [
        ("z1", "a10", "a11"),
        ("w1", "a20", "a11"),
        ("z2a", "a20", "a21"), ("z2b", "a21", "a22"),
        ("w2a", "a30", "b21"), ("w2b", "b21", "a22"),
        ("z3a", "a30", "a31"), ("z3b", "a31", "a32"), ("z3c", "a32", "a33"),
        ("w3a", "b30", "b31"), ("w3b", "b31", "b32"), ("w3c", "b32", "a33"),
    ]
    q = Quiver(vertices, arrows)
    rels = []
    for a in q.arrows:
        for b in q.out_arrows[a.tgt]:
            rels.append(Relation(((1, q.path((a.name, b.name))),)))
    return window_from_quiver(q, rels, field=field, name="zigzag")


def ainf_rad2_window(n=10, field=QQ):
    """Linearly oriented A_n with all length-2 compositions zero (a finite
    window of the linearly oriented doubly infinite quiver)."""
    vertices = [f"v{i}" for i in range(1, n + 1)]
    arrows = [(f"a{i}", f"v{i}", f"v{i+1}") for i in range(1, n)]
    q = Quiver(vertices, arrows)
    rels = [
        Relation(((1, q.path((f"a{i}", f"a{i+1}"))),)) for i in range(1, n - 1)
    ]
    return window_from_quiver(q, rels, field=field, name=f"ainf-rad2-{n}")


def star_tail_window(n=6, field=QQ):
    """One vertex with arrows to every vertex of a chain whose tail is marked
    as a truncation artifact (the shape left by removing a thread interval
    in front of an accumulating family)."""
    vertices = ["X"] + [f"c{i}" for i in range(1, n + 1)] + ["Y"]
    arrows = [("xy", "X", "Y")]
    arrows += [(f"x{i}", "X", f"c{i}") for i in range(1, n + 1)]
    arrows += [(f"c{i}", f"c{i}", f"c{i+1}") for i in range(1, n)]
    q = Quiver(vertices, arrows)
    return window_from_quiver(q, [], boundary={f"c{n}"}, field=field, name="star-tail")


def random_fp_rep(w, rng, n_gens=2, n_rels=2):
    """Random finitely presented module as a cokernel between projective sums."""
    verts = w.quiver.vertices
    gen_vs = [rng.choice(verts) for _ in range(rng.randint(1, n_gens))]
    rel_vs = [rng.choice(verts) for _ in range(rng.randint(1, n_rels))]
    P0 = proj_sum(w, gen_vs)
    P1 = proj_sum(w, rel_vs)
    _, basis = hom_basis(P1, P0)
    f = None
    for g in basis:
        c = rng.randint(-2, 2)
        if c:
            g = g.scale(QQ(c))
            f = g if f is None else f + g
    if f is None:
        return P0
    return map_factor(f).cokernel
