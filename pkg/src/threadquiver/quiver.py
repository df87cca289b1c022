"""Quivers, paths, k-linear relations, and hom-space bases of kQ mod relations.

Conventions: a path stores its arrows in composition order left-to-right,
so Path(x, z, (a, b)) means a: x -> y followed by b: y -> z.  Hom spaces are
only computed for acyclic quivers, where they are finite dimensional; the
basis is the set of paths whose classes survive reduction by the two-sided
ideal generated by the relations, with paths ordered by (length, name tuple).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonAcyclic
from .linalg import Matrix, rref


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Path:
    src: str
    tgt: str
    arrows: tuple[str, ...]

    def __len__(self):
        return len(self.arrows)

    @property
    def is_identity(self):
        return not self.arrows

    def then(self, other: "Path") -> "Path":
        """self followed by other (requires self.tgt == other.src)."""
        assert self.tgt == other.src, (self, other)
        return Path(self.src, other.tgt, self.arrows + other.arrows)

    def sort_key(self):
        return (len(self.arrows), self.arrows)


def identity_path(v: str) -> Path:
    return Path(v, v, ())


@dataclass(frozen=True)
class Relation:
    """A k-linear combination of parallel paths, set to zero in the category."""

    terms: tuple[tuple[object, Path], ...]  # (coefficient, path)

    def __post_init__(self):
        assert self.terms, "relation needs at least one term"
        src = self.terms[0][1].src
        tgt = self.terms[0][1].tgt
        for _, p in self.terms:
            assert p.src == src and p.tgt == tgt, "relation paths must be parallel"

    @property
    def src(self):
        return self.terms[0][1].src

    @property
    def tgt(self):
        return self.terms[0][1].tgt


class Quiver:
    """Finite quiver; loops and parallel arrows allowed."""

    def __init__(self, vertices, arrows):
        self.vertices = list(vertices)
        self.vertex_set = set(self.vertices)
        assert len(self.vertex_set) == len(self.vertices), "duplicate vertex names"
        self.arrows: list[Arrow] = []
        seen = set()
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            assert a.name not in seen, f"duplicate arrow name {a.name}"
            seen.add(a.name)
            assert a.src in self.vertex_set, f"unknown source {a.src}"
            assert a.tgt in self.vertex_set, f"unknown target {a.tgt}"
            self.arrows.append(a)
        self.arrow_by_name = {a.name: a for a in self.arrows}
        self.out_arrows: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        self.in_arrows: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            self.out_arrows[a.src].append(a)
            self.in_arrows[a.tgt].append(a)
        self._reach: dict[str, set[str]] | None = None
        self._topo_cache = None

    def path(self, arrow_names: tuple[str, ...], src: str | None = None) -> Path:
        """Build a Path from arrow names in composition order; checks composability."""
        if not arrow_names:
            assert src is not None, "identity path needs a vertex"
            return identity_path(src)
        first = self.arrow_by_name[arrow_names[0]]
        cur = first.src
        for name in arrow_names:
            a = self.arrow_by_name[name]
            assert a.src == cur, f"non-composable at {name}"
            cur = a.tgt
        return Path(first.src, cur, tuple(arrow_names))

    def topological_order(self) -> list[str]:
        """Vertices in topological order; raises NonAcyclic on a cycle."""
        if getattr(self, "_topo_cache", None) is not None:
            if self._topo_cache == "cyclic":
                raise NonAcyclic("quiver has a directed cycle")
            return list(self._topo_cache)
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.tgt] += 1
        stack = sorted([v for v in self.vertices if indeg[v] == 0], reverse=True)
        order = []
        while stack:
            v = stack.pop()
            order.append(v)
            for a in sorted(self.out_arrows[v], key=lambda a: a.name, reverse=True):
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    stack.append(a.tgt)
        if len(order) != len(self.vertices):
            self._topo_cache = "cyclic"
            raise NonAcyclic("quiver has a directed cycle")
        self._topo_cache = order
        return list(order)

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
            return True
        except NonAcyclic:
            return False

    def reachable_from(self, x: str) -> set[str]:
        if self._reach is None:
            self._reach = {}
            # accumulate along a reverse topological sweep when acyclic;
            # fall back to per-vertex DFS otherwise
            try:
                order = self.topological_order()
            except NonAcyclic:
                order = None
            if order is not None:
                for v in reversed(order):
                    acc = {v}
                    for a in self.out_arrows[v]:
                        acc |= self._reach[a.tgt]
                    self._reach[v] = acc
            else:
                for v in self.vertices:
                    seen = {v}
                    stack = [v]
                    while stack:
                        u = stack.pop()
                        for a in self.out_arrows[u]:
                            if a.tgt not in seen:
                                seen.add(a.tgt)
                                stack.append(a.tgt)
                    self._reach[v] = seen
        return self._reach[x]


def is_strongly_locally_finite(q: Quiver) -> bool:
    """For a finite quiver this reduces to acyclicity."""
    return q.is_acyclic()


def enumerate_paths(q: Quiver, x: str, y: str, max_len: int) -> list[Path]:
    """All paths x -> y of length <= max_len, sorted by (length, arrow names)."""
    assert x in q.vertex_set and y in q.vertex_set
    out = []
    if y not in q.reachable_from(x):
        return out

    def walk(v, acc):
        if len(acc) > max_len:
            return
        if v == y:
            out.append(Path(x, y, tuple(acc)))
        if len(acc) == max_len:
            return
        for a in q.out_arrows[v]:
            if a.tgt == y or y in q.reachable_from(a.tgt):
                acc.append(a.name)
                walk(a.tgt, acc)
                acc.pop()

    walk(x, [])
    out.sort(key=Path.sort_key)
    return out


class HomBasis:
    """Basis data for the hom space (x, y) in kQ modulo relations.

    `paths` lists every path x -> y; `basis` is the subset of paths whose
    classes form a basis of the quotient; `expand` rewrites any parallel
    linear combination of paths in that basis.
    """

    def __init__(self, field, paths: list[Path], reducers: list[list] | None, free_idx: list[int]):
        self.field = field
        self.paths = paths
        self.index = {p: i for i, p in enumerate(paths)}
        self.reducers = reducers  # rref rows of the relation span, or None
        self.free_idx = free_idx
        self.basis = [paths[i] for i in free_idx]
        self.dim = len(free_idx)

    def expand(self, terms) -> list:
        """Coordinates of sum(c * path) in the chosen basis."""
        zero = self.field.zero
        vec = [zero] * len(self.paths)
        for c, p in terms:
            vec[self.index[p]] = vec[self.index[p]] + self.field(c)
        if self.reducers is not None:
            for pivot_col, row in self.reducers:
                f = vec[pivot_col]
                if f != zero:
                    for j, rv in row:
                        vec[j] = vec[j] - f * rv
        return [vec[i] for i in self.free_idx]

    def expand_path(self, p: Path) -> list:
        return self.expand([(self.field.one, p)])


def hom_basis_paths(
    q: Quiver,
    relations: list[Relation],
    x: str,
    y: str,
    field,
    _path_cache: dict | None = None,
) -> HomBasis:
    """Hom space of the path category mod the two-sided ideal of the relations.

    The ideal component at (x, y) is spanned by s . r . p over all relations r
    and all paths p into r's source and s out of r's target; its span is
    reduced by rref and the surviving path classes give the basis.
    """
    if not q.is_acyclic():
        raise NonAcyclic("hom spaces of cyclic quivers are infinite dimensional")
    max_len = max(len(q.vertices) - 1, 0)

    def paths_between(a, b):
        if _path_cache is not None:
            key = (a, b)
            if key not in _path_cache:
                _path_cache[key] = enumerate_paths(q, a, b, max_len)
            return _path_cache[key]
        return enumerate_paths(q, a, b, max_len)

    paths = paths_between(x, y)
    if not relations or not paths:
        return HomBasis(field, paths, None, list(range(len(paths))))
    index = {p: i for i, p in enumerate(paths)}
    zero = field.zero
    rows = []
    for rel in relations:
        for pre in paths_between(x, rel.src):
            for post in paths_between(rel.tgt, y):
                vec = [zero] * len(paths)
                for c, t in rel.terms:
                    full = pre.then(t).then(post)
                    vec[index[full]] = vec[index[full]] + field(c)
                if any(v != zero for v in vec):
                    rows.append(vec)
    if not rows:
        return HomBasis(field, paths, None, list(range(len(paths))))
    m = Matrix(field, len(rows), len(paths), [v for row in rows for v in row])
    rk, red, pivots = rref(m)
    reducers = []
    for r, pc in enumerate(pivots):
        row = [
            (j, red.data[r * red.cols + j])
            for j in range(len(paths))
            if j != pc and red.data[r * red.cols + j] != zero
        ]
        reducers.append((pc, row))
    pivot_set = set(pivots)
    free_idx = [i for i in range(len(paths)) if i not in pivot_set]
    return HomBasis(field, paths, reducers, free_idx)
