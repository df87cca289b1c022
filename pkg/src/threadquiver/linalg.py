"""Dense exact linear algebra over the rationals or a prime field.

Everything here is pure value code: matrices are immutable in practice
(no operation mutates its arguments), entries are exact field elements,
and all ranks/kernels are computed by fraction-exact Gaussian elimination.
A sparse homogeneous solver is provided for the large, very sparse
naturality systems that arise when computing hom spaces of representations.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch


class FpElement:
    """Residue mod a prime, with field arithmetic."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, FpElement):
            assert other.p == self.p
            return other.v
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FpElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FpElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FpElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FpElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return FpElement(self.v * pow(o, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return FpElement(o * pow(self.v, self.p - 2, self.p), self.p)

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v}#mod{self.p}"

    def __bool__(self):
        return self.v != 0


class RationalField:
    """Exact rationals; the default scalar field."""

    name = "q"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """Integers mod p, p prime (not verified beyond a trial division)."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, min(p, 1000)) if d * d <= p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"
        self.zero = FpElement(0, p)
        self.one = FpElement(1, p)

    def __call__(self, x) -> FpElement:
        if isinstance(x, FpElement):
            assert x.p == self.p
            return x
        if isinstance(x, Fraction):
            return FpElement(x.numerator, self.p) / FpElement(x.denominator, self.p)
        return FpElement(int(x), self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()


def field_by_name(name: str):
    if name == "q":
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise ValueError(f"unknown field {name!r}")


class Matrix:
    """Dense matrix with row-major entries over an exact field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows: int, cols: int, data: list):
        assert rows >= 0 and cols >= 0
        assert len(data) == rows * cols, (rows, cols, len(data))
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, [z] * (rows * cols))

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n)
        one = field.one
        for i in range(n):
            m.data[i * n + i] = one
        return m

    @classmethod
    def from_rows(cls, field, rows: list) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if rows else 0
        data = []
        for row in rows:
            assert len(row) == c, "ragged rows"
            data.extend(field(x) for x in row)
        return cls(field, r, c, data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i * self.cols + j]

    def __setitem__(self, ij, val):
        i, j = ij
        self.data[i * self.cols + j] = val

    def row(self, i: int) -> list:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> list:
        return self.data[j :: self.cols] if self.cols else []

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, list(self.data))

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.data)))

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for x in self.data)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return Matrix(
            self.field, self.rows, self.cols,
            [a + b for a, b in zip(self.data, other.data)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix subtraction shape mismatch")
        return Matrix(
            self.field, self.rows, self.cols,
            [a - b for a, b in zip(self.data, other.data)],
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [-a for a in self.data])

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, self.rows, self.cols, [c * a for a in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"matmul shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        out = Matrix.zeros(self.field, self.rows, other.cols)
        zero = self.field.zero
        oc = other.cols
        for i in range(self.rows):
            base = i * self.cols
            orow = i * oc
            for k in range(self.cols):
                a = self.data[base + k]
                if a == zero:
                    continue
                ob = k * oc
                od = out.data
                for j in range(oc):
                    b = other.data[ob + j]
                    if b != zero:
                        od[orow + j] = od[orow + j] + a * b
        return out

    def apply(self, vec: list) -> list:
        """Matrix times column vector (as a plain list)."""
        assert len(vec) == self.cols
        zero = self.field.zero
        out = [zero] * self.rows
        for i in range(self.rows):
            base = i * self.cols
            acc = zero
            for j, v in enumerate(vec):
                if v != zero:
                    acc = acc + self.data[base + j] * v
            out[i] = acc
        return out

    def transpose(self) -> "Matrix":
        out = Matrix.zeros(self.field, self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.data[j * self.rows + i] = self.data[i * self.cols + j]
        return out

    def __repr__(self):
        body = "; ".join(
            " ".join(str(self.data[i * self.cols + j]) for j in range(self.cols))
            for i in range(self.rows)
        )
        return f"Matrix({self.rows}x{self.cols}: {body})"


def hstack(parts: list[Matrix]) -> Matrix:
    assert parts
    field = parts[0].field
    rows = parts[0].rows
    if any(p.rows != rows for p in parts):
        raise DimensionMismatch("hstack row mismatch")
    cols = sum(p.cols for p in parts)
    out = Matrix.zeros(field, rows, cols)
    off = 0
    for p in parts:
        for i in range(rows):
            out.data[i * cols + off : i * cols + off + p.cols] = p.row(i)
        off += p.cols
    return out


def vstack(parts: list[Matrix]) -> Matrix:
    assert parts
    field = parts[0].field
    cols = parts[0].cols
    if any(p.cols != cols for p in parts):
        raise DimensionMismatch("vstack column mismatch")
    data = []
    for p in parts:
        data.extend(p.data)
    return Matrix(field, sum(p.rows for p in parts), cols, data)


def direct_sum(parts: list[Matrix]) -> Matrix:
    assert parts
    field = parts[0].field
    rows = sum(p.rows for p in parts)
    cols = sum(p.cols for p in parts)
    out = Matrix.zeros(field, rows, cols)
    ro = co = 0
    for p in parts:
        for i in range(p.rows):
            out.data[(ro + i) * cols + co : (ro + i) * cols + co + p.cols] = p.row(i)
        ro += p.rows
        co += p.cols
    return out


def rref(m: Matrix) -> tuple[int, Matrix, list[int]]:
    """Row-reduced echelon form.  Returns (rank, reduced matrix, pivot columns)."""
    r = m.copy()
    zero = m.field.zero
    pivots = []
    pr = 0
    for pc in range(r.cols):
        if pr >= r.rows:
            break
        # find a pivot in column pc at or below row pr
        hit = -1
        for i in range(pr, r.rows):
            if r.data[i * r.cols + pc] != zero:
                hit = i
                break
        if hit < 0:
            continue
        if hit != pr:
            a = hit * r.cols
            b = pr * r.cols
            r.data[a : a + r.cols], r.data[b : b + r.cols] = (
                r.data[b : b + r.cols],
                r.data[a : a + r.cols],
            )
        pv = r.data[pr * r.cols + pc]
        if pv != m.field.one:
            base = pr * r.cols
            for j in range(pc, r.cols):
                r.data[base + j] = r.data[base + j] / pv
        base = pr * r.cols
        for i in range(r.rows):
            if i == pr:
                continue
            f = r.data[i * r.cols + pc]
            if f == zero:
                continue
            ib = i * r.cols
            for j in range(pc, r.cols):
                v = r.data[base + j]
                if v != zero:
                    r.data[ib + j] = r.data[ib + j] - f * v
        pivots.append(pc)
        pr += 1
    return len(pivots), r, pivots


def rank(m: Matrix) -> int:
    return rref(m)[0]


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the right null space of m."""
    n, red, pivots = None, None, None
    rk, red, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    out = Matrix.zeros(m.field, m.cols, len(free))
    one = m.field.one
    for idx, fc in enumerate(free):
        out.data[fc * len(free) + idx] = one
        # pivot rows: x_pivot = -sum(red[row, free] * x_free)
        for row, pc in enumerate(pivots):
            out.data[pc * len(free) + idx] = -red.data[row * red.cols + fc]
    return out


def column_space_basis(m: Matrix) -> Matrix:
    """Columns of m forming a basis of the column space (original columns at pivot positions)."""
    rk, _, pivots = rref(m)
    out = Matrix.zeros(m.field, m.rows, rk)
    for idx, pc in enumerate(pivots):
        for i in range(m.rows):
            out.data[i * rk + idx] = m.data[i * m.cols + pc]
    return out


def solve(m: Matrix, b: list) -> list | None:
    """One exact solution of m x = b, or None when b is not in the image."""
    assert len(b) == m.rows
    aug = Matrix.zeros(m.field, m.rows, m.cols + 1)
    for i in range(m.rows):
        aug.data[i * (m.cols + 1) : i * (m.cols + 1) + m.cols] = m.row(i)
        aug.data[i * (m.cols + 1) + m.cols] = m.field(b[i])
    rk, red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    zero = m.field.zero
    x = [zero] * m.cols
    for row, pc in enumerate(pivots):
        x[pc] = red.data[row * red.cols + m.cols]
    return x


def solve_matrix(m: Matrix, b: Matrix) -> Matrix | None:
    """Solve m X = b columnwise; None when any column has no solution."""
    if b.rows != m.rows:
        raise DimensionMismatch("solve_matrix shape mismatch")
    cols = []
    for j in range(b.cols):
        x = solve(m, b.col(j))
        if x is None:
            return None
        cols.append(x)
    out = Matrix.zeros(m.field, m.cols, b.cols)
    for j, x in enumerate(cols):
        for i, v in enumerate(x):
            out.data[i * b.cols + j] = v
    return out


def coords_in_basis(basis: Matrix, vecs: Matrix) -> Matrix:
    """Express columns of vecs in the given column basis (must succeed)."""
    out = solve_matrix(basis, vecs)
    assert out is not None, "vectors not in span of basis"
    return out


def sparse_kernel(eqs: list[dict[int, object]], nvars: int, field) -> list[dict[int, object]]:
    """Kernel basis of a sparse homogeneous system.

    Each equation is {var index: coefficient}.  Chooses short pivots first to
    limit fill-in; the naturality systems this serves are near-chain shaped,
    so elimination stays close to linear.
    """
    zero = field.zero
    # normalize: drop zero coefficients
    work = []
    for eq in eqs:
        eq = {k: v for k, v in eq.items() if v != zero}
        if eq:
            work.append(eq)
    var_to_eqs: dict[int, set[int]] = {}
    for i, eq in enumerate(work):
        for v in eq:
            var_to_eqs.setdefault(v, set()).add(i)
    alive = set(range(len(work)))
    pivots: list[tuple[int, dict[int, object]]] = []  # (pivot var, row) in elimination order
    pivoted_vars: set[int] = set()
    while alive:
        # shortest live equation
        ei = min(alive, key=lambda i: (len(work[i]), i))
        eq = work[ei]
        alive.discard(ei)
        if not eq:
            continue
        # pivot on the variable appearing in the fewest other equations
        pv = min(eq, key=lambda v: (len(var_to_eqs.get(v, ())), v))
        pc = eq[pv]
        row = {v: c / pc for v, c in eq.items()}
        pivots.append((pv, row))
        pivoted_vars.add(pv)
        for oi in list(var_to_eqs.get(pv, ())):
            if oi == ei or oi not in alive:
                continue
            oeq = work[oi]
            f = oeq.get(pv)
            if f is None or f == zero:
                continue
            for v, c in row.items():
                nc = oeq.get(v, zero) - f * c
                if nc == zero:
                    if v in oeq:
                        del oeq[v]
                        var_to_eqs[v].discard(oi)
                else:
                    if v not in oeq:
                        var_to_eqs.setdefault(v, set()).add(oi)
                    oeq[v] = nc
            if pv in oeq:
                del oeq[pv]
                var_to_eqs[pv].discard(oi)
    free = [v for v in range(nvars) if v not in pivoted_vars]
    basis = []
    one = field.one
    for fv in free:
        vec = {fv: one}
        # pivots were eliminated against all later rows, so back-substitute in reverse
        for pv, row in reversed(pivots):
            acc = zero
            for v, c in row.items():
                if v == pv:
                    continue
                x = vec.get(v)
                if x is not None:
                    acc = acc + c * x
            if acc != zero:
                vec[pv] = -acc
        basis.append(vec)
    return basis
