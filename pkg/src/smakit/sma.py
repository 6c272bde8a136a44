"""Structural matrix algebras.

A quasi-order rho on [n] spans the algebra A_rho = <E_ij : (i,j) in
rho> inside M_n; these are exactly the subalgebras of M_n containing
all diagonal matrices.  This module provides the dense exact Matrix
type, the three products (standard, Jordan, normalized Jordan), the
diagonal idempotents P_S, the center and its two independent dimension
computations, and transitive maps g with their induced automorphisms.

Matrices are immutable and dense; at desk scale (n <= 8) sparse
bookkeeping would cost more than it saves.  Rows hold raw field
payloads, so arithmetic inner loops never touch wrapper objects.
"""

from __future__ import annotations

import enum
from random import Random

from gmpy2 import mpq

from . import linalg
from .errors import (FieldMismatchError, MembershipError, ParseError,
                     QuasiOrderError, SearchBudgetError)
from .quasiorder import QuasiOrder
from .scalars import (GAUSSIAN, FieldDescriptor, Scalar, format_scalar,
                      parse_field_tag, parse_scalar)

_MPQ0 = mpq(0)


class Matrix:
    """Immutable n x n matrix over one of the exact fields.

    Entries are stored as raw payloads in a tuple of row tuples;
    entry() wraps them as Scalars.  All indices in the public API are
    1-based, matching matrix-unit notation.
    """

    __slots__ = ("n", "field", "rows")

    def __init__(self, field: FieldDescriptor, rows):
        coerce = field.coerce_payload
        tup = tuple(tuple(coerce(x) for x in row) for row in rows)
        n = len(tup)
        if any(len(r) != n for r in tup):
            raise ValueError("matrix must be square")
        self.field = field
        self.n = n
        self.rows = tup

    @classmethod
    def _new(cls, field, n, rows):
        # internal fast path: rows are lists of already-valid payloads
        m = object.__new__(cls)
        m.field = field
        m.n = n
        m.rows = tuple(tuple(r) for r in rows)
        return m

    @classmethod
    def zero(cls, field, n):
        z = field.p_zero
        return cls._new(field, n, [[z] * n for _ in range(n)])

    @classmethod
    def identity(cls, field, n):
        z, o = field.p_zero, field.p_one
        return cls._new(field, n,
                        [[o if i == j else z for j in range(n)]
                         for i in range(n)])

    @classmethod
    def unit(cls, field, n, i, j):
        """The matrix unit E_ij, 1-based."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"unit index ({i},{j}) out of range for n={n}")
        z = field.p_zero
        rows = [[z] * n for _ in range(n)]
        rows[i - 1][j - 1] = field.p_one
        return cls._new(field, n, rows)

    @classmethod
    def diagonal(cls, field, values):
        vals = [field.coerce_payload(v) for v in values]
        n = len(vals)
        z = field.p_zero
        rows = [[z] * n for _ in range(n)]
        for i, v in enumerate(vals):
            rows[i][i] = v
        return cls._new(field, n, rows)

    def _check_compatible(self, other):
        if self.field != other.field:
            raise FieldMismatchError(
                f"mixing matrices over {self.field} and {other.field}")
        if self.n != other.n:
            raise ValueError(f"size mismatch {self.n} vs {other.n}")

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.rows[i - 1][j - 1])

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_compatible(other)
        if self.field.code == GAUSSIAN:
            return Matrix._new(
                self.field, self.n,
                [[(a[0] + b[0], a[1] + b[1]) for a, b in zip(ra, rb)]
                 for ra, rb in zip(self.rows, other.rows)])
        add = self.field.k_add
        return Matrix._new(self.field, self.n,
                           [[add(a, b) for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_compatible(other)
        if self.field.code == GAUSSIAN:
            return Matrix._new(
                self.field, self.n,
                [[(a[0] - b[0], a[1] - b[1]) for a, b in zip(ra, rb)]
                 for ra, rb in zip(self.rows, other.rows)])
        sub = self.field.k_sub
        return Matrix._new(self.field, self.n,
                           [[sub(a, b) for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        neg = self.field.k_neg
        return Matrix._new(self.field, self.n,
                           [[neg(a) for a in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check_compatible(other)
            f = self.field
            n = self.n
            A = self.rows
            B = other.rows
            if f.code == GAUSSIAN:
                # inlined complex arithmetic: separate re/im
                # accumulators keep the inner loop free of per-scalar
                # closure calls and tuple allocations
                out = []
                for i in range(n):
                    Ai = A[i]
                    re = [_MPQ0] * n
                    im = [_MPQ0] * n
                    for k in range(n):
                        ar, ai = Ai[k]
                        if not (ar or ai):
                            continue
                        Bk = B[k]
                        for j in range(n):
                            br, bi = Bk[j]
                            if br or bi:
                                re[j] += ar * br - ai * bi
                                im[j] += ar * bi + ai * br
                    out.append(list(zip(re, im)))
                return Matrix._new(f, n, out)
            mul = f.k_mul
            add = f.k_add
            is0 = f.k_is0
            zero = f.p_zero
            live = [not all(is0(x) for x in Bk) for Bk in B]
            out = [[zero] * n for _ in range(n)]
            for i in range(n):
                Ai = A[i]
                Oi = out[i]
                for k in range(n):
                    if not live[k]:
                        continue
                    a = Ai[k]
                    if is0(a):
                        continue
                    Bk = B[k]
                    for j in range(n):
                        Oi[j] = add(Oi[j], mul(a, Bk[j]))
            return Matrix._new(f, n, out)
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def scale(self, s):
        f = self.field
        p = f.coerce_payload(s)
        if f.code == GAUSSIAN:
            sr, si = p
            return Matrix._new(
                f, self.n,
                [[(sr * ar - si * ai, sr * ai + si * ar)
                  for ar, ai in row] for row in self.rows])
        mul = f.k_mul
        return Matrix._new(self.field, self.n,
                           [[mul(p, a) for a in row] for row in self.rows])

    def transpose(self):
        return Matrix._new(self.field, self.n, list(zip(*self.rows)))

    def trace(self) -> Scalar:
        f = self.field
        acc = f.p_zero
        for i in range(self.n):
            acc = f.k_add(acc, self.rows[i][i])
        return Scalar(f, acc)

    def map_payloads(self, fn):
        return Matrix._new(self.field, self.n,
                           [[fn(a) for a in row] for row in self.rows])

    def map_entries(self, fn):
        """fn: Scalar -> Scalar, applied entrywise."""
        f = self.field
        return Matrix._new(
            f, self.n,
            [[f.coerce_payload(fn(Scalar(f, a))) for a in row]
             for row in self.rows])

    def support(self) -> frozenset:
        is0 = self.field.k_is0
        return frozenset((i + 1, j + 1)
                         for i, row in enumerate(self.rows)
                         for j, a in enumerate(row) if not is0(a))

    @property
    def is_zero(self) -> bool:
        is0 = self.field.k_is0
        return all(is0(a) for row in self.rows for a in row)

    def is_idempotent(self) -> bool:
        return self * self == self

    def is_diagonal(self) -> bool:
        is0 = self.field.k_is0
        return all(is0(a) for i, row in enumerate(self.rows)
                   for j, a in enumerate(row) if i != j)

    def is_zero_one_diagonal(self) -> bool:
        f = self.field
        if not self.is_diagonal():
            return False
        return all(f.k_is0(row[i]) or row[i] == f.p_one
                   for i, row in enumerate(self.rows))

    def diagonal_support(self) -> frozenset:
        """1-based indices i with a nonzero (i,i) entry."""
        is0 = self.field.k_is0
        return frozenset(i + 1 for i in range(self.n)
                         if not is0(self.rows[i][i]))

    def det(self) -> Scalar:
        return Scalar(self.field, linalg.det(self.field, self.rows))

    def rank(self) -> int:
        return linalg.rank(self.field, self.rows, self.n)

    def inverse(self) -> "Matrix":
        inv = linalg.invert(self.field, self.rows)
        return Matrix._new(self.field, self.n, inv)

    def __eq__(self, other):
        return (isinstance(other, Matrix)
                and self.field == other.field and self.n == other.n
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.n, self.rows))

    def __repr__(self):
        body = "; ".join(
            " ".join(format_scalar(Scalar(self.field, a)) for a in row)
            for row in self.rows)
        return f"[{body}]"


class ProductKind(enum.Enum):
    """The three products the theorem speaks about.  The code values
    are the mode tags used in .cmap files and CLI flags."""

    STANDARD = "mul"
    DIAMOND = "jordan"
    CIRCLE = "njordan"

    @property
    def code(self) -> str:
        return self.value

    @classmethod
    def from_code(cls, code: str) -> "ProductKind":
        for kind in cls:
            if kind.value == code:
                return kind
        raise ParseError(f"unknown product mode {code!r} "
                         f"(expected mul, jordan or njordan)")


def product(kind: ProductKind, X: Matrix, Y: Matrix) -> Matrix:
    """Standard XY, Diamond XY+YX, or Circle (XY+YX)/2."""
    if kind is ProductKind.STANDARD:
        return X * Y
    both = X * Y + Y * X
    if kind is ProductKind.DIAMOND:
        return both
    return both.scale(Scalar(X.field, X.field.p_half))


class SMA:
    """The structural matrix algebra A_rho over a chosen field."""

    __slots__ = ("order", "field", "_units", "_center")

    def __init__(self, order: QuasiOrder, field: FieldDescriptor):
        self.order = order
        self.field = field
        self._units = None
        self._center = None

    @property
    def n(self) -> int:
        return self.order.n

    def classes(self):
        return self.order.classes()

    def __eq__(self, other):
        return (isinstance(other, SMA)
                and self.order == other.order and self.field == other.field)

    def __hash__(self):
        return hash((self.order, self.field))

    def __repr__(self):
        return f"SMA({self.order!r}, {self.field.tag})"

    def contains(self, X: Matrix) -> bool:
        if X.field != self.field:
            raise FieldMismatchError(
                f"matrix over {X.field} tested against algebra over {self.field}")
        if X.n != self.n:
            raise MembershipError(
                f"matrix size {X.n} does not match algebra size {self.n}")
        return X.support() <= self.order.pairs

    def require_member(self, X: Matrix, what="matrix"):
        if not self.contains(X):
            outside = sorted(X.support() - self.order.pairs)
            raise MembershipError(
                f"{what} has support outside the quasi-order at {outside[0]}")

    def basis_units(self):
        """E_ij for (i,j) in rho, in sorted pair order."""
        if self._units is None:
            self._units = tuple(
                Matrix.unit(self.field, self.n, i, j)
                for i, j in sorted(self.order.pairs))
        return self._units

    # spanning_elements is the generic name verification and recovery
    # use; for an SMA the matrix units are a spanning set.
    spanning_elements = basis_units

    def diagonal_idempotent(self, S) -> Matrix:
        S = set(S)
        if not S <= set(range(1, self.n + 1)):
            raise ValueError(f"index set {sorted(S)} not within [{self.n}]")
        return Matrix.diagonal(
            self.field,
            [1 if i in S else 0 for i in range(1, self.n + 1)])

    def center_basis(self):
        """The central idempotents P_C, one per central class."""
        if self._center is None:
            self._center = tuple(self.diagonal_idempotent(c)
                                 for c in self.classes())
        return self._center

    def center_dimension_oracle(self) -> int:
        """Dimension of {D in A_rho : D E_ij = E_ij D for (i,j) in rho},
        by exact elimination, ignoring the class machinery entirely."""
        pairs = sorted(self.order.pairs)
        col = {pair: k for k, pair in enumerate(pairs)}
        f = self.field
        rows = []
        # commutator with E_ij vanishes iff D_ri = 0 for r != i with
        # (r,i) in rho, D_jc = 0 for c != j with (j,c) in rho, and
        # D_ii = D_jj
        for (i, j) in pairs:
            for r in range(1, self.n + 1):
                if r != i and (r, i) in self.order.pairs:
                    row = [f.p_zero] * len(pairs)
                    row[col[(r, i)]] = f.p_one
                    rows.append(row)
            for c in range(1, self.n + 1):
                if c != j and (j, c) in self.order.pairs:
                    row = [f.p_zero] * len(pairs)
                    row[col[(j, c)]] = f.p_one
                    rows.append(row)
            if i != j:
                row = [f.p_zero] * len(pairs)
                row[col[(i, i)]] = f.p_one
                row[col[(j, j)]] = f.k_neg(f.p_one)
                rows.append(row)
        if not rows:
            return len(pairs)
        return len(pairs) - linalg.rank(f, rows, len(pairs))

    def random_from(self, rng: Random, bound: int = 9) -> Matrix:
        """Draw a random element of the algebra from an rng stream."""
        f = self.field
        rows = [[f.p_zero] * self.n for _ in range(self.n)]
        for i, j in sorted(self.order.pairs):
            rows[i - 1][j - 1] = f.k_random(rng, bound)
        return Matrix._new(f, self.n, rows)

    def random_element(self, seed, bound: int = 9) -> Matrix:
        return self.random_from(Random(f"element:{seed}"), bound)

    def random_invertible_from(self, rng: Random, bound: int = 9) -> Matrix:
        is0 = self.field.k_is0
        for _ in range(64):
            X = self.random_from(rng, bound)
            # nonzero diagonal is necessary in a triangular-like
            # pattern and cheap to enforce before the exact det check
            rows = [list(r) for r in X.rows]
            for i in range(self.n):
                while is0(rows[i][i]):
                    rows[i][i] = self.field.k_random(rng, bound)
            X = Matrix._new(self.field, self.n, rows)
            if not is0(linalg.det(self.field, X.rows)):
                return X
        raise SearchBudgetError(
            "no invertible element found in 64 draws")

    def random_invertible(self, seed, bound: int = 9) -> Matrix:
        return self.random_invertible_from(Random(f"invertible:{seed}"), bound)

    def random_idempotent_from(self, rng: Random, bound: int = 4,
                               support=None) -> Matrix:
        """T D T^{-1} for a random 0/1 diagonal D and T in A_rho^x.

        With a support set S, both D and T are confined to S x S (T is
        the identity outside), so the result is an idempotent of A_rho
        supported in S x S.
        """
        n = self.n
        S = set(range(1, n + 1)) if support is None else set(support)
        f = self.field
        diag = [1 if i in S and rng.random() < 0.5 else 0
                for i in range(1, n + 1)]
        D = Matrix.diagonal(f, diag)
        is0 = f.k_is0
        for _ in range(64):
            rows = [[f.p_zero] * n for _ in range(n)]
            for i in range(1, n + 1):
                rows[i - 1][i - 1] = f.p_one
            for i, j in sorted(self.order.pairs):
                if i in S and j in S:
                    rows[i - 1][j - 1] = f.k_random(rng, bound)
            for i in S:
                while is0(rows[i - 1][i - 1]):
                    rows[i - 1][i - 1] = f.k_random(rng, bound)
            T = Matrix._new(f, n, rows)
            if not is0(linalg.det(f, T.rows)):
                return T * D * T.inverse()
        raise SearchBudgetError("no invertible conjugator found in 64 draws")


class TransitiveMap:
    """Nonzero scalars g(i,j) on rho with g(i,j)g(j,k) = g(i,k).

    Construction requires full coverage of rho and nonzero values but
    does not force the cocycle law; validate_transitive_map checks it
    and reports a witness, so invalid candidate data can be examined.
    """

    __slots__ = ("order", "field", "values")

    def __init__(self, order: QuasiOrder, field: FieldDescriptor, values):
        vals = {}
        for pair, v in values.items():
            p = field.coerce_payload(v)
            vals[pair] = p
        for pair in order.pairs:
            if pair not in vals:
                raise QuasiOrderError(
                    f"transitive map missing value at {pair}")
            if field.k_is0(vals[pair]):
                raise QuasiOrderError(
                    f"transitive map has zero value at {pair}")
        extra = set(vals) - order.pairs
        if extra:
            raise QuasiOrderError(
                f"transitive map defined outside rho at {sorted(extra)[0]}")
        self.order = order
        self.field = field
        self.values = vals

    def g(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.values[(i, j)])

    def inverse(self) -> "TransitiveMap":
        inv = self.field.k_inv
        return TransitiveMap(
            self.order, self.field,
            {pair: inv(v) for pair, v in self.values.items()})

    def __eq__(self, other):
        return (isinstance(other, TransitiveMap)
                and self.order == other.order and self.field == other.field
                and self.values == other.values)

    def __repr__(self):
        vals = ", ".join(
            f"g({i},{j})={format_scalar(self.g(i, j))}"
            for i, j in sorted(self.order.strict))
        return f"TransitiveMap({vals or 'trivial'})"


def validate_transitive_map(g: TransitiveMap):
    """Return (True, None) or (False, ((i,j),(j,k))) for the first
    composable pair violating g(i,j)g(j,k) = g(i,k)."""
    f = g.field
    mul = f.k_mul
    for i, j in sorted(g.order.pairs):
        for k in range(1, g.order.n + 1):
            if (j, k) in g.order.pairs:
                if mul(g.values[(i, j)], g.values[(j, k)]) != g.values[(i, k)]:
                    return False, ((i, j), (j, k))
    return True, None


def trivial_transitive_map(a: SMA) -> TransitiveMap:
    one = a.field.p_one
    return TransitiveMap(a.order, a.field,
                         {pair: one for pair in a.order.pairs})


def random_transitive_map(a: SMA, rng: Random, bound: int = 9) -> TransitiveMap:
    """g(i,j) = c_i / c_j for random nonzero c_i: automatically a
    cocycle.  (Not every transitive map need have this form; the
    validator never assumes it.)"""
    f = a.field
    cs = []
    for _ in range(a.n):
        c = f.k_random(rng, bound)
        while f.k_is0(c):
            c = f.k_random(rng, bound)
        cs.append(c)
    div = f.k_div
    values = {(i, j): div(cs[i - 1], cs[j - 1]) for i, j in a.order.pairs}
    g = TransitiveMap(a.order, f, values)
    ok, witness = validate_transitive_map(g)
    if not ok:
        raise AssertionError(f"generated map failed validation at {witness}")
    return g


def apply_induced_automorphism(g: TransitiveMap, X: Matrix,
                               inverse: bool = False) -> Matrix:
    """g*(X): scale X_ij by g(i,j) (or its inverse); an automorphism
    of A_rho because g is a cocycle."""
    algebra = SMA(g.order, g.field)
    algebra.require_member(X, "automorphism input")
    f = g.field
    mul = f.k_mul
    inv = f.k_inv
    rows = [list(r) for r in X.rows]
    for i, j in g.order.pairs:
        v = g.values[(i, j)]
        if inverse:
            v = inv(v)
        rows[i - 1][j - 1] = mul(v, rows[i - 1][j - 1])
    return Matrix._new(f, X.n, rows)


def format_mat(X: Matrix) -> str:
    lines = [f"n {X.n} field {X.field.tag}"]
    for row in X.rows:
        lines.append(" ".join(
            format_scalar(Scalar(X.field, a)) for a in row))
    return "\n".join(lines) + "\n"


def parse_mat(text: str) -> Matrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty .mat input")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "field":
        raise ParseError(
            f"bad .mat header {lines[0]!r}, expected 'n <int> field <tag>'")
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError(f"bad matrix size {head[1]!r}") from None
    field = parse_field_tag(head[3])
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        cells = ln.split()
        if len(cells) != n:
            raise ParseError(f"expected {n} entries per row, got {ln!r}")
        rows.append([parse_scalar(c, field).payload for c in cells])
    return Matrix._new(field, n, rows)


def format_gmap(g: TransitiveMap) -> str:
    lines = [f"n {g.order.n} field {g.field.tag}"]
    for i, j in sorted(g.order.strict):
        lines.append(f"{i} {j} {format_scalar(g.g(i, j))}")
    return "\n".join(lines) + "\n"


def parse_gmap(text: str, order: QuasiOrder) -> TransitiveMap:
    """Read a .gmap file: strict-part values, diagonal implied 1.  The
    listed pairs must cover exactly the strict part of the order."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty .gmap input")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "field":
        raise ParseError(
            f"bad .gmap header {lines[0]!r}, expected 'n <int> field <tag>'")
    n = int(head[1])
    if n != order.n:
        raise ParseError(f".gmap size {n} does not match quasi-order "
                         f"size {order.n}")
    field = parse_field_tag(head[3])
    values = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError(f"bad .gmap line {ln!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad .gmap line {ln!r}") from None
        values[(i, j)] = parse_scalar(parts[2], field).payload
    listed = set(values)
    if listed != order.strict:
        diff = sorted(listed ^ order.strict)[0]
        raise ParseError(
            f".gmap pairs must cover exactly the strict part; "
            f"mismatch at {diff}")
    for i in range(1, n + 1):
        values[(i, i)] = field.p_one
    return TransitiveMap(order, field, values)
