"""Idempotent calculus and inner diagonalization.

The Jordan product encodes the idempotent order structure: p and q are
orthogonal iff p o q = 0 and p <= q iff p o q = p, with quantitative
versions for arbitrary second arguments.  jordan_idempotent_tests
checks all four equivalences by direct computation.

inner_diagonalize realizes the fact that a commuting family of
idempotents inside a structural matrix algebra can be conjugated to
diagonal form by an invertible element OF THE ALGEBRA, not merely of
M_n.  The conjugator is found constructively: joint eigenprojections
split the identity, per-central-class ranks constrain which diagonal
positions each eigenprojection can land on (rank(P_C Q) is invariant
under conjugation by invertible elements of the algebra since P_C is
central), and for each admissible assignment the linear system
S Q = D S is solved exactly; random integer points of the solution
space are tested for invertibility.  First success in lexicographic
order wins, so the result is deterministic given the seed.
"""

from __future__ import annotations

import itertools
from random import Random

from . import linalg
from .errors import DiagonalizationError, PreconditionError
from .sma import SMA, Matrix, ProductKind, product


def exact_rank(X: Matrix) -> int:
    return linalg.rank(X.field, X.rows, X.n)


class IdempotentRelationReport:
    """Both sides of the four Jordan-product equivalences for (p, a).

    Parts (a) and (b) apply to arbitrary a; parts (c) and (d) only
    when a is itself idempotent (a_is_idempotent records that).  Each
    part stores the Jordan-product side, the two-sided-products side,
    and whether they agree; holds_all is the lemma's claim.
    """

    __slots__ = ("a_is_idempotent",
                 "circ_is_zero", "two_sided_zero", "part_a_holds",
                 "circ_is_a", "two_sided_a", "part_b_holds",
                 "is_orthogonal", "part_c_holds",
                 "p_below_a", "circ_is_p", "part_d_holds")

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw.get(name))

    @property
    def holds_all(self) -> bool:
        parts = [self.part_a_holds, self.part_b_holds]
        if self.a_is_idempotent:
            parts += [self.part_c_holds, self.part_d_holds]
        return all(parts)

    def __repr__(self):
        tags = [f"a:{self.part_a_holds}", f"b:{self.part_b_holds}"]
        if self.a_is_idempotent:
            tags += [f"c:{self.part_c_holds}", f"d:{self.part_d_holds}"]
        return f"IdempotentRelationReport({', '.join(tags)})"


def jordan_idempotent_tests(p: Matrix, a: Matrix) -> IdempotentRelationReport:
    if not p.is_idempotent():
        raise PreconditionError("first argument must be idempotent")
    pa = p * a
    ap = a * p
    pap = pa * p
    circ = product(ProductKind.CIRCLE, p, a)
    zero = Matrix.zero(p.field, p.n)

    circ_is_zero = circ == zero
    two_sided_zero = pa == zero and ap == zero and pap == zero
    circ_is_a = circ == a
    two_sided_a = pa == a and ap == a and pap == a

    report = dict(
        circ_is_zero=circ_is_zero,
        two_sided_zero=two_sided_zero,
        part_a_holds=circ_is_zero == two_sided_zero,
        circ_is_a=circ_is_a,
        two_sided_a=two_sided_a,
        part_b_holds=circ_is_a == two_sided_a,
        a_is_idempotent=a.is_idempotent(),
    )
    if report["a_is_idempotent"]:
        orthogonal = pa == zero and ap == zero
        below = pa == p and ap == p
        report.update(
            is_orthogonal=orthogonal,
            part_c_holds=orthogonal == circ_is_zero,
            p_below_a=below,
            circ_is_p=circ == p,
            part_d_holds=below == (circ == p),
        )
    return IdempotentRelationReport(**report)


class IdempotentFamily:
    """A commuting family of idempotents inside an SMA; validated on
    construction."""

    __slots__ = ("algebra", "members")

    def __init__(self, algebra: SMA, members):
        members = tuple(members)
        for k, P in enumerate(members):
            algebra.require_member(P, f"family member {k}")
            if not P.is_idempotent():
                raise PreconditionError(f"family member {k} is not idempotent")
        for A, B in itertools.combinations(members, 2):
            if A * B != B * A:
                raise PreconditionError("family members do not commute")
        self.algebra = algebra
        self.members = members

    def __len__(self):
        return len(self.members)


class Diagonalizer:
    """S in A_rho^x with S member_k S^{-1} = targets[k], each target a
    0/1 diagonal matrix."""

    __slots__ = ("S", "S_inverse", "targets")

    def __init__(self, S, S_inverse, targets):
        self.S = S
        self.S_inverse = S_inverse
        self.targets = tuple(targets)


def _multiset_sequences(counts):
    """All distinct sequences with counts[k] occurrences of label k,
    in lexicographic order."""
    total = sum(counts)

    def rec(prefix, remaining):
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for k, c in enumerate(remaining):
            if c:
                remaining[k] -= 1
                prefix.append(k)
                yield from rec(prefix, remaining)
                prefix.pop()
                remaining[k] += 1

    yield from rec([], list(counts))


def inner_diagonalize(family: IdempotentFamily, seed=0) -> Diagonalizer:
    """Conjugate the family to diagonal 0/1 matrices by an invertible
    element of its algebra.  Deterministic given the seed; raises
    DiagonalizationError only if the search budget is exhausted, which
    existence of the conjugator makes a bug signal rather than a data
    condition."""
    a = family.algebra
    f = a.field
    n = a.n
    ident = Matrix.identity(f, n)
    k = len(family.members)

    if k == 0:
        return Diagonalizer(ident, ident, [])

    # joint eigenprojections: for each sign pattern over the members,
    # multiply P_i or I - P_i; nonzero ones are orthogonal idempotents
    # summing to I
    eigen = []
    for eps in itertools.product((0, 1), repeat=k):
        Q = ident
        for bit, P in zip(eps, family.members):
            Q = Q * (P if bit else ident - P)
        if not Q.is_zero:
            eigen.append((eps, Q))
    total = Matrix.zero(f, n)
    for _, Q in eigen:
        total = total + Q
    if total != ident:
        raise DiagonalizationError("eigenprojections do not sum to I")

    # per-class rank constraints: rank(P_C Q_eps) counts how many
    # diagonal positions of class C the eigenprojection must occupy
    classes = a.classes().classes
    class_counts = []
    for cls in classes:
        P_C = a.diagonal_idempotent(cls)
        counts = [exact_rank(P_C * Q) for _, Q in eigen]
        if sum(counts) != len(cls):
            raise DiagonalizationError(
                f"class {cls} rank counts {counts} do not sum to |C|")
        class_counts.append(counts)

    pairs = sorted(a.order.pairs)
    col = {pair: c for c, pair in enumerate(pairs)}
    assignment_index = 0
    for distribution in itertools.product(
            *[_multiset_sequences(counts) for counts in class_counts]):
        # positions each eigenprojection receives, across all classes
        targets = [set() for _ in eigen]
        for cls, labels in zip(classes, distribution):
            for member, label in zip(cls, labels):
                targets[label].add(member)

        rows = []
        is0 = f.k_is0
        for (_, Q), T_eps in zip(eigen, targets):
            for r in range(1, n + 1):
                in_target = r in T_eps
                for c in range(1, n + 1):
                    row = [f.p_zero] * len(pairs)
                    for kk in range(1, n + 1):
                        if (r, kk) in a.order.pairs:
                            row[col[(r, kk)]] = Q.rows[kk - 1][c - 1]
                    if in_target and (r, c) in a.order.pairs:
                        cc = col[(r, c)]
                        row[cc] = f.k_sub(row[cc], f.p_one)
                    if any(not is0(x) for x in row):
                        rows.append(row)
        basis = linalg.nullspace(f, rows, len(pairs))

        if basis:
            member_targets = []
            for eps_index in range(k):
                diag = [0] * n
                for (eps, _), T_eps in zip(eigen, targets):
                    if eps[eps_index]:
                        for m in T_eps:
                            diag[m - 1] = 1
                member_targets.append(Matrix.diagonal(f, diag))
            # canonical candidate first: sum of P_{T_eps} Q_eps is an
            # intertwiner for every assignment (both factor families
            # are orthogonal), and it is the identity whenever the
            # family is already diagonal; random draws are the
            # fallback when it is singular
            canonical = Matrix.zero(f, n)
            for (_, Q), T_eps in zip(eigen, targets):
                canonical = canonical + a.diagonal_idempotent(T_eps) * Q
            candidates = [canonical.rows]
            rng = Random(f"diag:{seed}:{assignment_index}")

            def random_candidate(draw):
                bound = 1 + draw // 8
                coeffs = [rng.randint(-bound, bound) for _ in basis]
                vec = [f.p_zero] * len(pairs)
                for c_int, bvec in zip(coeffs, basis):
                    if c_int == 0:
                        continue
                    c_pay = f.k_from_int(c_int)
                    vec = [f.k_add(v, f.k_mul(c_pay, b))
                           for v, b in zip(vec, bvec)]
                S_rows = [[f.p_zero] * n for _ in range(n)]
                for pair, c in col.items():
                    S_rows[pair[0] - 1][pair[1] - 1] = vec[c]
                return S_rows

            for draw in range(64):
                S_rows = candidates.pop() if candidates \
                    else random_candidate(draw)
                if f.k_is0(linalg.det(f, S_rows)):
                    continue
                S = Matrix._new(f, n, S_rows)
                S_inv = S.inverse()
                for P, D in zip(family.members, member_targets):
                    if S * P * S_inv != D:
                        raise DiagonalizationError(
                            "solved conjugator failed verification")
                if not a.contains(S):
                    raise DiagonalizationError("conjugator left the algebra")
                return Diagonalizer(S, S_inv, member_targets)
        assignment_index += 1
    raise DiagonalizationError(
        "no invertible conjugator found over all admissible assignments")


def rank_one_decompose(a: SMA, P: Matrix, S_support) -> list:
    """Split an idempotent P supported in S x S into rank-one
    idempotents of A_rho, each still supported in S x S.

    Diagonalizes the pair {P, I - P_S} inside the algebra; the
    conjugated-back diagonal units sitting under P are the pieces.
    Each piece is orthogonal to I - P_S by construction, which forces
    its support into S x S.
    """
    S_set = set(S_support)
    a.require_member(P, "idempotent")
    if not P.is_idempotent():
        raise PreconditionError("P must be idempotent")
    if not P.support() <= {(i, j) for i in S_set for j in S_set}:
        raise PreconditionError(
            f"support of P must lie in S x S with S={sorted(S_set)}")

    P_S_perp = Matrix.identity(a.field, a.n) - a.diagonal_idempotent(S_set)
    family = IdempotentFamily(a, [P, P_S_perp])
    diag = inner_diagonalize(family, seed="rank_one")
    positions = sorted(diag.targets[0].diagonal_support())

    pieces = []
    for j in positions:
        E = Matrix.unit(a.field, a.n, j, j)
        Q = diag.S_inverse * E * diag.S
        pieces.append(Q)

    box = {(i, j) for i in S_set for j in S_set}
    total = Matrix.zero(a.field, a.n)
    for Q in pieces:
        if not (Q.is_idempotent() and exact_rank(Q) == 1
                and a.contains(Q) and Q.support() <= box):
            raise DiagonalizationError(
                "rank-one piece failed its postconditions")
        total = total + Q
    for Q1, Q2 in itertools.combinations(pieces, 2):
        if not (Q1 * Q2).is_zero or not (Q2 * Q1).is_zero:
            raise DiagonalizationError("rank-one pieces are not orthogonal")
    if total != P:
        raise DiagonalizationError("rank-one pieces do not sum to P")
    return pieces
