"""Idempotent calculus inside an algebra.

Three capabilities on display: the four Jordan-product equivalences
for an idempotent against an arbitrary member, simultaneous inner
diagonalization of a commuting idempotent family, and splitting an
idempotent into rank-one pieces that stay inside the algebra.
"""

from random import Random

from smakit import (
    QQ,
    IdempotentFamily,
    Matrix,
    SMA,
    exact_rank,
    format_mat,
    inner_diagonalize,
    jordan_idempotent_tests,
    rank_one_decompose,
    transitive_reflexive_closure,
)


def main():
    q = transitive_reflexive_closure(3, [(1, 2), (1, 3), (2, 3)])
    a = SMA(q, QQ)
    rng = Random("demo3")

    # For an idempotent p and any member x, each of the four classical
    # statements (p circ x = 0 vs pxp-sandwich zero, p circ x = x vs
    # the two-sided identity, orthogonality, and domination) is checked
    # both ways.  The report carries every intermediate truth value.
    p = a.random_idempotent_from(rng)
    x = a.random_from(rng)
    rep = jordan_idempotent_tests(p, x)
    print("p =", p)
    print("x =", x)
    print("circ zero <-> two-sided zero:", rep.part_a_holds,
          f"(lhs {rep.circ_is_zero}, rhs {rep.two_sided_zero})")
    print("circ identity <-> two-sided identity:", rep.part_b_holds)
    print("all four equivalences hold:", rep.holds_all)
    print()

    # Orthogonal idempotents with a shared inner conjugator.  The
    # family must commute pairwise and live inside the algebra.
    S = a.random_invertible_from(rng)
    Si = S.inverse()
    e1 = S * Matrix.diagonal(QQ, [1, 0, 0]) * Si
    e2 = S * Matrix.diagonal(QQ, [0, 1, 1]) * Si
    fam = IdempotentFamily(a, [e1, e2])
    diag = inner_diagonalize(fam)
    print("family of", len(fam.members), "commuting idempotents")
    print("conjugator found inside the algebra:")
    print(format_mat(diag.S))
    for k, D in enumerate(diag.targets):
        print(f"S^-1 e{k + 1} S =", D)
        assert D.is_zero_one_diagonal()
    assert a.contains(diag.S) and diag.S.det() != QQ.scalar(0)
    print()

    # Rank-one splitting: P = sum of q_i with q_i q_j = delta q_i,
    # each piece rank one, supported where P allows.
    P = Matrix(QQ, [[1, 2, 0], [0, 0, 0], [0, 0, 1]])
    assert P.is_idempotent()
    pieces = rank_one_decompose(a, P, [1, 2, 3])
    print("P =", P, " rank", exact_rank(P))
    for piece in pieces:
        print("  piece:", piece, " rank", exact_rank(piece))
    total = pieces[0]
    for piece in pieces[1:]:
        total = total + piece
    assert total == P
    print("pieces sum back to P: ok")


if __name__ == "__main__":
    main()
