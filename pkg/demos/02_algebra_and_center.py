"""Structural matrix algebras, three products, and the center.

A_rho is the span of the matrix units E_ij with (i,j) in rho.  The
demo builds one over Q and over Q(i), multiplies in all three senses,
and computes the center two independent ways.
"""

from smakit import (
    QI,
    QQ,
    Matrix,
    ProductKind,
    SMA,
    format_mat,
    product,
    transitive_reflexive_closure,
)


def main():
    q = transitive_reflexive_closure(3, [(1, 2), (2, 1)])
    a = SMA(q, QQ)
    print("algebra:", a)
    print("basis units:",
          sorted(next(iter(m.support())) for m in a.basis_units()))
    print()

    # Membership is a support check.
    X = Matrix(QQ, [[1, 2, 0], [3, 4, 0], [0, 0, 5]])
    Y = Matrix(QQ, [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    bad = Matrix(QQ, [[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    print("X in A:", a.contains(X), "  E_13 in A:", a.contains(bad))
    print()

    # The three products: mul is XY, jordan is XY + YX, njordan is the
    # halved version.  The algebra is closed under all of them.
    for kind in ProductKind:
        Z = product(kind, X, Y)
        print(f"{kind.code:8s} X*Y =", Z)
        assert a.contains(Z)
    print()

    # Center, computed structurally: one central idempotent P_C per
    # class, summing the E_ii with i in C.
    print("central classes:", a.classes())
    for P in a.center_basis():
        print("central idempotent:")
        print(format_mat(P))
    # And computed by brute force, solving [Z, E_ij] = 0 over the
    # basis.  The two dimensions must agree.
    print("dim Z(A) =", len(a.center_basis()),
          "= oracle:", a.center_dimension_oracle())
    print()

    # Central idempotents really are central: P X = X P for members.
    P = a.center_basis()[0]
    assert P * X == X * P and P * Y == Y * P
    print("P commutes with the samples: ok")
    print()

    # Same order over the Gaussian rationals.  Arithmetic stays exact;
    # i is written as a payload pair.
    b = SMA(q, QI)
    i = QI.scalar((0, 1))
    G = Matrix.diagonal(QI, [i, -i, QI.scalar(1)])
    print("over Q(i):", b)
    print("G =", G)
    print("G*G =", G * G, " (squares to -1 on the tied block)")
    assert b.contains(G) and (G * G).entry(1, 1) == QI.scalar(-1)
    print()

    # Idempotents supported on a down-set of the order.
    rng_idem = a.diagonal_idempotent([1, 2])
    print("diagonal idempotent on {1,2}:", rng_idem)
    assert rng_idem.is_idempotent()


if __name__ == "__main__":
    main()
