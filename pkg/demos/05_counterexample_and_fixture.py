"""Where additivity fails: singleton classes and tied entries.

The forward direction of the theorem needs every central class to
have two or more elements.  This demo shows the converse machinery:
a concrete non-additive product-preserving injection whenever some
class is a singleton, a refusal when none is, the 5x5 tied-entry
algebra showing the result does not extend beyond spans of matrix
units, and the sweep harness that replays the whole story for every
quasi-order on [n].
"""

from smakit import (
    QQ,
    Matrix,
    ProductKind,
    SMA,
    TheoremCheckConfig,
    build_counterexample,
    example36_map,
    theorem_check,
    transitive_reflexive_closure,
    verify_additivity,
    verify_injectivity_on_samples,
    verify_product_preservation,
)
from smakit.errors import PreconditionError


def main():
    # A 3-chain plus an isolated point: class {4} is a singleton, so
    # cubing the (4,4) entry preserves both the standard and the
    # halved Jordan product, stays injective over Q, and is wildly
    # non-additive.
    q = transitive_reflexive_closure(4, [(1, 2), (2, 3), (1, 3)])
    a = SMA(q, QQ)
    print("algebra:", a, " classes:", a.classes())
    m = build_counterexample(a)
    print("counterexample:", m.label)
    for kind in (ProductKind.STANDARD, ProductKind.CIRCLE):
        v = verify_product_preservation(m, kind, sample_count=200,
                                        seed="demo5")
        print(f"  preserves {kind.code}: {'pass' if v.ok else 'FAIL'}")
    v = verify_injectivity_on_samples(m, sample_count=200, seed="demo5")
    print(f"  injective on samples: {'pass' if v.ok else 'FAIL'}")
    v = verify_additivity(m, seed="demo5")
    print(f"  additive: {'pass' if v.ok else 'FAIL (as it must be)'}")
    X, Y, lhs, rhs = v.witness
    print("  witness: phi(I+I) =", lhs, " but phi(I)+phi(I) =", rhs)
    print()

    # With every class >= 2 the construction is impossible, and the
    # builder says so instead of fabricating something weaker.
    tied = transitive_reflexive_closure(2, [(1, 2), (2, 1)])
    try:
        build_counterexample(SMA(tied, QQ))
    except PreconditionError as e:
        print("refused on", tied, "->", e)
    print()

    # The tied-entry fixture: a unital subalgebra of M_5 that contains
    # the identity and has a 2-dimensional center, but is not a span
    # of matrix units.  Cubing its x11 slot preserves both products
    # yet breaks additivity, even though nothing looks like a
    # singleton class from the center alone.
    alg, fix = example36_map()
    X = Matrix(QQ, [[1, 0, 0, 0, 0],
                    [2, 3, 4, 0, 0],
                    [0, 0, 5, 0, 0],
                    [0, 0, 4, 3, 6],
                    [0, 0, 0, 0, 7]])
    print("fixture member:", alg.contains(X))
    for kind in (ProductKind.STANDARD, ProductKind.CIRCLE):
        v = verify_product_preservation(fix, kind, sample_count=200,
                                        seed="demo5:f")
        print(f"  preserves {kind.code}: {'pass' if v.ok else 'FAIL'}")
    # The map writes x11 cubed at position (5,5), so summing two
    # members with x11 = 1 gives 8 there instead of 1 + 1.
    v = verify_additivity(fix, seed="demo5:f")
    X, Y, lhs, rhs = v.witness
    print("  additive:", v.ok, " witness entry (5,5):",
          lhs.entry(5, 5), "vs", rhs.entry(5, 5))
    print()

    # The sweep harness ties it together: for each quasi-order on [n],
    # either recover synthesized maps in all three modes or exhibit
    # the counterexample.  Rendering is deterministic per seed.
    report = theorem_check(TheoremCheckConfig(n=2, seed=42))
    print(report.render())


if __name__ == "__main__":
    main()
