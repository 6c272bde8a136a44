"""Canonical product-preserving maps: synthesize, serialize, recover.

The structure theorem says an injective map preserving one of the
three products on an algebra whose central classes all have >= 2
elements is forced into the shape

    phi(X) = T g*( sum_C omega_C(P_C X)^dagger_C ) T^-1

with T invertible in the algebra, g a transitive scaling cocycle,
omega_C a field embedding per class, and dagger an optional per-class
transpose (never in plain multiplicative mode).  This demo drives the
whole loop: draw a random spec, treat it as a black box, reconstruct
the spec from evaluations alone, and check the reconstruction agrees
everywhere it is sampled.
"""

from random import Random

from smakit import (
    QI,
    ProductKind,
    SMA,
    format_cmap,
    parse_cmap,
    recover_canonical,
    spec_to_map,
    synthesize_canonical,
    transitive_reflexive_closure,
    verify_additivity,
    verify_injectivity_on_samples,
    verify_product_preservation,
)


def main():
    # Two tied blocks, so both central classes have two elements and
    # the theorem applies.
    q = transitive_reflexive_closure(4, [(1, 2), (2, 1), (3, 4), (4, 3)])
    a = SMA(q, QI)
    print("algebra:", a, " classes:", a.classes())
    print()

    spec = synthesize_canonical(a, seed="demo4", mode=ProductKind.CIRCLE)
    m = spec_to_map(spec)
    print("synthesized map, circle mode:")
    print(format_cmap(spec))

    # The synthesized map honors its contract.
    for check in (verify_product_preservation(m, ProductKind.CIRCLE,
                                              seed="demo4:p"),
                  verify_additivity(m, seed="demo4:a"),
                  verify_injectivity_on_samples(m, seed="demo4:i")):
        print(f"  {check.check}: {'pass' if check.ok else 'FAIL'}")
    print()

    # The text form round-trips.
    text = format_cmap(spec)
    again = parse_cmap(text, q, QI)
    assert again.mode is spec.mode and again.T == spec.T
    print("cmap text parses back to an equal spec: ok")
    print()

    # Recovery sees only the evaluation function.  It rebuilds T, g,
    # omega and the transpose flags, then replays 100 fresh inputs.
    res = recover_canonical(m, a, ProductKind.CIRCLE, seed="demo4:r")
    print("recovered after", res.residual_samples, "exact residual checks")
    for rule in res.spec.per_class:
        flag = "transposed" if rule.transpose else "plain"
        print(f"  class {set(rule.members)}: omega={rule.omega.name}, {flag}")
    print("additivity certified per class:", res.additivity_certified)
    print()

    # The recovered pair (T, g) need not equal the synthesized one:
    # column scalings slide between T and g.  Functional agreement is
    # the contract.
    rng = Random("demo4:cmp")
    same = all(res.predict(X) == m.fn(X)
               for X in (a.random_from(rng) for _ in range(20)))
    print("recovered spec reproduces the box on 20 more inputs:", same)
    print()

    # Doubled Jordan mode rides on the halved one: psi(x) = 2 phi(x/2)
    # turns a diamond-preserving box into a circle-preserving one, and
    # the result records that it went through the reduction.
    spec_d = synthesize_canonical(a, seed="demo4:d", mode=ProductKind.DIAMOND)
    m_d = spec_to_map(spec_d)
    res_d = recover_canonical(m_d, a, ProductKind.DIAMOND, seed="demo4:rd")
    print("diamond-mode box recovered via the halving reduction:",
          res_d.diamond_reduced)
    print("residual checks:", res_d.residual_samples)


if __name__ == "__main__":
    main()
