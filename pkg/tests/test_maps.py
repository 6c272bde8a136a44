"""Canonical maps: evaluation, synthesis, verification, black-box
recovery, counterexamples, the tied-entry fixture, file formats."""

from fractions import Fraction
from random import Random

import pytest

from smakit import (CanonicalMapSpec, ClassRule, EvaluableMap,
                    Example36Algebra, Matrix, MembershipError, ParseError,
                    PreconditionError, ProductKind, QI, QQ, RecoveryError,
                    SMA, TransitiveMap, build_counterexample, cube_map,
                    eval_canonical, example36_map, exact_rank, format_cmap,
                    identity_map, parse_cmap, prime_field, product,
                    recover_canonical, spec_to_map, synthesize_canonical,
                    transitive_reflexive_closure, validate_quasi_order,
                    verify_additivity, verify_injectivity_on_samples,
                    verify_product_preservation)

F5 = prime_field(5)


def diag(n):
    return {(i, i) for i in range(1, n + 1)}


def chain(n, field=QQ):
    pairs = {(i, j) for i in range(1, n + 1) for j in range(i, n + 1)}
    return SMA(validate_quasi_order(n, pairs), field)


def full(n, field=QQ):
    pairs = {(i, j) for i in range(1, n + 1) for j in range(1, n + 1)}
    return SMA(validate_quasi_order(n, pairs), field)


def unit(f, n, i, j):
    return Matrix.unit(f, n, i, j)


def trivial_g(a):
    return TransitiveMap(a.order, a.field,
                         {p: 1 for p in a.order.pairs})


def identity_spec(a, mode=ProductKind.STANDARD):
    rules = [ClassRule(c, identity_map(a.field), False)
             for c in a.classes()]
    return CanonicalMapSpec(a, Matrix.identity(a.field, a.n),
                            trivial_g(a), rules, mode)


def test_eval_identity_spec_frozen():
    a = full(2)
    s = identity_spec(a)
    X = a.random_element("id-spec")
    assert eval_canonical(s, X) == X


def test_eval_transpose_frozen():
    a = full(2)
    rules = [ClassRule(c, identity_map(QQ), True) for c in a.classes()]
    s = CanonicalMapSpec(a, Matrix.identity(QQ, 2), trivial_g(a), rules,
                         ProductKind.CIRCLE)
    assert eval_canonical(s, unit(QQ, 2, 1, 2)) == unit(QQ, 2, 2, 1)


def test_eval_conjugation_frozen():
    a = full(2, QI)
    from smakit import conjugation_map
    rules = [ClassRule(c, conjugation_map(QI), False)
             for c in a.classes()]
    s = CanonicalMapSpec(a, Matrix.identity(QI, 2), trivial_g(a), rules,
                         ProductKind.STANDARD)
    i_unit = QI.scalar((Fraction(0), Fraction(1)))
    X = unit(QI, 2, 1, 1).scale(i_unit)
    assert eval_canonical(s, X) == X.scale(QI.scalar(-1))


def test_spec_rejects_transpose_in_standard_mode():
    a = full(2)
    rules = [ClassRule(c, identity_map(QQ), True) for c in a.classes()]
    with pytest.raises(PreconditionError):
        CanonicalMapSpec(a, Matrix.identity(QQ, 2), trivial_g(a), rules,
                         ProductKind.STANDARD)


def test_spec_rejects_cube_on_multi_element_class():
    a = full(2)
    rules = [ClassRule(c, cube_map(QQ), False) for c in a.classes()]
    with pytest.raises(PreconditionError):
        CanonicalMapSpec(a, Matrix.identity(QQ, 2), trivial_g(a), rules,
                         ProductKind.STANDARD)


def test_spec_rejects_cocycle_violation():
    a = chain(3)
    values = {p: 1 for p in a.order.pairs}
    values[(1, 3)] = 7
    g = TransitiveMap(a.order, QQ, values)
    rules = [ClassRule(c, identity_map(QQ), False) for c in a.classes()]
    with pytest.raises(PreconditionError):
        CanonicalMapSpec(a, Matrix.identity(QQ, 3), g, rules,
                         ProductKind.STANDARD)


def test_eval_rejects_non_member():
    a = chain(2)
    s = identity_spec(a)
    with pytest.raises(MembershipError):
        eval_canonical(s, unit(QQ, 2, 2, 1))


@pytest.mark.parametrize("field", (QQ, QI, F5))
@pytest.mark.parametrize("mode", list(ProductKind))
def test_synthesized_maps_preserve_their_product(field, mode):
    a = full(3, field)
    for k in range(3):
        spec = synthesize_canonical(a, seed=f"pres:{k}", mode=mode)
        m = spec_to_map(spec)
        assert verify_product_preservation(m, mode, 40, seed=k).ok


def test_shifted_identity_fails_preservation_frozen():
    a = full(2)
    shift = unit(QQ, 2, 1, 1)
    m = EvaluableMap(a, ProductKind.STANDARD, lambda X: X + shift,
                     label="shifted-identity")
    v = verify_product_preservation(m, ProductKind.STANDARD, 40)
    assert not v.ok
    X, Y, lhs, rhs = v.witness
    assert lhs == X * Y + shift
    assert rhs == (X + shift) * (Y + shift)


def test_zero_map_preserves_products_but_not_injective():
    a = full(2)
    zero = Matrix.zero(QQ, 2)
    m = EvaluableMap(a, ProductKind.STANDARD, lambda X: zero,
                     label="zero")
    assert verify_product_preservation(m, ProductKind.STANDARD, 40).ok
    v = verify_injectivity_on_samples(m, 40)
    assert not v.ok
    X1, X2, image = v.witness
    assert image == zero and X1 != X2


def test_constant_map_collision_witness():
    a = full(2)
    c = unit(QQ, 2, 1, 1)
    m = EvaluableMap(a, ProductKind.STANDARD, lambda X: c,
                     label="constant")
    v = verify_injectivity_on_samples(m, 40)
    assert not v.ok and v.witness[2] == c


@pytest.mark.parametrize("field", (QQ, QI))
def test_canonical_maps_additive_and_injective(field):
    a = chain(3, field)
    for mode in ProductKind:
        spec = synthesize_canonical(a, seed=f"addi:{mode.code}",
                                    mode=mode)
        m = spec_to_map(spec)
        assert verify_additivity(m, 40).ok
        assert verify_injectivity_on_samples(m, 40).ok


def test_diamond_mode_map_is_companion_halved():
    # the diamond-mode wrapper must evaluate phi(X) = psi(2X)/2
    a = full(2)
    spec = synthesize_canonical(a, seed="dia", mode=ProductKind.DIAMOND)
    m = spec_to_map(spec)
    two = QQ.scalar(2)
    half = QQ.scalar(Fraction(1, 2))
    X = a.random_element("dia-input")
    assert m(X) == spec.eval(X.scale(two)).scale(half)
    assert verify_product_preservation(m, ProductKind.DIAMOND, 40).ok


@pytest.mark.parametrize("field", (QQ, QI, F5))
@pytest.mark.parametrize("mode", list(ProductKind))
def test_round_trip_recovery_small(field, mode):
    for q in [validate_quasi_order(2, diag(2) | {(1, 2)}),
              full(3, field).order]:
        a = SMA(q, field)
        if not a.classes().all_classes_ge2:
            continue
        spec = synthesize_canonical(a, seed=f"rt:{mode.code}", mode=mode)
        m = spec_to_map(spec)
        result = recover_canonical(m, a, mode, seed=1)
        assert result.residual_samples == 100
        assert all(result.additivity_certified)
        X = a.random_element("probe")
        assert result.predict(X) == m(X)


def test_recovery_handles_denominator_carrying_T():
    # synthesis draws unimodular T, so feed one with a non-unit det
    a = full(2)
    T = Matrix(QQ, [[3, 1], [1, 2]])  # det 5
    rules = [ClassRule(c, identity_map(QQ), False) for c in a.classes()]
    spec = CanonicalMapSpec(a, T, trivial_g(a), rules,
                            ProductKind.STANDARD)
    m = spec_to_map(spec)
    result = recover_canonical(m, a, ProductKind.STANDARD)
    X = a.random_element("den-probe")
    assert result.predict(X) == m(X)


def test_recover_identity_map_frozen():
    a = chain(3)
    m = spec_to_map(identity_spec(a), label="identity")
    result = recover_canonical(m, a, ProductKind.STANDARD)
    spec = result.spec
    assert spec.T == Matrix.identity(QQ, 3)
    assert all(v == QQ.coerce_payload(1) for v in spec.g.values.values())
    for rule in spec.per_class:
        assert rule.omega.name == "Identity"
        assert not rule.transpose


def test_recover_cube_counterexample_frozen():
    a = SMA(validate_quasi_order(2, diag(2)), QQ)
    m = build_counterexample(a)
    result = recover_canonical(m, a, ProductKind.STANDARD)
    assert sorted(result.singleton_classes) == [1, 2]
    assert not any(result.additivity_certified)
    for rule in result.spec.per_class:
        assert rule.omega.name == "Cube"
    # sampled omega tables really are lambda -> lambda^3
    for table in result.omega_samples:
        for x, y in table:
            assert y == QQ.k_mul(QQ.k_mul(x, x), x)


def test_recover_rejects_shifted_identity():
    a = full(2)
    shift = unit(QQ, 2, 1, 1)
    m = EvaluableMap(a, ProductKind.STANDARD, lambda X: X + shift,
                     label="shifted-identity")
    with pytest.raises(RecoveryError):
        recover_canonical(m, a, ProductKind.STANDARD)


def test_recover_rejects_constant_map():
    a = full(2)
    c = unit(QQ, 2, 1, 1)
    m = EvaluableMap(a, ProductKind.STANDARD, lambda X: c,
                     label="constant")
    with pytest.raises(RecoveryError):
        recover_canonical(m, a, ProductKind.STANDARD)


def test_recover_rejects_non_injective_squash():
    # kills one basis direction; injectivity cannot be relaxed
    a = full(2)

    def squash(X):
        rows = [list(r) for r in X.rows]
        rows[0][1] = QQ.p_zero
        return Matrix(QQ, rows)

    m = EvaluableMap(a, ProductKind.STANDARD, squash, label="squash")
    with pytest.raises(RecoveryError):
        recover_canonical(m, a, ProductKind.STANDARD)


def test_counterexample_diagonal_frozen():
    a = SMA(validate_quasi_order(2, diag(2)), QQ)
    m = build_counterexample(a)
    X = Matrix.diagonal(QQ, [Fraction(2, 3), 5])
    assert m(X) == Matrix.diagonal(QQ, [Fraction(8, 27), 125])
    v = verify_additivity(m)
    I = Matrix.identity(QQ, 2)
    assert v.witness[0] == I and v.witness[1] == I
    assert v.witness[2] == I.scale(QQ.scalar(8))
    assert v.witness[3] == I.scale(QQ.scalar(2))


def test_counterexample_mixed_order_frozen():
    # chain on {1,2} plus isolated 3: only the (3,3) entry is cubed
    q = validate_quasi_order(3, diag(3) | {(1, 2)})
    a = SMA(q, QQ)
    m = build_counterexample(a)
    X = a.random_element("mixed")
    Y = m(X)
    x33 = X.rows[2][2]
    assert Y.rows[2][2] == QQ.k_mul(QQ.k_mul(x33, x33), x33)
    assert Y.rows[0][0] == X.rows[0][0]
    assert Y.rows[0][1] == X.rows[0][1]
    assert verify_product_preservation(m, ProductKind.STANDARD, 200).ok
    assert verify_product_preservation(m, ProductKind.CIRCLE, 200).ok
    assert verify_injectivity_on_samples(m, 100).ok
    assert not verify_additivity(m, 40).ok


def test_counterexample_refusals():
    with pytest.raises(PreconditionError):
        build_counterexample(full(2))
    with pytest.raises(PreconditionError):
        build_counterexample(SMA(validate_quasi_order(2, diag(2)), F5))


# Behavioral consequences of the canonical form on idempotents


def _synth_maps(field, mode, count):
    rng = Random(f"behave:{field.tag}:{mode.code}")
    a = full(3, field)
    b = chain(2, field)
    out = []
    for k in range(count):
        alg = a if k % 2 == 0 else b
        spec = synthesize_canonical(alg, seed=f"bh:{k}", mode=mode)
        out.append((alg, spec_to_map(spec), rng))
    return out


@pytest.mark.parametrize("field", (QQ, QI))
def test_canonical_rank_preservation(field):
    checked = 0
    for alg, m, rng in _synth_maps(field, ProductKind.CIRCLE, 6):
        for _ in range(10):
            P = alg.random_idempotent_from(rng)
            assert exact_rank(m(P)) == exact_rank(P)
            checked += 1
    assert checked >= 60


@pytest.mark.parametrize("field", (QQ, QI))
def test_canonical_orthoadditive_and_complement(field):
    ident = {2: Matrix.identity(field, 2), 3: Matrix.identity(field, 3)}
    for alg, m, rng in _synth_maps(field, ProductKind.CIRCLE, 6):
        I = ident[alg.n]
        for _ in range(10):
            # disjoint 0/1 diagonals under one conjugator: an
            # orthogonal pair of idempotents
            T = alg.random_invertible_from(rng, 3)
            Ti = T.inverse()
            bits = [1 if rng.random() < 0.5 else 0
                    for _ in range(alg.n)]
            cobits = [(1 - b) * (1 if rng.random() < 0.5 else 0)
                      for b in bits]
            P = T * Matrix.diagonal(field, bits) * Ti
            Q = T * Matrix.diagonal(field, cobits) * Ti
            assert P.is_idempotent() and Q.is_idempotent()
            assert (P * Q).is_zero and (Q * P).is_zero
            assert m(P + Q) == m(P) + m(Q)
            assert m(I - P) == m(I) - m(P)
            assert m(I) == I


def test_jordan_triple_input_identity():
    # (P - P_perp) o (X o P) = P X P for idempotent P
    rng = Random("triple-input")
    a = full(3)
    I = Matrix.identity(QQ, 3)
    circ = lambda X, Y: product(ProductKind.CIRCLE, X, Y)
    for _ in range(200):
        P = a.random_idempotent_from(rng)
        X = a.random_from(rng, 4)
        assert circ(P - (I - P), circ(X, P)) == P * X * P


@pytest.mark.parametrize("field", (QQ, QI))
def test_canonical_jordan_triple_identity(field):
    for alg, m, rng in _synth_maps(field, ProductKind.CIRCLE, 6):
        for _ in range(8):
            P = alg.random_idempotent_from(rng)
            X = alg.random_from(rng, 4)
            assert m(P * X * P) == m(P) * m(X) * m(P)


@pytest.mark.parametrize("field", (QQ, QI))
def test_canonical_rational_homogeneity(field):
    lam = field.scalar(Fraction(-7, 3))
    for alg, m, rng in _synth_maps(field, ProductKind.CIRCLE, 4):
        X = alg.random_from(rng)
        assert m(X.scale(lam)) == m(X).scale(lam)


# The tied-entry 5x5 fixture


def test_fixture_membership():
    alg, _ = example36_map()
    X = alg.from_parameters(1, 2, 3, 4, 5, 6, 7)
    assert alg.contains(X)
    assert not alg.contains(Matrix.unit(QQ, 5, 1, 3))
    # breaking a tie breaks membership
    rows = [list(r) for r in X.rows]
    rows[3][3] = QQ.coerce_payload(99)
    assert not alg.contains(Matrix(QQ, rows))


def test_fixture_preserves_both_products():
    _, m = example36_map()
    assert verify_product_preservation(m, ProductKind.STANDARD, 200).ok
    assert verify_product_preservation(m, ProductKind.CIRCLE, 200).ok
    assert verify_injectivity_on_samples(m, 100).ok


def test_fixture_additivity_witness_frozen():
    _, m = example36_map()
    v = verify_additivity(m, 40)
    assert not v.ok
    X, Y, lhs, rhs = v.witness
    assert X.rows[0][0] == QQ.coerce_payload(1)
    assert Y.rows[0][0] == QQ.coerce_payload(1)
    # (1+1)^3 = 8 on one side, 1^3 + 1^3 = 2 on the other
    assert lhs.rows[4][4] == QQ.coerce_payload(8)
    assert rhs.rows[4][4] == QQ.coerce_payload(2)


def test_fixture_does_not_preserve_doubled_jordan():
    # omega(2xy) = 8 omega(x) omega(y) != 2 omega(x) omega(y): the
    # doubled product is genuinely not preserved by the cube entry
    _, m = example36_map()
    v = verify_product_preservation(m, ProductKind.DIAMOND, 40)
    assert not v.ok


# File format


@pytest.mark.parametrize("field", (QQ, QI))
@pytest.mark.parametrize("mode", list(ProductKind))
def test_cmap_round_trip(field, mode):
    a = full(3, field)
    spec = synthesize_canonical(a, seed=f"io:{mode.code}", mode=mode)
    text = format_cmap(spec)
    back = parse_cmap(text, a.order, field)
    assert back.T == spec.T
    assert back.g.values == spec.g.values
    assert back.mode is mode
    for r1, r2 in zip(back.per_class, spec.per_class):
        assert r1.members == r2.members
        assert r1.omega.name == r2.omega.name
        assert r1.transpose == r2.transpose
    # and the two specs act identically
    X = a.random_element("io-probe")
    assert eval_canonical(back, X) == eval_canonical(spec, X)


def test_parse_cmap_rejects_wrong_order():
    a = full(3)
    spec = synthesize_canonical(a, seed="wrong", mode=ProductKind.STANDARD)
    text = format_cmap(spec)
    b = chain(3)
    with pytest.raises(ParseError):
        parse_cmap(text, b.order, QQ)


@pytest.mark.parametrize("mutate", [
    lambda t: t.replace("mode:", "kind:"),
    lambda t: t.replace("T:", "S:"),
    lambda t: "",
    lambda t: t.replace("omega id", "omega exp"),
])
def test_parse_cmap_rejects_malformed(mutate):
    a = full(2)
    spec = synthesize_canonical(a, seed="mal", mode=ProductKind.STANDARD)
    text = mutate(format_cmap(spec))
    with pytest.raises(ParseError):
        parse_cmap(text, a.order, QQ)


def test_gauge_freedom_scaled_T_same_map():
    # T and 2T induce the same conjugation; recovery certifies
    # functional equality, not tuple equality
    a = full(2)
    rules = [ClassRule(c, identity_map(QQ), False) for c in a.classes()]
    T = Matrix(QQ, [[1, 1], [0, 1]])
    s1 = CanonicalMapSpec(a, T, trivial_g(a), rules,
                          ProductKind.STANDARD)
    s2 = CanonicalMapSpec(a, T.scale(QQ.scalar(2)), trivial_g(a),
                          [ClassRule(c, identity_map(QQ), False)
                           for c in a.classes()],
                          ProductKind.STANDARD)
    for k in range(5):
        X = a.random_element(f"gauge:{k}")
        assert eval_canonical(s1, X) == eval_canonical(s2, X)
