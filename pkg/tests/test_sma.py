"""Structural matrix algebras: membership, products, center,
transitive maps and the induced automorphism, file formats."""

from fractions import Fraction
from random import Random

import pytest

from smakit import (FieldMismatchError, Matrix, ParseError, ProductKind,
                    QI, QQ, SMA, Scalar, TransitiveMap,
                    apply_induced_automorphism, format_gmap, format_mat,
                    enumerate_quasi_orders, parse_gmap, parse_mat,
                    prime_field, product, random_transitive_map,
                    transitive_reflexive_closure, trivial_transitive_map,
                    validate_quasi_order, validate_transitive_map)

F5 = prime_field(5)
FIELDS = (QQ, QI, F5)


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


def test_contains_frozen():
    a = chain(2)
    assert a.contains(unit(QQ, 2, 1, 2))
    assert not a.contains(unit(QQ, 2, 2, 1))
    assert a.contains(Matrix.identity(QQ, 2))


def test_contains_rejects_wrong_field():
    with pytest.raises(FieldMismatchError):
        chain(2).contains(unit(QI, 2, 1, 2))


def test_products_frozen():
    f = QQ
    e12, e21 = unit(f, 2, 1, 2), unit(f, 2, 2, 1)
    half = Matrix.diagonal(f, [Fraction(1, 2), Fraction(1, 2)])
    assert product(ProductKind.CIRCLE, e12, e21) == half
    assert product(ProductKind.DIAMOND, e12, e12) == Matrix.zero(f, 2)
    assert product(ProductKind.STANDARD, unit(f, 2, 1, 1), e12) == e12


@pytest.mark.parametrize("field", FIELDS)
def test_circle_of_x_with_x_is_square(field):
    a = chain(3, field)
    rng = Random("circle-square")
    for _ in range(50):
        X = a.random_from(rng)
        assert product(ProductKind.CIRCLE, X, X) == X * X


def test_diagonal_idempotent_frozen():
    a = full(3)
    assert a.diagonal_idempotent(range(1, 4)) == Matrix.identity(QQ, 3)
    assert a.diagonal_idempotent(()) == Matrix.zero(QQ, 3)
    assert a.diagonal_idempotent({1, 3}) == Matrix.diagonal(QQ, [1, 0, 1])


def test_center_basis_frozen():
    a = SMA(validate_quasi_order(3, diag(3) | {(1, 2)}), QQ)
    e = lambda i, j: unit(QQ, 3, i, j)
    assert a.center_basis() == (e(1, 1) + e(2, 2), e(3, 3))
    assert full(2).center_basis() == (Matrix.identity(QQ, 2),)
    b = SMA(validate_quasi_order(2, diag(2)), QQ)
    assert b.center_basis() == (unit(QQ, 2, 1, 1), unit(QQ, 2, 2, 2))


def test_center_dimension_oracle_frozen():
    assert SMA(validate_quasi_order(3, diag(3) | {(1, 2)}), QQ) \
        .center_dimension_oracle() == 2
    assert full(3).center_dimension_oracle() == 1
    assert SMA(validate_quasi_order(4, diag(4)), QQ) \
        .center_dimension_oracle() == 4


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("field", FIELDS)
def test_center_dimensions_agree_exhaustive(n, field):
    # |classes| = dim of the commutant, solved independently
    for q in enumerate_quasi_orders(n):
        a = SMA(q, field)
        assert len(a.center_basis()) == a.center_dimension_oracle()


@pytest.mark.parametrize("field", FIELDS)
def test_closure_under_all_products(field):
    rng = Random("closure")
    orders = [q for q in enumerate_quasi_orders(3)]
    algebras = [SMA(q, field) for q in orders[::3]]
    count = 0
    while count < 200:
        for a in algebras:
            X, Y = a.random_from(rng), a.random_from(rng)
            for kind in ProductKind:
                assert a.contains(product(kind, X, Y))
            count += 1


@pytest.mark.parametrize("field", FIELDS)
def test_central_idempotents_block_structure(field):
    rng = Random("blocks")
    for q in enumerate_quasi_orders(3):
        a = SMA(q, field)
        basis = a.center_basis()
        total = Matrix.zero(field, 3)
        for P in basis:
            assert P.is_idempotent()
            total = total + P
        assert total == Matrix.identity(field, 3)
        for i, P in enumerate(basis):
            for j, P2 in enumerate(basis):
                if i != j:
                    assert (P * P2).is_zero
        X = a.random_from(rng)
        for i, P in enumerate(basis):
            # central: commutes with everything in the algebra
            assert P * X == X * P
            for j, P2 in enumerate(basis):
                if i != j:
                    assert (P * X * P2).is_zero


def _gmap(a, strict_values):
    values = {(i, i): 1 for i in range(1, a.n + 1)}
    values.update(strict_values)
    return TransitiveMap(a.order, a.field, values)


def test_transitive_map_frozen():
    a = chain(3)
    g = _gmap(a, {(1, 2): 2, (2, 3): 3, (1, 3): 6})
    ok, witness = validate_transitive_map(g)
    assert ok and witness is None
    assert g.g(1, 3) == QQ.scalar(6)
    assert g.g(2, 2) == QQ.scalar(1)


def test_transitive_map_cocycle_violation_frozen():
    a = chain(3)
    g = _gmap(a, {(1, 2): 2, (2, 3): 3, (1, 3): 5})
    ok, witness = validate_transitive_map(g)
    assert not ok
    assert witness == ((1, 2), (2, 3))


def test_transitive_map_inverse_pair_forced():
    # g(1,2) g(2,1) = g(1,1) = 1
    a = full(2)
    c = Fraction(5, 3)
    g = _gmap(a, {(1, 2): c, (2, 1): 1 / c})
    ok, _ = validate_transitive_map(g)
    assert ok
    bad = _gmap(a, {(1, 2): c, (2, 1): c})
    ok, witness = validate_transitive_map(bad)
    assert not ok and witness is not None


@pytest.mark.parametrize("field", FIELDS)
def test_random_transitive_maps_validate(field):
    rng = Random("gmaps")
    for q in enumerate_quasi_orders(3):
        a = SMA(q, field)
        for _ in range(5):
            g = random_transitive_map(a, rng)
            ok, _ = validate_transitive_map(g)
            assert ok
            for i in range(1, 4):
                assert g.g(i, i) == field.scalar(1)


def test_induced_automorphism_frozen():
    a = chain(3)
    g = _gmap(a, {(1, 2): 2, (2, 3): 3, (1, 3): 6})
    e13 = unit(QQ, 3, 1, 3)
    assert apply_induced_automorphism(g, e13) == e13.scale(QQ.scalar(6))


@pytest.mark.parametrize("field", FIELDS)
def test_induced_automorphism_properties(field):
    a = chain(3, field)
    rng = Random("gstar")
    for _ in range(20):
        g = random_transitive_map(a, rng)
        inv = g.inverse()
        for _ in range(5):
            X = a.random_from(rng)
            Y = a.random_from(rng)
            fwd = apply_induced_automorphism(g, X)
            assert apply_induced_automorphism(inv, fwd) == X
            lhs = apply_induced_automorphism(g, X * Y)
            rhs = (apply_induced_automorphism(g, X)
                   * apply_induced_automorphism(g, Y))
            assert lhs == rhs


def test_trivial_transitive_map_is_identity_action():
    a = chain(3)
    g = trivial_transitive_map(a)
    X = a.random_element("trivial")
    assert apply_induced_automorphism(g, X) == X


def test_random_elements_deterministic():
    a = chain(4)
    assert a.random_element("s1") == a.random_element("s1")
    assert a.random_element("s1") != a.random_element("s2")


@pytest.mark.parametrize("field", FIELDS)
def test_random_invertible_has_nonzero_det(field):
    a = chain(3, field)
    for k in range(20):
        T = a.random_invertible(f"inv:{k}")
        assert a.contains(T)
        assert not T.det().is_zero
        assert T * T.inverse() == Matrix.identity(field, 3)


def test_random_support_inside_order():
    q = validate_quasi_order(3, diag(3) | {(1, 2)})
    a = SMA(q, QQ)
    rng = Random("support")
    for _ in range(50):
        assert a.random_from(rng).support() <= q.pairs


@pytest.mark.parametrize("field", FIELDS)
def test_matrix_ring_laws(field):
    # exercises the per-field fast paths in mul, add, sub, scale
    a = full(3, field)
    rng = Random("ring-laws")
    for _ in range(40):
        X, Y, Z = (a.random_from(rng) for _ in range(3))
        s = Scalar(field, field.k_random(rng, 9))
        assert (X * Y) * Z == X * (Y * Z)
        assert X * (Y + Z) == X * Y + X * Z
        assert (X - Y) * Z == X * Z - Y * Z
        assert (X + Y).scale(s) == X.scale(s) + Y.scale(s)
        assert (X * Y).scale(s) == X.scale(s) * Y
        assert X.transpose().transpose() == X


def test_gaussian_entry_arithmetic_frozen():
    f = QI
    i_unit = f.scalar((Fraction(0), Fraction(1)))
    X = Matrix.diagonal(f, [(0, 1), (0, -1)])
    assert X * X == Matrix.identity(f, 2).scale(f.scalar(-1))
    assert X.scale(i_unit) == Matrix.diagonal(f, [-1, 1])


@pytest.mark.parametrize("field", FIELDS)
def test_mat_format_round_trip(field):
    a = chain(3, field)
    for k in range(5):
        X = a.random_element(f"mat:{k}")
        Y = parse_mat(format_mat(X))
        assert Y == X and Y.field == field


@pytest.mark.parametrize("text", [
    "", "n 2 field Q\n1 2", "n 2 field Q\n1 2\n3",
    "n 2 field Z\n1 2\n3 4", "n two field Q\n1 2\n3 4",
])
def test_parse_mat_rejects(text):
    with pytest.raises(ParseError):
        parse_mat(text)


def test_gmap_format_round_trip():
    for field in (QQ, QI):
        a = chain(3, field)
        rng = Random("gmap-io")
        for _ in range(5):
            g = random_transitive_map(a, rng)
            h = parse_gmap(format_gmap(g), a.order)
            assert h.values == {k: v for k, v in g.values.items()}


def test_parse_gmap_must_cover_strict_part():
    a = chain(3)
    with pytest.raises(ParseError):
        parse_gmap("field Q\n1 2 2\n", a.order)
