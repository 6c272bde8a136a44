"""Idempotent calculus: rank, the Jordan-product equivalences, inner
diagonalization, rank-one decomposition."""

from random import Random

import pytest

from smakit import (IdempotentFamily, Matrix, PreconditionError, QI, QQ,
                    SMA, enumerate_quasi_orders, exact_rank,
                    inner_diagonalize, jordan_idempotent_tests,
                    prime_field, rank_one_decompose, validate_quasi_order)

F5 = prime_field(5)
FIELDS = (QQ, QI, F5)


def diag(n):
    return {(i, i) for i in range(1, n + 1)}


def chain(n, field=QQ):
    pairs = {(i, j) for i in range(1, n + 1) for j in range(i, n + 1)}
    return SMA(validate_quasi_order(n, pairs), field)


def unit(f, n, i, j):
    return Matrix.unit(f, n, i, j)


def test_exact_rank_frozen():
    f = QQ
    assert exact_rank(unit(f, 2, 1, 1) + unit(f, 2, 1, 2)) == 1
    assert exact_rank(Matrix.identity(f, 3)) == 3
    assert exact_rank(Matrix.zero(f, 2)) == 0


def test_jordan_tests_disjoint_units_frozen():
    f = QQ
    rep = jordan_idempotent_tests(unit(f, 2, 1, 1), unit(f, 2, 2, 2))
    assert rep.a_is_idempotent
    assert rep.circ_is_zero and rep.two_sided_zero
    assert rep.is_orthogonal
    assert rep.holds_all


def test_jordan_tests_non_comparable_frozen():
    # p = E_11, q = E_11 + E_12: pq = q != p, so p is not below q,
    # and the circle product is not p either; (d) holds vacuously
    f = QQ
    p = unit(f, 2, 1, 1)
    q = unit(f, 2, 1, 1) + unit(f, 2, 1, 2)
    rep = jordan_idempotent_tests(p, q)
    assert rep.a_is_idempotent
    assert not rep.p_below_a
    assert not rep.circ_is_p
    assert rep.holds_all


def test_jordan_tests_absorbed_unit_frozen():
    # p = E_11 + E_22 absorbs a = E_12 on both sides
    f = QQ
    p = unit(f, 2, 1, 1) + unit(f, 2, 2, 2)
    a = unit(f, 2, 1, 2)
    rep = jordan_idempotent_tests(p, a)
    assert rep.circ_is_a and rep.two_sided_a
    assert rep.holds_all


def test_jordan_tests_require_idempotent_first_argument():
    f = QQ
    with pytest.raises(PreconditionError):
        jordan_idempotent_tests(unit(f, 2, 1, 2), unit(f, 2, 1, 1))


@pytest.mark.parametrize("field", FIELDS)
def test_jordan_equivalences_random_sweep(field):
    rng = Random(f"lemma-sweep:{field.tag}")
    orders = [q for q in enumerate_quasi_orders(3)]
    count = 0
    while count < 150:
        for q in orders[:: 4]:
            a = SMA(q, field)
            p = a.random_idempotent_from(rng)
            other = (a.random_idempotent_from(rng)
                     if rng.random() < 0.5 else a.random_from(rng, 4))
            assert jordan_idempotent_tests(p, other).holds_all
            count += 1


def test_inner_diagonalize_chain_unit_frozen():
    a = chain(2)
    P = unit(QQ, 2, 1, 1) + unit(QQ, 2, 1, 2)
    d = inner_diagonalize(IdempotentFamily(a, [P]))
    assert d.S * P * d.S_inverse == unit(QQ, 2, 1, 1)
    assert d.targets == (unit(QQ, 2, 1, 1),)


def test_inner_diagonalize_already_diagonal_frozen():
    a = chain(3)
    fam = IdempotentFamily(a, [Matrix.diagonal(QQ, [1, 0, 1]),
                               Matrix.diagonal(QQ, [0, 0, 1])])
    d = inner_diagonalize(fam)
    assert d.S == Matrix.identity(QQ, 3)
    assert d.targets == tuple(fam.members)


@pytest.mark.parametrize("field", FIELDS)
def test_inner_diagonalize_complementary_pair(field):
    a = chain(3, field)
    rng = Random(f"pair:{field.tag}")
    ident = Matrix.identity(field, 3)
    for _ in range(10):
        P = a.random_idempotent_from(rng)
        d = inner_diagonalize(IdempotentFamily(a, [P, ident - P]))
        assert d.targets[0] + d.targets[1] == ident
        assert d.S * P * d.S_inverse == d.targets[0]


@pytest.mark.parametrize("field", FIELDS)
def test_inner_diagonalize_random_families(field):
    # conjugated diagonal 0/1 matrices by a shared T commute, so they
    # form a legal family with a known diagonalization
    rng = Random(f"families:{field.tag}")
    done = 0
    for q in enumerate_quasi_orders(3):
        a = SMA(q, field)
        T = a.random_invertible_from(rng, 4)
        Ti = T.inverse()
        size = 1 + int(rng.random() * 3)
        members = []
        for _ in range(size):
            D = Matrix.diagonal(field,
                                [1 if rng.random() < 0.5 else 0
                                 for _ in range(3)])
            members.append(T * D * Ti)
        d = inner_diagonalize(IdempotentFamily(a, members), seed=done)
        assert a.contains(d.S)
        assert not d.S.det().is_zero
        for P, target in zip(members, d.targets):
            got = d.S * P * d.S_inverse
            assert got == target
            assert got.is_zero_one_diagonal()
        done += 1
    assert done == 29


def test_family_rejects_non_commuting():
    a = chain(2)
    P = unit(QQ, 2, 1, 1)
    Q = unit(QQ, 2, 1, 1) + unit(QQ, 2, 1, 2)
    with pytest.raises(PreconditionError):
        IdempotentFamily(a, [P, Q])


def test_rank_one_decompose_identity_frozen():
    a = chain(3)
    pieces = rank_one_decompose(a, Matrix.identity(QQ, 3), range(1, 4))
    assert pieces == [unit(QQ, 3, i, i) for i in range(1, 4)]


def test_rank_one_decompose_rank_one_frozen():
    a = chain(2)
    P = unit(QQ, 2, 1, 1) + unit(QQ, 2, 1, 2)
    assert rank_one_decompose(a, P, {1, 2}) == [P]


@pytest.mark.parametrize("field", FIELDS)
def test_rank_one_decompose_random(field):
    rng = Random(f"rank-one:{field.tag}")
    for q in enumerate_quasi_orders(3):
        a = SMA(q, field)
        S = {i for i in range(1, 4) if rng.random() < 0.8} or {1}
        P = a.random_idempotent_from(rng, support=S)
        pieces = rank_one_decompose(a, P, S)
        box = {(i, j) for i in S for j in S}
        total = Matrix.zero(field, 3)
        for Q in pieces:
            assert Q.is_idempotent()
            assert exact_rank(Q) == 1
            assert a.contains(Q)
            assert Q.support() <= box
            total = total + Q
        assert total == P
        for i, Q1 in enumerate(pieces):
            for Q2 in pieces[i + 1:]:
                assert (Q1 * Q2).is_zero and (Q2 * Q1).is_zero


def test_rank_one_decompose_rejects_support_violation():
    a = chain(2)
    P = unit(QQ, 2, 1, 1) + unit(QQ, 2, 1, 2)
    with pytest.raises(PreconditionError):
        rank_one_decompose(a, P, {1})


@pytest.mark.parametrize("field", (QQ, QI))
def test_rank_equals_trace_for_idempotents_char_zero(field):
    rng = Random(f"rank-trace:{field.tag}")
    for q in enumerate_quasi_orders(3):
        a = SMA(q, field)
        P = a.random_idempotent_from(rng)
        tr = P.trace()
        assert tr == field.scalar(exact_rank(P))
