"""Quasi-orders on [n] and their central classes.

A quasi-order is a reflexive transitive relation on {1, ..., n}.  Each
one determines a span-of-matrix-units algebra; the combinatorics here
decide everything the algebraic layers do later, so this demo starts
from the relation alone.
"""

from smakit import (
    QuasiOrder,
    central_classes,
    enumerate_quasi_orders,
    image_and_preimage,
    saturation_check,
    strict_part,
    transitive_reflexive_closure,
    validate_quasi_order,
)


def main():
    # A relation is only accepted when it is already reflexive and
    # transitive; the closure helper repairs raw generator pairs.
    raw = [(1, 2), (2, 3)]
    q = transitive_reflexive_closure(4, raw)
    print("generators:", sorted(raw))
    print("closure:   ", q)
    print("strict part:", sorted(strict_part(q)))
    print()

    # validate_quasi_order raises instead of repairing.
    try:
        validate_quasi_order(3, [(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)])
    except Exception as e:
        print("missing (1,3) is rejected:", e)
    print()

    # Images and preimages under the relation.
    below, above = image_and_preimage(q, 2)
    print("image of 2 (all j with 2<=j):   ", sorted(below))
    print("preimage of 2 (all i with i<=2):", sorted(above))
    print()

    # Central classes: connected components of the comparability
    # graph of the strict part.  Elements strictly comparable to
    # nothing sit in singleton classes.
    part = central_classes(q)
    print("central classes of", q, "->", part)
    print("min class size:", part.min_class_size)
    print("singletons:", part.singletons)
    print("all classes >= 2:", part.all_classes_ge2)
    print()

    # The two-way equivalence condition asks every central class to
    # have at least two elements.  A total order satisfies it; adding
    # an isolated point breaks it.
    chain = transitive_reflexive_closure(3, [(1, 2), (2, 3)])
    print(chain, "->", central_classes(chain),
          "-> condition holds:", central_classes(chain).all_classes_ge2)
    lonely = QuasiOrder(3, {(1, 1), (2, 2), (3, 3), (1, 2), (2, 1)})
    print(lonely, "->", central_classes(lonely),
          "-> condition holds:", central_classes(lonely).all_classes_ge2)
    print()

    # Exhaustive enumeration.  The counts are the labelled topology
    # numbers 1, 4, 29, 355.
    for n in range(1, 5):
        orders = list(enumerate_quasi_orders(n))
        good = sum(1 for q in orders if q.classes().all_classes_ge2)
        print(f"n={n}: {len(orders):3d} quasi-orders, "
              f"{good:3d} with every class >= 2")
    print()

    # Saturated pair sets: closed under left/right composition with
    # strict pairs and under symmetry inside the strict part.  When
    # the hypotheses hold, the set swallows every strict pair of each
    # class it touches.
    r = saturation_check(chain, {(1, 2)})
    print("S={(1,2)} in the 3-chain:")
    print("  hypotheses hold:", r.hypotheses_hold)
    if not r.hypotheses_hold:
        print("  first failure:", r.failures[0])
    full = {(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)}
    r = saturation_check(transitive_reflexive_closure(3, full), full)
    print("S=everything in the saturated 3-clique:")
    print("  hypotheses hold:", r.hypotheses_hold)
    print("  touched classes:", r.touched_classes)


if __name__ == "__main__":
    main()
