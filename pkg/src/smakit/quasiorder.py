"""Quasi-orders on [n] and their central classes.

A quasi-order (reflexive transitive relation) rho determines the
structural matrix algebra spanned by the matrix units E_ij with
(i,j) in rho.  Symmetrizing rho and taking the transitive closure
partitions [n] into central classes; those classes index the central
decomposition of the algebra, and whether every class has at least two
elements is the exact boundary between forced additivity and the cube
counterexamples.

Indices are 1-based throughout, matching the usual matrix-unit
notation.
"""

from __future__ import annotations

from .errors import ParseError, QuasiOrderError


class QuasiOrder:
    """Validated reflexive transitive relation on [n].

    Construction checks both axioms and reports a witness on failure;
    use transitive_reflexive_closure to build one from generators.
    """

    __slots__ = ("n", "pairs", "_classes", "_strict")

    def __init__(self, n: int, pairs):
        if not isinstance(n, int) or n < 1:
            raise QuasiOrderError(f"n must be a positive integer, got {n}")
        pairs = frozenset(pairs)
        for i, j in pairs:
            if not (isinstance(i, int) and isinstance(j, int)
                    and 1 <= i <= n and 1 <= j <= n):
                raise QuasiOrderError(f"pair ({i},{j}) out of range for n={n}")
        for i in range(1, n + 1):
            if (i, i) not in pairs:
                raise QuasiOrderError(
                    f"not reflexive: missing pair ({i},{i})")
        for i, j in sorted(pairs):
            for k in range(1, n + 1):
                if (j, k) in pairs and (i, k) not in pairs:
                    raise QuasiOrderError(
                        f"not transitive: ({i},{j}) and ({j},{k}) "
                        f"present but ({i},{k}) missing")
        self.n = n
        self.pairs = pairs
        self._classes = None
        self._strict = None

    def __contains__(self, pair):
        return pair in self.pairs

    def __eq__(self, other):
        return (isinstance(other, QuasiOrder)
                and self.n == other.n and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.n, self.pairs))

    def __repr__(self):
        strict = ",".join(f"({i},{j})" for i, j in sorted(self.strict))
        return f"QuasiOrder(n={self.n}, strict={{{strict}}})"

    @property
    def strict(self) -> frozenset:
        if self._strict is None:
            self._strict = frozenset(
                (i, j) for i, j in self.pairs if i != j)
        return self._strict

    def image(self, i: int) -> frozenset:
        return frozenset(j for j in range(1, self.n + 1) if (i, j) in self.pairs)

    def preimage(self, i: int) -> frozenset:
        return frozenset(j for j in range(1, self.n + 1) if (j, i) in self.pairs)

    def classes(self) -> "CentralPartition":
        if self._classes is None:
            self._classes = central_classes(self)
        return self._classes


def validate_quasi_order(n: int, pairs) -> QuasiOrder:
    return QuasiOrder(n, pairs)


def transitive_reflexive_closure(n: int, pairs) -> QuasiOrder:
    """Smallest quasi-order on [n] containing the given pairs."""
    if not isinstance(n, int) or n < 1:
        raise QuasiOrderError(f"n must be a positive integer, got {n}")
    reach = [[False] * (n + 1) for _ in range(n + 1)]
    for i, j in pairs:
        if not (1 <= i <= n and 1 <= j <= n):
            raise QuasiOrderError(f"pair ({i},{j}) out of range for n={n}")
        reach[i][j] = True
    for i in range(1, n + 1):
        reach[i][i] = True
    for k in range(1, n + 1):
        rk = reach[k]
        for i in range(1, n + 1):
            if reach[i][k]:
                ri = reach[i]
                for j in range(1, n + 1):
                    if rk[j]:
                        ri[j] = True
    closed = {(i, j)
              for i in range(1, n + 1) for j in range(1, n + 1) if reach[i][j]}
    return QuasiOrder(n, closed)


def strict_part(q: QuasiOrder) -> frozenset:
    return q.strict


def image_and_preimage(q: QuasiOrder, i: int):
    if not 1 <= i <= q.n:
        raise QuasiOrderError(f"index {i} out of range for n={q.n}")
    return q.image(i), q.preimage(i)


class CentralPartition:
    """Partition of [n] into central classes, each sorted, the list
    sorted by least element."""

    __slots__ = ("n", "classes", "class_index")

    def __init__(self, n: int, classes):
        self.n = n
        self.classes = tuple(tuple(sorted(c)) for c in
                             sorted(classes, key=min))
        index = {}
        for k, c in enumerate(self.classes):
            for i in c:
                index[i] = k
        self.class_index = index

    def class_of(self, i: int):
        return self.classes[self.class_index[i]]

    @property
    def min_class_size(self) -> int:
        return min(len(c) for c in self.classes)

    @property
    def all_classes_ge2(self) -> bool:
        """Condition (i) of the main theorem: no singleton class."""
        return self.min_class_size >= 2

    @property
    def singletons(self) -> tuple:
        return tuple(c[0] for c in self.classes if len(c) == 1)

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def __eq__(self, other):
        return (isinstance(other, CentralPartition)
                and self.n == other.n and self.classes == other.classes)

    def __repr__(self):
        body = "".join("{" + ",".join(map(str, c)) + "}" for c in self.classes)
        return body


def central_classes(q: QuasiOrder) -> CentralPartition:
    """Classes of the transitive closure of the symmetrized relation.

    Computed by closing the symmetrized adjacency matrix; the test
    suite cross-checks against an independent union-find.
    """
    n = q.n
    adj = [[False] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        adj[i][i] = True
    for i, j in q.strict:
        adj[i][j] = True
        adj[j][i] = True
    for k in range(1, n + 1):
        ak = adj[k]
        for i in range(1, n + 1):
            if adj[i][k]:
                ai = adj[i]
                for j in range(1, n + 1):
                    if ak[j]:
                        ai[j] = True
    seen = set()
    classes = []
    for i in range(1, n + 1):
        if i not in seen:
            cls = [j for j in range(1, n + 1) if adj[i][j]]
            seen.update(cls)
            classes.append(cls)
    return CentralPartition(n, classes)


def enumerate_quasi_orders(n: int):
    """All quasi-orders on [n], n <= 4, each exactly once, in a fixed
    deterministic order (bitmask over off-diagonal pairs, ascending).

    Brute force over 2^(n^2-n) candidates with a transitivity filter;
    trivially correct at this scale.
    """
    if not isinstance(n, int) or not 1 <= n <= 4:
        raise QuasiOrderError(f"enumeration supports 1 <= n <= 4, got {n}")
    diagonal = frozenset((i, i) for i in range(1, n + 1))
    positions = [(i, j) for i in range(1, n + 1)
                 for j in range(1, n + 1) if i != j]
    m = len(positions)
    for mask in range(1 << m):
        chosen = {positions[b] for b in range(m) if mask >> b & 1}
        pairs = diagonal | chosen
        ok = True
        for i, j in chosen:
            for k in range(1, n + 1):
                if k != j and (j, k) in pairs and (i, k) not in pairs:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield QuasiOrder(n, pairs)


class SaturationReport:
    """Outcome of the saturation test on a subset S of rho-strict.

    hypotheses_hold: all three closure hypotheses verified for every
    pair of S.  failures: list of (pair, hypothesis, required missing
    pair).  touched_classes: central classes meeting S.  containment
    fields record the direct enumeration of rho-strict within each
    touched class against S.
    """

    __slots__ = ("hypotheses_hold", "failures", "touched_classes",
                 "containment_holds", "missing_pairs")

    def __init__(self, hypotheses_hold, failures, touched_classes,
                 containment_holds, missing_pairs):
        self.hypotheses_hold = hypotheses_hold
        self.failures = failures
        self.touched_classes = touched_classes
        self.containment_holds = containment_holds
        self.missing_pairs = missing_pairs

    def __repr__(self):
        status = "hold" if self.hypotheses_hold else "fail"
        return (f"SaturationReport(hypotheses {status}, "
                f"containment={self.containment_holds})")


def saturation_check(q: QuasiOrder, S) -> SaturationReport:
    """Check the three saturation hypotheses for S and, when they hold,
    confirm that S contains all strict pairs of every touched class.

    Hypotheses, for each (i,j) in S: every (i,k) with k in the strict
    image of i lies in S; every (l,j) with l in the strict preimage of
    j lies in S; and (j,i) lies in S whenever it lies in rho-strict.
    """
    S = frozenset(S)
    if not S:
        raise QuasiOrderError("S must be nonempty")
    if not S <= q.strict:
        bad = sorted(S - q.strict)[0]
        raise QuasiOrderError(f"S contains {bad} outside the strict part")
    strict = q.strict
    failures = []
    for i, j in sorted(S):
        for k in range(1, q.n + 1):
            if (i, k) in strict and (i, k) not in S:
                failures.append(((i, j), "image", (i, k)))
        for l in range(1, q.n + 1):
            if (l, j) in strict and (l, j) not in S:
                failures.append(((i, j), "preimage", (l, j)))
        if (j, i) in strict and (j, i) not in S:
            failures.append(((i, j), "reverse", (j, i)))
    partition = q.classes()
    touched = sorted({partition.class_index[i] for i, _ in S})
    touched_classes = tuple(partition.classes[k] for k in touched)
    missing = []
    for cls in touched_classes:
        members = set(cls)
        for pair in sorted(strict):
            if pair[0] in members and pair[1] in members and pair not in S:
                missing.append(pair)
    hypotheses_hold = not failures
    containment_holds = not missing
    if hypotheses_hold and not containment_holds:
        raise AssertionError(
            f"saturation hypotheses hold but containment fails at "
            f"{missing[0]}; this contradicts the lemma")
    return SaturationReport(hypotheses_hold, failures, touched_classes,
                            containment_holds, missing)


def parse_qo(text: str, close: bool = False) -> QuasiOrder:
    """Read the .qo format: first line 'n <int>', then one '<i> <j>'
    pair per line, '#' starting comments.  With close=True the pairs
    are generators and the reflexive transitive closure is returned;
    otherwise the listed pairs must already form a quasi-order."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty .qo input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise ParseError(f"bad .qo header {lines[0]!r}, expected 'n <int>'")
    n = int(head[1])
    pairs = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"bad .qo pair line {ln!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad .qo pair line {ln!r}") from None
        pairs.add((i, j))
    if close:
        return transitive_reflexive_closure(n, pairs)
    return validate_quasi_order(n, pairs)


def format_qo(q: QuasiOrder) -> str:
    lines = [f"n {q.n}"]
    lines.extend(f"{i} {j}" for i, j in sorted(q.pairs))
    return "\n".join(lines) + "\n"
