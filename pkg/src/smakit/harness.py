"""Exhaustive sweep turning the main theorem into a checkable run.

For every quasi-order on [n] the sweep computes the central classes
and branches on condition (i), "every class has at least two
elements".  Where (i) holds, random canonical maps are synthesized in
all three product modes and pushed through black-box recovery plus an
additivity verification, which is the (i) implies (ii)/(iii)
direction at desk scale.  Where (i) fails, the cube counterexample is
built and must preserve the standard and circle products while
failing additivity with a concrete witness, which is the converse
direction.  Any failed verdict is recorded and makes the whole run
fail.

Reports are plain text with stable field ordering; two runs with the
same configuration are byte-identical, so goldens can be diffed.

Sweeps run over Q or Q(i).  Over F_p the counterexample construction
refuses (cubing is not injective on every prime field and the
catalog's injectivity argument is characteristic-zero), so a modular
sweep raises as soon as an order with a singleton class comes up.
"""

from __future__ import annotations

from .errors import PreconditionError, RecoveryError
from .maps import (build_counterexample, recover_canonical, spec_to_map,
                   synthesize_canonical, verify_additivity,
                   verify_product_preservation)
from .quasiorder import enumerate_quasi_orders
from .scalars import QQ, FieldDescriptor
from .sma import SMA, ProductKind


class TheoremCheckConfig:
    """Sweep parameters; n is capped where exhaustive enumeration is
    feasible."""

    __slots__ = ("n", "field", "seed", "samples_per_map",
                 "maps_per_quasi_order")

    def __init__(self, n: int, field: FieldDescriptor = QQ, seed=0,
                 samples_per_map: int = 100,
                 maps_per_quasi_order: int = 3):
        if not isinstance(n, int) or not 1 <= n <= 4:
            raise PreconditionError(f"n must be an integer in 1..4, got {n}")
        if samples_per_map < 1 or maps_per_quasi_order < 1:
            raise PreconditionError("all counts must be >= 1")
        self.n = n
        self.field = field
        self.seed = seed
        self.samples_per_map = samples_per_map
        self.maps_per_quasi_order = maps_per_quasi_order


class MapVerdict:
    """One synthesized map pushed through recovery and additivity."""

    __slots__ = ("mode", "index", "recover_ok", "recover_note",
                 "additivity_ok")

    def __init__(self, mode, index, recover_ok, recover_note,
                 additivity_ok):
        self.mode = mode
        self.index = index
        self.recover_ok = recover_ok
        self.recover_note = recover_note
        self.additivity_ok = additivity_ok

    @property
    def ok(self) -> bool:
        return self.recover_ok and self.additivity_ok

    def render(self) -> str:
        rec = "ok" if self.recover_ok else f"FAIL({self.recover_note})"
        add = "pass" if self.additivity_ok else "FAIL"
        tail = "ok" if self.ok else "FAILED"
        return (f"{self.mode.code}#{self.index} recover={rec} "
                f"additivity={add} -> {tail}")


class CounterexampleVerdict:
    """The cube map's required behavior where condition (i) fails."""

    __slots__ = ("preserve_mul", "preserve_circle", "witness_found")

    def __init__(self, preserve_mul, preserve_circle, witness_found):
        self.preserve_mul = preserve_mul
        self.preserve_circle = preserve_circle
        self.witness_found = witness_found

    @property
    def ok(self) -> bool:
        return (self.preserve_mul and self.preserve_circle
                and self.witness_found)

    def render(self) -> str:
        def pf(b):
            return "pass" if b else "FAIL"
        tail = "ok" if self.ok else "FAILED"
        return (f"counterexample: preserve-mul={pf(self.preserve_mul)} "
                f"preserve-njordan={pf(self.preserve_circle)} "
                f"additivity-witness="
                f"{'found' if self.witness_found else 'MISSING'} -> {tail}")


class OrderRow:
    """Everything recorded for one enumerated quasi-order."""

    __slots__ = ("index", "order", "classes", "min_class_size",
                 "condition_i", "map_verdicts", "counterexample")

    def __init__(self, index, order, classes, min_class_size, condition_i,
                 map_verdicts, counterexample):
        self.index = index
        self.order = order
        self.classes = classes
        self.min_class_size = min_class_size
        self.condition_i = condition_i
        self.map_verdicts = map_verdicts
        self.counterexample = counterexample

    @property
    def ok(self) -> bool:
        if self.condition_i:
            return all(v.ok for v in self.map_verdicts)
        return self.counterexample.ok

    def render(self, width: int) -> list:
        strict = sorted(self.order.strict)
        pairs = ",".join(f"({i},{j})" for i, j in strict) if strict else "-"
        cls = "|".join("{" + ",".join(map(str, c)) + "}"
                       for c in self.classes)
        lines = [f"[{self.index:0{width}d}] strict={pairs} classes={cls} "
                 f"nclasses={len(self.classes)} min={self.min_class_size} "
                 f"cond_i={'yes' if self.condition_i else 'no'}"]
        pad = " " * (width + 3)
        if self.condition_i:
            for v in self.map_verdicts:
                lines.append(pad + v.render())
        else:
            lines.append(pad + self.counterexample.render())
        return lines


class RunReport:
    """Structured sweep outcome plus its stable text rendering."""

    __slots__ = ("config", "rows")

    def __init__(self, config: TheoremCheckConfig, rows):
        self.config = config
        self.rows = tuple(rows)

    @property
    def total_orders(self) -> int:
        return len(self.rows)

    @property
    def condition_i_count(self) -> int:
        return sum(1 for r in self.rows if r.condition_i)

    @property
    def counterexample_count(self) -> int:
        return sum(1 for r in self.rows if not r.condition_i)

    @property
    def map_instances(self) -> int:
        return sum(len(r.map_verdicts) for r in self.rows)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.rows if not r.ok)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def render(self) -> str:
        c = self.config
        width = max(2, len(str(self.total_orders - 1)))
        lines = [
            f"theorem-check n={c.n} field={c.field.tag} seed={c.seed} "
            f"samples={c.samples_per_map} "
            f"maps_per_quasi_order={c.maps_per_quasi_order}",
            f"orders={self.total_orders} "
            f"condition_i={self.condition_i_count} "
            f"counterexamples={self.counterexample_count} "
            f"map_instances={self.map_instances} failures={self.failures}",
            f"result={'PASS' if self.ok else 'FAIL'}",
            "--",
        ]
        for row in self.rows:
            lines.extend(row.render(width))
        return "\n".join(lines) + "\n"


def theorem_check(c: TheoremCheckConfig) -> RunReport:
    """Run the sweep; see the module docstring for what is checked."""
    rows = []
    modes = tuple(ProductKind)
    for idx, order in enumerate(enumerate_quasi_orders(c.n)):
        a = SMA(order, c.field)
        partition = a.classes()
        cond = partition.all_classes_ge2
        verdicts = []
        cx = None
        if cond:
            for mode in modes:
                for k in range(c.maps_per_quasi_order):
                    tag = f"{c.seed}:{idx}:{mode.code}:{k}"
                    spec = synthesize_canonical(a, seed=tag, mode=mode)
                    m = spec_to_map(spec)
                    try:
                        recover_canonical(m, a, mode, seed=tag,
                                          sample_count=c.samples_per_map)
                        rec_ok, note = True, ""
                    except RecoveryError as e:
                        rec_ok, note = False, f"step {e.step}: {e.claim}"
                    add_ok = verify_additivity(
                        m, sample_count=c.samples_per_map, seed=tag).ok
                    verdicts.append(
                        MapVerdict(mode, k, rec_ok, note, add_ok))
        else:
            box = build_counterexample(a)
            tag = f"{c.seed}:{idx}:cx"
            p_mul = verify_product_preservation(
                box, ProductKind.STANDARD, c.samples_per_map, seed=tag)
            p_circ = verify_product_preservation(
                box, ProductKind.CIRCLE, c.samples_per_map, seed=tag)
            anti = verify_additivity(box, c.samples_per_map, seed=tag)
            cx = CounterexampleVerdict(
                p_mul.ok, p_circ.ok,
                (not anti.ok) and anti.witness is not None)
        rows.append(OrderRow(idx, order, partition.classes,
                             partition.min_class_size, cond,
                             tuple(verdicts), cx))
    return RunReport(c, rows)
