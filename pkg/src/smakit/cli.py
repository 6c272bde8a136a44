"""Command line front end.

Exit codes follow one rule: 0 means every verdict the command checked
passed, 1 means a property was violated and a witness was printed,
2 means the input itself was bad (unparseable file, unknown flag,
refused precondition).  A counterexample request on an order where
every class has >= 2 elements is an input-domain refusal, not a
failed property, so it exits 2.

The SMAKIT_SEED environment variable supplies the default for every
--seed flag.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ParseError, PreconditionError, RecoveryError, SmakitError
from .harness import TheoremCheckConfig, theorem_check
from .maps import (build_counterexample, example36_map, format_cmap,
                   parse_cmap, recover_canonical, spec_to_map,
                   synthesize_canonical, verify_additivity,
                   verify_injectivity_on_samples,
                   verify_product_preservation)
from .quasiorder import enumerate_quasi_orders, parse_qo
from .scalars import QQ, parse_field_tag
from .sma import SMA, Matrix, ProductKind, format_mat


def _default_seed():
    raw = os.environ.get("SMAKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return raw


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _print_matrix(name: str, X) -> None:
    if isinstance(X, Matrix):
        print(f"{name} (.mat):")
        print(format_mat(X), end="")
    else:
        print(f"{name}: {X!r}")


def _print_witness(witness, names) -> None:
    if witness is None:
        return
    for name, obj in zip(names, witness):
        _print_matrix(name, obj)


def _load_algebra(args) -> SMA:
    order = parse_qo(_read(args.qo), close=getattr(args, "close", False))
    field = parse_field_tag(getattr(args, "field", "Q") or "Q")
    return SMA(order, field)


def _load_spec_map(args):
    a = _load_algebra(args)
    mode = ProductKind.from_code(args.mode)
    spec = parse_cmap(_read(args.map), a.order, a.field)
    if spec.mode is not mode:
        raise ParseError(
            f"spec file is in mode {spec.mode.code}, command asked for "
            f"{mode.code}")
    return a, mode, spec_to_map(spec)


def _cmd_analyze(args) -> int:
    a = _load_algebra(args)
    order = a.order
    partition = a.classes()
    strict = sorted(order.strict)
    print(f"n: {order.n}")
    print(f"pairs: {len(order.pairs)}")
    print("strict part: "
          + (" ".join(f"({i},{j})" for i, j in strict) if strict else "-"))
    print(f"classes: {partition!r}")
    print(f"center dimension (class count): {len(partition)}")
    print(f"center dimension (commutant solve): "
          f"{a.center_dimension_oracle()}")
    cond = partition.all_classes_ge2
    print(f"condition (i) all classes >= 2: {'yes' if cond else 'no'}")
    return 0


def _cmd_enumerate(args) -> int:
    count = 0
    for idx, order in enumerate(enumerate_quasi_orders(args.n)):
        strict = sorted(order.strict)
        pairs = (",".join(f"({i},{j})" for i, j in strict)
                 if strict else "-")
        partition = order.classes()
        cond = "yes" if partition.all_classes_ge2 else "no"
        print(f"[{idx}] strict={pairs} classes={partition!r} cond_i={cond}")
        count += 1
    print(f"total: {count}")
    return 0


def _cmd_synthesize(args) -> int:
    a = _load_algebra(args)
    mode = ProductKind.from_code(args.mode)
    spec = synthesize_canonical(a, seed=args.seed, mode=mode)
    text = format_cmap(spec)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return 0


def _cmd_recover(args) -> int:
    a, mode, m = _load_spec_map(args)
    try:
        result = recover_canonical(m, a, mode, seed=args.seed,
                                   sample_count=args.samples)
    except RecoveryError as e:
        print(f"recovery FAILED at step {e.step}: {e.claim}")
        _print_witness(e.witnesses,
                       ("witness 1", "witness 2", "witness 3"))
        return 1
    spec = result.spec
    print(f"recovery succeeded: mode={mode.code} "
          f"samples={args.samples} seed={args.seed}")
    if result.diamond_reduced:
        print("diamond reduction: recovered spec describes the circle-"
              "preserving companion psi, phi(X) = psi(2X)/2")
    print(f"classes: {a.classes()!r}")
    print("omega per class: "
          + " ".join(f"{{{','.join(map(str, r.members))}}}:{r.omega.code}"
                     for r in spec.per_class))
    print("dagger per class: "
          + " ".join(r.dagger_code for r in spec.per_class))
    print("additivity certified per class: "
          + " ".join("yes" if c else "no"
                     for c in result.additivity_certified))
    if result.singleton_classes:
        print("singleton classes (multiplicativity only): "
              + " ".join(map(str, result.singleton_classes)))
    print(f"residual: {result.residual_samples} samples, exact match")
    print("recovered T (.mat):")
    print(format_mat(spec.T), end="")
    print("recovered spec (.cmap):")
    print(format_cmap(spec), end="")
    return 0


def _cmd_verify(args) -> int:
    a, mode, m = _load_spec_map(args)
    if args.check == "preserve":
        v = verify_product_preservation(m, mode, args.samples,
                                        seed=args.seed)
        names = ("X", "Y", "phi(X op Y)", "phi(X) op phi(Y)")
    elif args.check == "additive":
        v = verify_additivity(m, args.samples, seed=args.seed)
        names = ("X", "Y", "phi(X + Y)", "phi(X) + phi(Y)")
    else:
        v = verify_injectivity_on_samples(m, args.samples, seed=args.seed)
        names = ("X1", "X2", "common image")
    if v.ok:
        print(f"PASS: {args.check} ({args.samples} samples)")
        return 0
    print(f"FAIL: {args.check}: {v.detail}")
    _print_witness(v.witness, names)
    return 1


def _cmd_counterexample(args) -> int:
    a = _load_algebra(args)
    m = build_counterexample(a)
    seed = args.seed
    p_mul = verify_product_preservation(m, ProductKind.STANDARD,
                                        args.samples, seed=seed)
    p_circ = verify_product_preservation(m, ProductKind.CIRCLE,
                                         args.samples, seed=seed)
    inj = verify_injectivity_on_samples(m, args.samples, seed=seed)
    anti = verify_additivity(m, args.samples, seed=seed)
    print(f"map: {m.label}")
    print(f"preserve mul: {'pass' if p_mul.ok else 'FAIL'}")
    print(f"preserve njordan: {'pass' if p_circ.ok else 'FAIL'}")
    print(f"injective on samples: {'pass' if inj.ok else 'FAIL'}")
    if anti.ok:
        print("additivity: PASSED, but the construction must violate it")
        return 1
    print("additivity: violated, witness:")
    _print_witness(anti.witness,
                   ("X", "Y", "phi(X + Y)", "phi(X) + phi(Y)"))
    if p_mul.ok and p_circ.ok and inj.ok:
        return 0
    for v, names in ((p_mul, ("X", "Y", "phi(XY)", "phi(X)phi(Y)")),
                     (p_circ, ("X", "Y", "phi(X o Y)",
                               "phi(X) o phi(Y)")),
                     (inj, ("X1", "X2", "common image"))):
        if not v.ok:
            print(f"unexpected failure: {v.detail}")
            _print_witness(v.witness, names)
    return 1


def _cmd_theorem_check(args) -> int:
    config = TheoremCheckConfig(args.n, QQ, seed=args.seed,
                                samples_per_map=args.samples,
                                maps_per_quasi_order=args.maps)
    report = theorem_check(config)
    print(report.render(), end="")
    return 0 if report.ok else 1


def _cmd_example36(args) -> int:
    _, m = example36_map()
    p_mul = verify_product_preservation(m, ProductKind.STANDARD,
                                        args.samples, seed=args.seed)
    p_circ = verify_product_preservation(m, ProductKind.CIRCLE,
                                         args.samples, seed=args.seed)
    inj = verify_injectivity_on_samples(m, args.samples, seed=args.seed)
    anti = verify_additivity(m, args.samples, seed=args.seed)
    print(f"map: {m.label} (5x5, not a structural matrix algebra: "
          "tied entries)")
    print(f"preserve mul: {'pass' if p_mul.ok else 'FAIL'}")
    print(f"preserve njordan: {'pass' if p_circ.ok else 'FAIL'}")
    print(f"injective on samples: {'pass' if inj.ok else 'FAIL'}")
    ok = p_mul.ok and p_circ.ok and inj.ok and not anti.ok
    if anti.ok:
        print("additivity: PASSED, but the fixture must violate it")
    else:
        print("additivity: violated, witness:")
        _print_witness(anti.witness,
                       ("X", "Y", "phi(X + Y)", "phi(X) + phi(Y)"))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smakit",
        description="structural matrix algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_field(p):
        p.add_argument("--field", default="Q",
                       help="field tag: Q, Qi or F<p> (default Q)")

    def add_seed(p):
        p.add_argument("--seed", default=_default_seed(),
                       type=lambda s: int(s) if s.lstrip("-").isdigit()
                       else s,
                       help="seed (default: SMAKIT_SEED env or 0)")

    def add_samples(p, default=100):
        p.add_argument("--samples", type=int, default=default,
                       help=f"sample count (default {default})")

    p = sub.add_parser("analyze",
                       help="classes, center dimension, strict part")
    p.add_argument("qo", help=".qo file")
    p.add_argument("--close", action="store_true",
                   help="treat pairs as generators, take the closure")
    add_field(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("enumerate", help="all quasi-orders on [n]")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("synthesize",
                       help="random canonical map spec -> .cmap")
    p.add_argument("--qo", required=True, help=".qo file")
    add_field(p)
    add_seed(p)
    p.add_argument("--mode", required=True,
                   choices=[k.code for k in ProductKind])
    p.add_argument("-o", "--output", help="output .cmap path")
    p.add_argument("--close", action="store_true")
    p.set_defaults(fn=_cmd_synthesize)

    p = sub.add_parser("recover",
                       help="black-box recovery of a .cmap spec")
    p.add_argument("--qo", required=True)
    p.add_argument("--map", required=True, help=".cmap file")
    p.add_argument("--mode", required=True,
                   choices=[k.code for k in ProductKind])
    add_samples(p)
    add_field(p)
    add_seed(p)
    p.add_argument("--close", action="store_true")
    p.set_defaults(fn=_cmd_recover)

    p = sub.add_parser("verify", help="check one property of a spec")
    p.add_argument("--qo", required=True)
    p.add_argument("--map", required=True, help=".cmap file")
    p.add_argument("--mode", required=True,
                   choices=[k.code for k in ProductKind])
    p.add_argument("--check", required=True,
                   choices=["preserve", "additive", "injective"])
    add_samples(p)
    add_field(p)
    add_seed(p)
    p.add_argument("--close", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("counterexample",
                       help="cube map on an order with a singleton class")
    p.add_argument("--qo", required=True)
    add_field(p)
    add_seed(p)
    add_samples(p, default=200)
    p.add_argument("--close", action="store_true")
    p.set_defaults(fn=_cmd_counterexample)

    p = sub.add_parser("theorem-check",
                       help="exhaustive sweep over [n], field Q")
    p.add_argument("--n", type=int, required=True)
    add_seed(p)
    add_samples(p)
    p.add_argument("--maps", type=int, default=3,
                   help="maps per quasi-order per mode (default 3)")
    p.set_defaults(fn=_cmd_theorem_check)

    p = sub.add_parser("example36",
                       help="tied-entry 5x5 fixture outside the SMA class")
    add_seed(p)
    add_samples(p, default=200)
    p.set_defaults(fn=_cmd_example36)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags, 0 on --help
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (ParseError, PreconditionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SmakitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
