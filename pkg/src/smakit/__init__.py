"""smakit: structural matrix algebras over exact fields.

Quasi-order combinatorics, exact idempotent calculus, inner
diagonalization, and the synthesis / verification / recovery machinery
for multiplicative and Jordan-multiplicative maps with their canonical
form, including the singleton-class cube counterexamples.
"""

from .errors import (DiagonalizationError, FieldMismatchError, InputError,
                     MembershipError, ParseError, PreconditionError,
                     QuasiOrderError, RecoveryError, SearchBudgetError,
                     SingularMatrixError, SmakitError)
from .scalars import (QI, QQ, FieldDescriptor, Scalar, ScalarMap,
                      apply_scalar_map, conjugation_map, cube_map,
                      entrywise_map, format_scalar, identity_map,
                      parse_field_tag, parse_scalar, prime_field,
                      scalar_arith, scalar_map_catalog)
from .quasiorder import (CentralPartition, QuasiOrder, SaturationReport,
                         central_classes, enumerate_quasi_orders, format_qo,
                         image_and_preimage, parse_qo, saturation_check,
                         strict_part, transitive_reflexive_closure,
                         validate_quasi_order)
from .sma import (SMA, Matrix, ProductKind, TransitiveMap,
                  apply_induced_automorphism, format_gmap, format_mat,
                  parse_gmap, parse_mat, product, random_transitive_map,
                  trivial_transitive_map, validate_transitive_map)
from .diagonalization import (Diagonalizer, IdempotentFamily,
                              IdempotentRelationReport, exact_rank,
                              inner_diagonalize, jordan_idempotent_tests,
                              rank_one_decompose)
from .maps import (CanonicalMapSpec, ClassRule, EvaluableMap,
                   Example36Algebra, RecoveryResult, Verdict,
                   build_counterexample, eval_canonical, example36_map,
                   format_cmap, parse_cmap, recover_canonical, spec_to_map,
                   synthesize_canonical, verify_additivity,
                   verify_injectivity_on_samples,
                   verify_product_preservation)
from .harness import (RunReport, TheoremCheckConfig, theorem_check)

__version__ = "0.1.0"
