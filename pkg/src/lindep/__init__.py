"""Exact cyclotomic arithmetic, L(1, chi) evaluation and relation certificates."""

from ._version import __version__
from .characters import (
    DirichletCharacter,
    PeriodicFunction,
    character_expansion,
    decompose_parity,
    enumerate_characters,
    erdos_enumerate,
    unit_group_structure,
)
from .cyclotomic import CycloElt, absolute_norm, cyclotomic_intersection_modulus, embed_complex, galois_apply, zeta_power
from .errors import LindepError
from .harness import (
    check_hypothesis_coprime,
    erdos_survey,
    sophie_germain_chain,
    verify_cot_identity,
    verify_group_lemma,
    verify_okada,
    verify_theorem_all,
    verify_theorem_even,
    verify_theorem_odd,
)
from .lvalues import l_one_cot, l_one_digamma, l_one_logform, l_one_series, verify_nonvanishing
from .numerics import Complex, PrecisionContext, Real, cot_derivative, cot_pi, digamma_rational, log_real, pi
from .relations import (
    NoRelationCertificate,
    RelationCertificate,
    find_field_relation,
    find_integer_relation,
    verify_relation,
)
from .units import RamachandraUnit, d_exponent, eta, log_embedding_matrix, multiplicative_independence_rank, xi

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
