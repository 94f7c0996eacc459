"""Security thresholds for monogamy-based key distribution.

Eavesdroppers may have any finite outcome alphabet. The package computes
the critical CHSH scores for quantum and no-signalling monogamy and
includes brute-force checks of the entropy bound the thresholds rest on.
"""

from monogamy_qkd.adversary import (
    ChannelModel,
    Counterexample,
    EveStrategy,
    build_counterexample,
    concavity_bound_check,
    eve_information,
    guessing_probability,
    minimize_conditional_entropy,
)
from monogamy_qkd.entropy import (
    binary_entropy,
    conditional_entropy_given,
    mutual_information,
    shannon_entropy,
)
from monogamy_qkd.errors import DomainError, UsageError
from monogamy_qkd.monogamy import (
    MonogamyModel,
    Theory,
    evaluate,
    eve_guess_from_beta,
    f_nosignalling,
    f_quantum,
)
from monogamy_qkd.security import (
    CriticalResult,
    Status,
    check_condition,
    check_pointwise,
    critical_beta,
    tsirelson,
)

__version__ = "0.1.0"
