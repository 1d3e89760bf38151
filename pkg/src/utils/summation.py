# Compensated summation helpers
import math

import numpy as np


def fsum_real(values) -> float:
    """Exactly rounded sum of a real array (order independent)."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def fsum_complex(values) -> complex:
    """Exactly rounded componentwise sum of a complex array."""
    arr = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))


def compensated_logsumexp(x) -> float:
    """log(sum(exp(x))) with a max shift and an exactly rounded inner sum.

    The result does not depend on the order of ``x``, so permuted inputs
    (e.g. a table and its orientation reversal) give bit-identical values.
    """
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0:
        return -math.inf
    peak = float(np.max(arr))
    if not math.isfinite(peak):
        return peak
    return peak + math.log(math.fsum(np.exp(arr - peak).tolist()))
