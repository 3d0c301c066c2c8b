"""Exact w(x), friable counts, rigorous bounds, and witness search.

w(x) is the largest w for which some product of distinct integers in [2, x]
is a perfect w-th power y^w with y >= 2. The heavy lifting lives in the
compiled _core extension; this package is a thin re-export.
"""

from ._core import (
    CapacityError,
    CertificateError,
    DomainError,
    __version__,
    best_witness,
    certificate_json,
    envelope,
    power_chain,
    predicted_argmax_q,
    psi,
    psi_envelope,
    scale_L,
    upper_bound,
    verify_certificate,
    w_exact,
)

__all__ = [
    "CapacityError",
    "CertificateError",
    "DomainError",
    "__version__",
    "best_witness",
    "certificate_json",
    "envelope",
    "power_chain",
    "predicted_argmax_q",
    "psi",
    "psi_envelope",
    "scale_L",
    "upper_bound",
    "verify_certificate",
    "w_exact",
]
