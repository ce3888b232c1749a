"""Private information retrieval from MDS-coded storage with entangled servers.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from ._qpirsim import (
    QpirError,
    Rational,
    SchemeParams,
    audit_privacy,
    audit_secrecy,
    capacity_table,
    derive_params,
    oracle_check,
    pad_collusion,
    scheme_rate,
    simulate,
    two_server_example,
    verify_codes,
)

__all__ = [
    "QpirError",
    "Rational",
    "SchemeParams",
    "audit_privacy",
    "audit_secrecy",
    "capacity_table",
    "derive_params",
    "oracle_check",
    "pad_collusion",
    "scheme_rate",
    "simulate",
    "two_server_example",
    "verify_codes",
]
