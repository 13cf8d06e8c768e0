"""Time-scale calculus: delta, nabla and diamond-alpha integrals, inequality checks, fuzzing."""

import json

from ._core import (
    DegenerateKernelError,
    DomainError,
    Error,
    ExprEvalError,
    ExprSyntaxError,
    InputError,
    TimeScale,
    canonical,
    cauchy_schwarz_2d,
    check_names,
    differentiate,
    evaluate,
    hardy_pair,
    holder_2d,
    integrate,
    reverse_holder,
    young,
)

__all__ = [
    "DegenerateKernelError",
    "DomainError",
    "Error",
    "ExprEvalError",
    "ExprSyntaxError",
    "InputError",
    "TimeScale",
    "canonical",
    "cauchy_schwarz_2d",
    "check",
    "check_names",
    "differentiate",
    "evaluate",
    "fuzz",
    "hardy_pair",
    "holder_2d",
    "integrate",
    "reverse_holder",
    "young",
]


def check(doc):
    """Evaluate an instance document (same schema as `tscalc check`)."""
    from ._core import _check_json

    return json.loads(_check_json(json.dumps(doc)))


def fuzz(seed=42, instances=100, checks=None, threads=1, shrink=True, dense_fraction=0.1):
    """Run the seeded property suite and return the summary as a dict."""
    from ._core import _fuzz_json

    return json.loads(_fuzz_json(seed, instances, list(checks or []), threads, shrink, dense_fraction))
