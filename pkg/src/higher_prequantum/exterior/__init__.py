"""Exact graded exterior calculus on flat charts."""

from .chart import Chart
from .coeffn import CoefFn
from .forms import (
    AffineMap,
    Form,
    MultiVector,
    apply_vector,
    contract,
    d,
    evaluate,
    integrate_torus,
    lie_bracket,
    lie_derivative,
    lie_derivative_multivector,
    pullback,
    push_vector,
    sort_index,
    vector_field,
    wedge,
)
from .scalar import I, ONE, TAU, ZERO, Scalar, as_scalar

__all__ = [
    "AffineMap", "Chart", "CoefFn", "Form", "I", "MultiVector", "ONE", "Scalar", "TAU", "ZERO",
    "apply_vector", "as_scalar", "contract", "d", "evaluate", "integrate_torus", "lie_bracket",
    "lie_derivative", "lie_derivative_multivector", "pullback", "push_vector", "sort_index",
    "vector_field", "wedge",
]
