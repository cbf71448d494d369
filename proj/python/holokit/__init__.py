"""Invariant metrics, boundary rescaling and embedding bounds."""

from ._core import (
    Domain,
    HolokitError,
    caratheodory_metric,
    closed_form_distance,
    closed_form_metric,
    fmt17,
    fridman_boundary_experiment,
    fridman_zero_cert,
    herbort_rho_star,
    kobayashi_distance,
    kobayashi_metric,
    sandwich_constants,
    scaling_step,
)

__all__ = [
    "Domain",
    "HolokitError",
    "caratheodory_metric",
    "closed_form_distance",
    "closed_form_metric",
    "fmt17",
    "fridman_boundary_experiment",
    "fridman_zero_cert",
    "herbort_rho_star",
    "kobayashi_distance",
    "kobayashi_metric",
    "sandwich_constants",
    "scaling_step",
]
