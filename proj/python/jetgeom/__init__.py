"""Jet-space geometry of autonomous ODE systems.

Points and vectors are sequences of floats; matrices and tensors come back
as numpy arrays.
"""

from ._jetgeom import (
    BlowUpError,
    EvalError,
    Expr,
    MetricDomainError,
    MetricField,
    ParseError,
    ValidationError,
    VectorField,
    cartan_connection,
    christoffel,
    curvature,
    deformation_tensor,
    el_residual,
    em_form,
    geometric_dynamics_acceleration,
    integrate,
    integrate_prolongation,
    jacobian,
    kaldor_energy_oracle,
    kaldor_field,
    levelset,
    load_model,
    maxwell_residual,
    nonlinear_connection,
    parse,
    prolonged_acceleration,
    report,
    tbm_energy_oracle,
    tbm_field,
    torsion,
    verify_prolongation,
    yang_mills_energy,
)

__version__ = "0.1.0"
