"""Lifting constructions: intertwining lifts along dilations and explicit co-extensions."""
from .core import RESIDUALS, LiftResult, QPair, Residual, qpart_step
from .isometric import isometric_lift_q, unitary_q_lift
from .coisometric import adjoint_lift_q, coiso_lift_q, qcommutant_lift
from .coextension import (CoextensionTriple, IntertwiningCoextension, pad_coextension,
                          q_coextension, q_intertwining_coextension)

__all__ = ["RESIDUALS", "LiftResult", "QPair", "Residual", "qpart_step", "isometric_lift_q",
           "unitary_q_lift", "adjoint_lift_q", "coiso_lift_q", "qcommutant_lift",
           "CoextensionTriple", "IntertwiningCoextension", "pad_coextension", "q_coextension",
           "q_intertwining_coextension"]
