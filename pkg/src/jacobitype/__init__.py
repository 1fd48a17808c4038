"""Exact computations for Jacobi-type polynomials: construction, orthogonality,
higher-order recurrences and Krall-Jacobi detection."""
from .exact import Poly, SymValue, EpsFrac
from .jacobi import JacobiParams, jacobi_poly
from .family import DegenerateFamily, FamilyConfig, QSequence, qsequence, q_polynomial, lambda_gh
from .bilinear import GENERIC, SOBOLEV, BilinearConfig, Pairing, pair, det_a_matrix
from .spectral import (KrallSpec, MeasureFit, RecurrenceTable, algebra_scan, divisibility_family,
                       expand_in_q, krall_build, measure_fit, nonexistence_witness,
                       recurrence_table, three_term_check)

__all__ = [
    "Poly", "SymValue", "EpsFrac", "JacobiParams", "jacobi_poly", "DegenerateFamily",
    "FamilyConfig", "QSequence", "qsequence", "q_polynomial", "lambda_gh", "GENERIC", "SOBOLEV",
    "BilinearConfig", "Pairing", "pair", "det_a_matrix", "KrallSpec", "MeasureFit",
    "RecurrenceTable", "algebra_scan", "divisibility_family", "expand_in_q", "krall_build",
    "measure_fit", "nonexistence_witness", "recurrence_table", "three_term_check",
]
