"""Linear algebra over the chain ring R_N."""
from app.services.linalg.matrix import RMatrix, vector_matrix
from app.services.linalg.forms import (
    Elimination,
    HowellForm,
    certify,
    det_valuation,
    eliminate,
    howell_form,
    invert,
    kernel,
    rank,
    residue_rank,
    saturated_echelon,
    smith_invariants,
)
