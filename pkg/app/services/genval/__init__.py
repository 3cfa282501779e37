"""Naive and generic valuations of polynomials at truncated Witt points."""
from app.services.genval.polynomial import PolynomialO, WittPoint, make_point, make_polynomial, naive_valuation
from app.services.genval.valuation import (
    CommonWitness,
    WitnessResult,
    common_witness,
    generic_valuation,
    lift_valuation,
    lifted_expansion,
    variety_membership,
    witness_lift,
)
