"""
Build service objects from the pydantic file models, and read those models from disk.
"""
import logging
from pathlib import Path
from typing import Optional, Tuple, Type, TypeVar

from pydantic import BaseModel

from app.exceptions import InputValidationError
from app.schemas import ContextSpec, LatticeFile, MatrixSpec, OrderFile, PointSpec, PolynomialFile
from app.services.genval import PolynomialO, WittPoint, make_point, make_polynomial
from app.services.lattices import Lattice, Order, make_lattice, make_order
from app.services.linalg import RMatrix
from app.services.witt import ArithmeticContext, context_from_modulus, make_context
from app.utils.serializer import digest_bytes

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)


def load_model(path, model: Type[Model]) -> Tuple[Model, str]:
    """Parse a JSON file into a model; returns the model and the digest of the raw bytes."""
    data = Path(path).read_bytes()
    return model.model_validate_json(data), digest_bytes(data)


def build_context(spec: ContextSpec, precision: Optional[int] = None) -> ArithmeticContext:
    N = precision or spec.N
    try:
        if spec.modulus is not None:
            return context_from_modulus(spec.p, N, spec.modulus)
        return make_context(spec.p, spec.m, N)
    except ValueError as e:
        raise InputValidationError(str(e))


def ring_value(ctx: ArithmeticContext, value):
    if isinstance(value, list) and len(value) > ctx.m:
        raise InputValidationError(f"Ring element {value} has more than m = {ctx.m} coefficients")
    return ctx.element(value)


def build_matrix(ctx: ArithmeticContext, spec) -> RMatrix:
    grid = spec.grid() if isinstance(spec, MatrixSpec) else spec
    try:
        return RMatrix.from_rows(ctx, [[ring_value(ctx, v) for v in row] for row in grid])
    except ValueError as e:
        raise InputValidationError(str(e))


def build_order(spec: OrderFile, precision: Optional[int] = None) -> Order:
    """Validate the order at the file's own precision, then lift or reduce it to `precision`."""
    ctx = build_context(spec.context)
    constants = [
        [[ring_value(ctx, v) for v in cell] for cell in row] for row in spec.structure_constants
    ]
    labels = spec.labels
    generators = None
    if spec.generators is not None and labels is not None:
        generators = [labels.index(g) for g in spec.generators]
    try:
        order = make_order(
            ctx,
            constants,
            [ring_value(ctx, v) for v in spec.identity],
            labels=labels,
            generator_indices=generators,
            group_size=spec.group_size,
        )
    except ValueError as e:
        raise InputValidationError(str(e))
    logger.debug(f"Order of dimension {order.dimension} loaded over {ctx}")
    return order.with_precision(precision) if precision else order


def build_lattice(spec: LatticeFile, order: Order, precision: Optional[int] = None) -> Lattice:
    """Validate against an order at the file's precision, then lift or reduce to `precision`."""
    ctx = order.ctx
    missing = set(order.labels) - set(spec.matrices)
    extra = set(spec.matrices) - set(order.labels)
    if missing or extra:
        raise InputValidationError(
            f"Lattice matrices must be keyed by the order's labels (missing {sorted(missing)}, unknown {sorted(extra)})"
        )
    matrices = {}
    for label, M in spec.matrices.items():
        built = build_matrix(ctx, M)
        if built.rows != spec.rank or built.cols != spec.rank:
            raise InputValidationError(f"Matrix for {label} is {built.rows}x{built.cols}, rank is {spec.rank}")
        matrices[label] = built
    try:
        lattice = make_lattice(order, matrices, name=spec.name)
    except ValueError as e:
        raise InputValidationError(str(e))
    return lattice.with_precision(precision) if precision else lattice


def build_polynomial(spec: PolynomialFile, ctx: ArithmeticContext, precision: Optional[int] = None) -> PolynomialO:
    terms = {}
    for term in spec.terms:
        exponents = tuple(term.exponents)
        terms[exponents] = terms.get(exponents, ctx.zero()) + ring_value(ctx, term.coefficient)
    f = make_polynomial(ctx, spec.n, terms)
    return f.with_precision(precision) if precision else f


def build_point(spec: PointSpec, ctx: ArithmeticContext) -> WittPoint:
    try:
        return make_point(ctx, spec.digits, l=spec.l)
    except ValueError as e:
        raise InputValidationError(str(e))


def load_lattice_inputs(lattice_path, order_path=None) -> Tuple[OrderFile, LatticeFile, dict]:
    """
    Resolve a lattice file together with its order: an explicit order file,
    the lattice's inline order, or its order_file reference (relative path).
    """
    lattice, lattice_digest = load_model(lattice_path, LatticeFile)
    digests = {"lattice": lattice_digest}
    if order_path is not None:
        order, digests["order"] = load_model(order_path, OrderFile)
    elif lattice.order is not None:
        order = lattice.order
    elif lattice.order_file is not None:
        order, digests["order"] = load_model(Path(lattice_path).parent / lattice.order_file, OrderFile)
    else:
        raise InputValidationError("No order given: pass an order file or reference one from the lattice file")
    return order, lattice, digests
