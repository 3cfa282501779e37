"""
Command implementations shared by the CLI and the HTTP routes.

Each cmd_* takes a validated request model and returns a RunReport. A
PrecisionExhausted failure is retried once at doubled precision; the retry is
recorded in the report and a second failure propagates.
"""
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from app.config import Settings, get_settings
from app.constants import REPORT_FORMAT_VERSION
from app.exceptions import InputValidationError, PrecisionExhausted
from app.schemas import (
    CensusRequest,
    GenvalRequest,
    GroupRequest,
    PointSpec,
    PrecisionRetry,
    RigidRequest,
    RunReport,
    WittRequest,
)
from app.services.census import census_rigid
from app.services.genval import (
    generic_valuation,
    naive_valuation,
    variety_membership,
    witness_lift,
)
from app.services.groups import (
    CATALOG,
    CATALOG_ALIASES,
    catalog_group,
    double_cosets,
    group_order,
    hochschild1_vanishes,
    hochschild1_via_derivations,
    make_group,
    parse_generators,
    permutation_lattice,
)
from app.services.lattices import Lattice, ext1_invariants, hom_basis, rigidity_profile
from app.services.witt import (
    from_witt_digits,
    ghost_oracle,
    make_context,
    make_digits,
    teichmuller,
    to_witt_digits,
    witt_add_digits,
    witt_mul_digits,
)
from app.utils.loaders import build_context, build_lattice, build_order, build_point, build_polynomial, ring_value
from app.utils.serializer import encode_census, encode_context, encode_element, encode_ext, serialize_results

logger = logging.getLogger(__name__)


@dataclass
class RunOptions:
    seed: int
    record_timings: bool
    settings: Settings
    inputs: dict = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        settings: Optional[Settings] = None,
        seed: Optional[int] = None,
        record_timings: Optional[bool] = None,
        inputs: Optional[dict] = None,
    ) -> "RunOptions":
        settings = settings or get_settings()
        return cls(
            seed=settings.seed if seed is None else seed,
            record_timings=settings.record_timings if record_timings is None else record_timings,
            settings=settings,
            inputs=dict(inputs or {}),
        )


@dataclass
class _Run:
    """Bookkeeping for one command: retries, timings and the context finally used."""
    retries: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    context: dict = field(default_factory=dict)

    def with_retry(self, compute: Callable[[int], dict], precision: int) -> dict:
        start = time.perf_counter()
        try:
            results = compute(precision)
        except PrecisionExhausted as e:
            doubled = 2 * precision
            logger.warning(f"Precision {precision} exhausted ({e}); retrying once at {doubled}")
            self.retries.append(PrecisionRetry(from_precision=precision, to_precision=doubled, reason=str(e)))
            results = compute(doubled)
            logger.info(f"Retry at precision {doubled} succeeded")
        self.timings["compute"] = time.perf_counter() - start
        return results

    def report(self, command: str, options: RunOptions, results: dict) -> RunReport:
        return RunReport(
            command=command,
            format_version=REPORT_FORMAT_VERSION,
            seed=options.seed,
            inputs=options.inputs,
            context=self.context,
            results=serialize_results(results),
            precision_retries=self.retries,
            timings=self.timings if options.record_timings else None,
        )


# ---------- witt ----------

def _digit_operand(ctx, value, name: str):
    if value is None:
        raise InputValidationError(f"Operand {name} is required")
    if not isinstance(value, list):
        raise InputValidationError(f"Operand {name} must be a list of Witt digits")
    return make_digits(ctx, value)


def _element_operand(ctx, value, name: str):
    if value is None:
        raise InputValidationError(f"Operand {name} is required")
    return ring_value(ctx, value)


def cmd_witt(request: WittRequest, options: Optional[RunOptions] = None) -> RunReport:
    """Digit arithmetic, Teichmüller lifts, digit conversions and the ghost polynomials."""
    options = options or RunOptions.create()
    run = _Run()

    def compute(N: int) -> dict:
        ctx = make_context(request.p, request.m, N)
        run.context = encode_context(ctx)
        op = request.op
        if op in ("add", "mul"):
            x = _digit_operand(ctx, request.x, "x")
            y = _digit_operand(ctx, request.y, "y")
            if x.l != y.l:
                raise InputValidationError(f"Operands have {x.l} and {y.l} digits")
            a, b = from_witt_digits(x), from_witt_digits(y)
            value = a + b if op == "add" else a * b
            digits = to_witt_digits(value, x.l)
            oracle = witt_add_digits(x, y) if op == "add" else witt_mul_digits(x, y)
            return {
                "op": op,
                "digits": digits.encode(),
                "element": encode_element(value),
                "oracle_digits": oracle.encode(),
                "agree": digits.digits == oracle.digits,
            }
        if op == "teichmuller":
            residue = _element_operand(ctx.residue_field(), request.x, "x")
            return {"op": op, "element": encode_element(teichmuller(residue, ctx))}
        if op == "to-digits":
            value = _element_operand(ctx, request.x, "x")
            l = N if request.l is None else request.l
            return {"op": op, "l": l, "digits": to_witt_digits(value, l).encode()}
        if op == "from-digits":
            return {"op": op, "element": encode_element(from_witt_digits(_digit_operand(ctx, request.x, "x")))}
        oracle = ghost_oracle(request.index, request.p)
        return {
            "op": op,
            "index": request.index,
            "sum": str(oracle.sum_polynomial.as_expr()),
            "product": str(oracle.product_polynomial.as_expr()),
        }

    results = run.with_retry(compute, request.N)
    return run.report("witt", options, results)


# ---------- rigid / census ----------

def _lattice_results(L: Lattice) -> dict:
    profile = rigidity_profile(L)
    ext = ext1_invariants(L, L)
    return {
        "rank": L.rank,
        "rigid": profile.rigid,
        "end_rank": profile.end_rank,
        "image_rank": profile.image_rank,
        "residue_end_dim": profile.residue_end_dim,
        "ext1": encode_ext(ext),
        "separability_verified": L.order.separability_verified,
    }


def _load_lattice(request: RigidRequest) -> Lattice:
    order = build_order(request.order)
    return build_lattice(request.lattice, order)


def cmd_rigid(request: RigidRequest, options: Optional[RunOptions] = None) -> RunReport:
    """Rigidity of a lattice together with its Ext¹(L, L) invariants."""
    options = options or RunOptions.create()
    run = _Run()
    L0 = _load_lattice(request)

    def compute(N: int) -> dict:
        L = L0.with_precision(N)
        run.context = encode_context(L.ctx)
        return _lattice_results(L)

    results = run.with_retry(compute, request.precision or L0.ctx.N)
    return run.report("rigid", options, results)


def cmd_census(request: CensusRequest, options: Optional[RunOptions] = None) -> RunReport:
    """Sublattices up to the colength bound, grouped into isomorphism classes."""
    options = options or RunOptions.create()
    settings = options.settings
    run = _Run()
    L0 = _load_lattice(request)

    def compute(N: int) -> dict:
        L = L0.with_precision(N)
        run.context = encode_context(L.ctx)
        report = census_rigid(
            L,
            request.max_colength,
            seed=options.seed,
            limit=settings.enumeration_limit,
            failure_bits=settings.failure_bits,
        )
        return encode_census(report)

    results = run.with_retry(compute, request.precision or L0.ctx.N)
    return run.report("census", options, results)


# ---------- genval ----------

def point_from_text(text: str, l: int) -> PointSpec:
    """
    A point from a JSON array of coordinates: each coordinate is a list of l
    digits, or a single digit standing for its first Witt digit (the rest zero).
    """
    try:
        coordinates = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputValidationError(f"Point {text!r} is not valid JSON: {e}")
    if not isinstance(coordinates, list):
        coordinates = [coordinates]
    digits = []
    for c in coordinates:
        if isinstance(c, list) and len(c) == l:
            digits.append(c)
        elif isinstance(c, (int, list)) and l >= 1:
            digits.append([c] + [0] * (l - 1))
        else:
            raise InputValidationError(f"Coordinate {c!r} does not describe {l} Witt digits")
    return PointSpec(n=len(digits), l=l, digits=digits)


def cmd_genval(request: GenvalRequest, options: Optional[RunOptions] = None) -> RunReport:
    """Naive and generic valuation at a Witt point, with optional witness lift and threshold test."""
    options = options or RunOptions.create()
    settings = options.settings
    run = _Run()
    ctx0 = build_context(request.context)

    def compute(N: int) -> dict:
        f = build_polynomial(request.polynomial, ctx0, N)
        x = build_point(request.point, f.ctx)
        run.context = encode_context(f.ctx)
        results = {
            "n": f.n,
            "l": x.l,
            "naive_valuation": naive_valuation(f),
            "generic_valuation": generic_valuation(f, x),
        }
        if request.witness:
            w = witness_lift(f, x, seed=options.seed, limit=settings.enumeration_limit)
            results["witness"] = {
                "z": [encode_element(z) for z in w.z],
                "lift": [encode_element(y) for y in w.lift],
                "valuation": w.valuation,
                "extension_degree": w.extension_degree,
                "points_tried": w.points_tried,
                "method": w.method,
            }
        if request.threshold is not None:
            results["threshold"] = request.threshold
            results["member"] = variety_membership(f, x, request.threshold)
        return results

    results = run.with_retry(compute, request.precision or request.context.N)
    return run.report("genval", options, results)


# ---------- group ----------

def _resolve_group(text: str, cap: int):
    name = text.strip()
    known = {k.upper() for k in CATALOG} | set(CATALOG_ALIASES)
    if name.upper() in known:
        return catalog_group(name, cap)
    return make_group(parse_generators(name), cap)


def cmd_group(request: GroupRequest, options: Optional[RunOptions] = None) -> RunReport:
    """Permutation lattices O[H\\G] and group-algebra probes for a permutation group."""
    options = options or RunOptions.create()
    settings = options.settings
    run = _Run()
    G = _resolve_group(request.group, settings.group_cap)
    H = G.subgroup(parse_generators(request.subgroup)) if request.subgroup else frozenset({0})
    header = {
        "op": request.op,
        "group_order": G.order,
        "subgroup_order": len(H),
        "index": G.order // len(H),
    }

    def compute(N: int) -> dict:
        ctx = make_context(request.p, request.m, N)
        run.context = encode_context(ctx)
        results = dict(header)
        if request.op == "double-cosets":
            partition = double_cosets(G, H)
            results["double_cosets"] = len(partition)
            results["sizes"] = partition.sizes
            results["cosets"] = [[G.label(g) for g in coset] for coset in partition.cosets]
            return results

        order = group_order(G, ctx)
        if request.op == "hh1":
            oracle = hochschild1_via_derivations(order)
            probe = hochschild1_vanishes(order, settings.enveloping_cap)
            results.update({
                "hh1_vanishes": probe,
                "derivation_rank": oracle.derivation_rank,
                "inner_invariants": list(oracle.inner_invariants),
                "derivation_oracle_vanishes": oracle.vanishes,
                "agree": probe == oracle.vanishes,
            })
            return results

        L = permutation_lattice(G, H, ctx, order)
        if request.op == "endrank":
            results["end_rank"] = hom_basis(L, L).rank
            results["double_cosets"] = len(double_cosets(G, H))
        elif request.op == "rigid":
            results.update(_lattice_results(L))
        else:
            report = census_rigid(
                L,
                request.max_colength,
                seed=options.seed,
                limit=settings.enumeration_limit,
                failure_bits=settings.failure_bits,
            )
            results["census"] = encode_census(report)
        return results

    results = run.with_retry(compute, request.precision or settings.precision)
    return run.report("group", options, results)
