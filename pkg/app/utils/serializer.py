import hashlib
import json
import math

from app.services.census import CensusReport, SublatticeBasis
from app.services.lattices import ExtInvariants
from app.services.linalg import RMatrix
from app.services.witt import ArithmeticContext, RingElement, WittDigits


def encode_context(ctx: ArithmeticContext) -> dict:
    return {"p": ctx.p, "m": ctx.m, "N": ctx.N, "modulus": list(ctx.modulus)}


def encode_element(x: RingElement) -> list:
    return list(x.coeffs)


def encode_ext(ext: ExtInvariants) -> dict:
    return {
        "invariants": list(ext.invariants),
        "exponent": ext.exponent,
        "certified": ext.certified,
        "policy": ext.policy,
    }


def encode_census(report: CensusReport) -> dict:
    classes = []
    for c in report.classes:
        classes.append({
            "representative": c.representative.B.encode(),
            "valuations": list(c.representative.valuations),
            "rigid": c.rigid,
            "end_rank": c.end_rank,
            "residue_end_dim": c.invariants.residue_end_dim,
            "ext1": encode_ext(c.invariants.ext1),
            "multiplicities": {str(k): v for k, v in sorted(c.multiplicities.items())},
        })
    return {
        "max_colength": report.max_colength,
        "precision": report.precision,
        "level_counts": {str(k): v for k, v in sorted(report.level_counts.items())},
        "sublattice_count": report.total,
        "class_count": len(report.classes),
        "rigid_class_count": len(report.rigid_classes),
        "classes": classes,
    }


def _sanitize(obj):
    """Recursively convert ring objects, tuples and sets into JSON-compliant values."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    elif isinstance(obj, (set, frozenset)):
        return sorted(_sanitize(v) for v in obj)
    elif isinstance(obj, RingElement):
        return encode_element(obj)
    elif isinstance(obj, RMatrix):
        return obj.encode()
    elif isinstance(obj, WittDigits):
        return obj.encode()
    elif isinstance(obj, SublatticeBasis):
        return obj.B.encode()
    elif isinstance(obj, ExtInvariants):
        return encode_ext(obj)
    elif isinstance(obj, ArithmeticContext):
        return encode_context(obj)
    elif isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return None
        return obj
    return obj


def serialize_results(results) -> dict:
    if isinstance(results, dict):
        return _sanitize(results)
    raise ValueError("Unsupported results format")


def canonical_json(obj) -> str:
    return json.dumps(_sanitize(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def digest_payload(obj) -> str:
    """Digest of an in-memory input (HTTP bodies), over its canonical JSON form."""
    if hasattr(obj, "model_dump"):
        obj = obj.model_dump(mode="json")
    return digest_bytes(canonical_json(obj).encode("utf-8"))
