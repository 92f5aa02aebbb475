"""Unit-ball families and the loader turning norm files and CLI sources into Norm objects."""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, Union

import yaml
from pydantic import TypeAdapter, ValidationError

from ..errors import DomainError, NormValidationError
from ..models import NormFile, PolygonNormFile, RegularNormFile
from .base import CirclePoint, DirectionRange, FlatSpot, Norm
from .lp import EuclideanNorm, LpNorm
from .polygon import PolygonNorm
from .sampled import SampledNorm

logger = logging.getLogger(__name__)

_norm_file = TypeAdapter(NormFile)


def _build_polygon(spec: PolygonNormFile) -> Norm:
    return PolygonNorm.from_vertices(spec.vertices, symmetrize=spec.symmetrize)


def _build_regular(spec: RegularNormFile) -> Norm:
    try:
        return PolygonNorm.regular(spec.sides, spec.rotation)
    except DomainError as e:
        raise NormValidationError(str(e)) from e


NORM_BUILDERS: Dict[str, Callable[[Any], Norm]] = {
    "polygon": _build_polygon,
    "lp": lambda spec: LpNorm(spec.p),
    "euclidean": lambda spec: EuclideanNorm(),
    "sampled": lambda spec: SampledNorm(spec.pairs),
    "regular": _build_regular,
}


def build_norm(data: Dict[str, Any]) -> Norm:
    """Validate a parsed norm document and construct the norm"""
    try:
        spec = _norm_file.validate_python(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise NormValidationError(f"invalid norm file at {where or 'root'}: {first['msg']}") from e
    norm = NORM_BUILDERS[spec.type](spec)
    logger.debug("built %r (digest %s)", norm, norm.digest())
    return norm


def load_norm(path: Union[str, Path]) -> Norm:
    """Load a norm from a YAML or JSON file"""
    path = Path(path)
    if not path.exists():
        raise NormValidationError(f"norm file {path} not found")
    with open(path, "r") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise NormValidationError(f"cannot parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise NormValidationError(f"{path} must contain a mapping with a 'type' key")
    return build_norm(data)


def parse_norm_source(source: str) -> Norm:
    """Resolve a CLI norm source.

    Accepted forms: ``euclidean``, ``lp:<p>``, ``regular:<sides>``,
    ``polygon:<file>``, ``sampled:<file>`` or a bare file path.
    """
    kind, _, arg = source.partition(":")
    if kind == "euclidean" and not arg:
        return EuclideanNorm()
    if kind == "lp" and arg:
        try:
            p = "inf" if arg in ("inf", "infinity") else float(arg)
        except ValueError:
            raise NormValidationError(f"bad lp exponent {arg!r}")
        return build_norm({"type": "lp", "p": p})
    if kind == "regular" and arg:
        try:
            sides = int(arg)
        except ValueError:
            raise NormValidationError(f"bad side count {arg!r}")
        return build_norm({"type": "regular", "sides": sides})
    if kind in ("polygon", "sampled") and arg:
        norm = load_norm(arg)
        if norm.kind != kind:
            raise NormValidationError(f"{arg} describes a {norm.kind} norm, expected {kind}")
        return norm
    return load_norm(source)


__all__ = [
    "CirclePoint",
    "DirectionRange",
    "EuclideanNorm",
    "FlatSpot",
    "LpNorm",
    "Norm",
    "NORM_BUILDERS",
    "PolygonNorm",
    "SampledNorm",
    "build_norm",
    "load_norm",
    "parse_norm_source",
]
