from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel

try:
    from ..errors import DomainError
    from ..geometry import PlanePoint, to_fraction
    from ..models import RunConfig
except ImportError:
    # Fallback for direct execution
    from app.errors import DomainError
    from app.geometry import PlanePoint, to_fraction
    from app.models import RunConfig


class CommandResult:
    def __init__(self, success: bool, message: str, data: Dict[str, Any] = None, table: Optional[str] = None):
        self.success = success
        self.message = message
        self.data = data or {}
        # CSV rendering, for commands that produce rows
        self.table = table


class BaseCommand(ABC):
    needs_norm = True

    def __init__(self, config: RunConfig):
        self.config = config

    @abstractmethod
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        """Run the command; ``context`` carries the loaded norm, tolerances, log list and ledger"""
        pass

    def point(self, name: str) -> PlanePoint:
        raw: Optional[Tuple[str, str]] = getattr(self.config, name)
        if raw is None:
            raise DomainError(f"--{name} is required for {self.config.command.value}")
        try:
            return PlanePoint(to_fraction(raw[0]), to_fraction(raw[1]))
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"bad coordinates for --{name}: {raw[0]} {raw[1]}") from e

    def unit_point(self, norm) -> PlanePoint:
        """--x when given, else the point of S at ray angle --theta"""
        if self.config.x is None and self.config.theta is not None:
            return norm.circle_point(self.config.theta).point
        return norm.normalize(self.point("x"))


def number(value: Any) -> Any:
    """JSON value for a scalar; exact rationals keep their fraction text alongside the float"""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return {"value": float(value), "exact": str(value)}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def jsonable(obj: Any) -> Any:
    if isinstance(obj, PlanePoint):
        return [float(obj.u), float(obj.v)]
    if isinstance(obj, BaseModel):
        return jsonable(obj.model_dump(mode="json"))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (Fraction, np.floating, np.integer)):
        return number(obj)
    return obj
