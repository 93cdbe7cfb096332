"""
Named tournament families.

Labelings (0-based vertex i is the 1-based label v_{i+1}):

- L_k: i→j for every i < j, so vertex 0 is the source.
- C: 0→1→2→0.
- D_n: Δ(I, D_{n-1}, D_{n-1}); vertex 0 is the apex, the first copy follows,
  then the second copy. D_1 = I.
- A_n: Δ(I, A_{n-1}, I, ..., A_{n-1}, I) with n singletons; blocks laid out
  left to right. A_1 = I.
- U_n: 2n-1 vertices; v_j→v_i for i < j iff i and j are both odd.
- S_n: 2n-1 vertices; v_i→v_j iff (j - i) mod (2n-1) is in 1..n-1.
- N: v_i→v_j for 2 ≤ i < j ≤ 5, v1→v2, v1→v4, v3→v1, v5→v1.
- Delta2: Δ(L_2, L_2, L_2).
"""

import logging
import re
from functools import lru_cache
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from components.tournament import Tournament, compose_delta
from utils.errors import SizeLimitError, TournamentValidationError
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)

PARAMETRIC = ("L", "D", "A", "U", "S")

_ALIASES = {
    "l": "L",
    "d": "D",
    "a": "A",
    "u": "U",
    "s": "S",
    "n": "N",
    "c": "C",
    "delta2": "Delta2",
    "delta_2": "Delta2",
    "δ2": "Delta2",
}


class FamilySpec(BaseModel):
    """A family symbol plus its parameter where the family takes one."""

    model_config = ConfigDict(frozen=True)

    family: Literal["L", "D", "A", "U", "S", "N", "Delta2", "C"]
    param: Optional[int] = None

    @model_validator(mode="after")
    def check_param(self):
        if self.family in PARAMETRIC:
            if self.param is None:
                raise ValueError(f"family {self.family} needs a parameter")
            if self.param < 1:
                raise ValueError(f"family {self.family} needs a parameter >= 1, got {self.param}")
        elif self.param is not None:
            raise ValueError(f"family {self.family} takes no parameter")
        return self

    @classmethod
    def parse(cls, name, param=None):
        """
        Parse command-line family tokens.

        Accepts `d 3`, `D:3`, `d3`, `delta2`, `n` and so on.

        Args:
            name (str): Family token, optionally with an attached parameter
            param (str or int, optional): Separate parameter token

        Returns:
            FamilySpec: The parsed spec

        Raises:
            TournamentValidationError: On an unknown family or bad parameter
        """
        token = name.strip()
        attached = None
        match = re.fullmatch(r"([A-Za-z]+)[:_]?(\d+)", token)
        if match and match.group(1).lower() in ("l", "d", "a", "u", "s"):
            token, attached = match.group(1), match.group(2)
        family = _ALIASES.get(token.lower())
        if family is None:
            raise TournamentValidationError(f"unknown family {name!r}")
        if attached is not None and param is not None:
            raise TournamentValidationError(f"parameter given twice for {name!r}")
        raw = attached if attached is not None else param
        try:
            value = None if raw is None else int(raw)
        except (TypeError, ValueError):
            raise TournamentValidationError(f"parameter {raw!r} is not an integer")
        try:
            return cls(family=family, param=value)
        except ValidationError as e:
            message = e.errors()[0]["msg"].removeprefix("Value error, ")
            raise TournamentValidationError(message)

    @property
    def label(self):
        return self.family if self.param is None else f"{self.family}_{self.param}"


def transitive(k):
    """L_k."""
    return Tournament([((1 << k) - 1) & ~((1 << (i + 1)) - 1) for i in range(k)])


def singleton():
    """I."""
    return Tournament([0])


def cyclic_triangle():
    """C."""
    return Tournament([0b010, 0b100, 0b001])


@lru_cache(maxsize=None)
def _d(n):
    if n == 1:
        return singleton()
    previous = _d(n - 1)
    return compose_delta([singleton(), previous, previous])


@lru_cache(maxsize=None)
def _a(n):
    if n == 1:
        return singleton()
    previous = _a(n - 1)
    blocks = [singleton()]
    for _ in range(n - 1):
        blocks += [previous, singleton()]
    return compose_delta(blocks)


def _u(n):
    size = 2 * n - 1
    out = [0] * size
    for i in range(size):
        for j in range(i + 1, size):
            if i % 2 == 0 and j % 2 == 0:
                out[j] |= 1 << i
            else:
                out[i] |= 1 << j
    return Tournament(out)


def _s(n):
    size = 2 * n - 1
    out = [0] * size
    for i in range(size):
        for step in range(1, n):
            out[i] |= 1 << ((i + step) % size)
    return Tournament(out)


def _n():
    out = [0] * 5
    for i in range(1, 5):
        for j in range(i + 1, 5):
            out[i] |= 1 << j
    out[0] |= (1 << 1) | (1 << 3)
    out[2] |= 1 << 0
    out[4] |= 1 << 0
    return Tournament(out)


def family_size(spec):
    """Vertex count implied by the family's recursion."""
    p = spec.param
    if spec.family == "L":
        return p
    if spec.family == "D":
        return 2**p - 1
    if spec.family == "A":
        size = 1
        for k in range(2, p + 1):
            size = k + (k - 1) * size
        return size
    if spec.family in ("U", "S"):
        return 2 * p - 1
    return {"N": 5, "Delta2": 6, "C": 3}[spec.family]


def generate(spec):
    """
    Materialize a family member.

    Args:
        spec (FamilySpec): Which member

    Returns:
        Tournament: The member with the labeling documented in this module

    Raises:
        SizeLimitError: If D_n or A_n exceeds its configured cap
    """
    settings = get_settings()
    family, p = spec.family, spec.param
    caps = {"D": (settings.d_max_n, "HEROIX_D_MAX_N"), "A": (settings.a_max_n, "HEROIX_A_MAX_N")}
    if family in caps and p > caps[family][0]:
        cap, env_name = caps[family]
        raise SizeLimitError(
            f"{family}_n is capped at n <= {cap} (raise {env_name} to allow more), "
            f"got {p} which has {family_size(spec)} vertices"
        )
    logger.debug("Generating %s with %d vertices", spec.label, family_size(spec))
    if family == "L":
        return transitive(p)
    if family == "D":
        return _d(p)
    if family == "A":
        return _a(p)
    if family == "U":
        return _u(p)
    if family == "S":
        return _s(p)
    if family == "N":
        return _n()
    if family == "Delta2":
        pair = transitive(2)
        return compose_delta([pair, pair, pair])
    return cyclic_triangle()


def family(name, param=None):
    """Shortcut: generate(FamilySpec(family=name, param=param))."""
    return generate(FamilySpec(family=name, param=param))


def minimal_nonheroes():
    """
    The five minimal non-heroes.

    Returns:
        dict: name -> Tournament, in the order D3, U3, N, S3, Delta2
    """
    return {
        "D3": family("D", 3),
        "U3": family("U", 3),
        "N": family("N"),
        "S3": family("S", 3),
        "Delta2": family("Delta2"),
    }
