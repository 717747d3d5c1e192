"""Declarative key-value problem files for the RFM generator.

A config is an INI file with a single ``[pde]`` section::

    [pde]
    operator = laplace        ; or helmholtz
    solution = sin_sin        ; sin_sin | gauss | wave
    wave_number = 0
    domain = 0 1 0 1
    nx = 2
    ny = 2
    Q = 1681                  ; points per subdomain, a perfect square (or q = 41)
    J = 100                   ; features per subdomain
    pou = b                   ; a | b
    seed = 0
    bound = 1.0
    lambda_interior = 1.0
    lambda_boundary =         ; empty -> m_I / m_B
    lambda_interface = 1.0
    interface_order = C1
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import asdict, dataclass

from .rfm import SOLUTIONS, RfmProblem, manufactured

__all__ = ["ConfigError", "PdeConfig", "load_pde_config", "parse_pde_config"]

_KNOWN = {
    "operator", "solution", "wave_number", "domain", "nx", "ny", "Q", "q", "J", "pou", "seed",
    "bound", "lambda_interior", "lambda_boundary", "lambda_interface", "interface_order",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PdeConfig:
    operator: str = "laplace"
    solution: str = "sin_sin"
    wave_number: float = 0.0
    domain: tuple = (0.0, 1.0, 0.0, 1.0)
    nx: int = 1
    ny: int = 1
    q: int = 10
    J: int = 50
    pou: str = "b"
    seed: int = 0
    bound: float = 1.0
    lambda_interior: float = 1.0
    lambda_boundary: float | None = None
    lambda_interface: float = 1.0
    interface_order: str = "C1"

    def __post_init__(self):
        if self.operator not in ("laplace", "helmholtz"):
            raise ConfigError(f"operator must be laplace or helmholtz, not {self.operator!r}")
        if self.solution not in SOLUTIONS:
            raise ConfigError(f"unknown solution {self.solution!r}; choose from {', '.join(SOLUTIONS)}")
        if self.pou not in ("a", "b"):
            raise ConfigError("pou must be a or b")
        if self.interface_order not in ("C0", "C1"):
            raise ConfigError("interface_order must be C0 or C1")
        x0, x1, y0, y1 = self.domain
        if not (x1 > x0 and y1 > y0):
            raise ConfigError("domain must be 'x0 x1 y0 y1' with x1 > x0, y1 > y0")
        for name in ("nx", "ny", "J"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.q < 2:
            raise ConfigError("need at least 2 points per direction (Q >= 4)")
        if not self.bound > 0:
            raise ConfigError("bound must be positive")
        if self.operator == "laplace" and self.wave_number != 0:
            raise ConfigError("wave_number only applies to helmholtz")

    def build(self) -> RfmProblem:
        pde = manufactured(self.solution, self.operator, self.wave_number, self.domain)
        return RfmProblem.build(
            pde,
            grid=(self.nx, self.ny),
            q=self.q,
            per_subdomain=self.J,
            pou=self.pou,
            seed=self.seed,
            bound=self.bound,
            lambda_interior=self.lambda_interior,
            lambda_boundary=self.lambda_boundary,
            lambda_interface=self.lambda_interface,
            interface_order=self.interface_order,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["domain"] = list(self.domain)
        d["Q"] = self.q * self.q
        return d


def _get(sec, key, conv, default):
    raw = sec.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return conv(raw.strip())
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def _q_from_Q(raw: str) -> int:
    Q = int(raw)
    q = math.isqrt(Q) if Q >= 0 else 0
    if Q < 4 or q * q != Q:
        raise ValueError
    return q


def parse_pde_config(text: str) -> PdeConfig:
    """Parse INI text. ``Q`` (a perfect square) is the per-subdomain point count, ``q`` the per-direction count."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # keep Q and q apart
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    if not cp.has_section("pde"):
        raise ConfigError("config needs a [pde] section")
    sec = dict(cp["pde"])
    if "j" in sec:
        sec["J"] = sec.pop("j")
    unknown = set(sec) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "Q" in sec and "q" in sec:
        raise ConfigError("give either Q or q, not both")
    q = _get(sec, "Q", _q_from_Q, None) if "Q" in sec else _get(sec, "q", int, 10)
    if q is None:
        q = 10
    domain = _get(sec, "domain", lambda s: tuple(float(t) for t in s.replace(",", " ").split()), (0.0, 1.0, 0.0, 1.0))
    if len(domain) != 4:
        raise ConfigError("domain needs four numbers")
    return PdeConfig(
        operator=_get(sec, "operator", str, "laplace"),
        solution=_get(sec, "solution", str, "sin_sin"),
        wave_number=_get(sec, "wave_number", float, 0.0),
        domain=domain,
        nx=_get(sec, "nx", int, 1),
        ny=_get(sec, "ny", int, 1),
        q=q,
        J=_get(sec, "J", int, 50),
        pou=_get(sec, "pou", str, "b"),
        seed=_get(sec, "seed", int, 0),
        bound=_get(sec, "bound", float, 1.0),
        lambda_interior=_get(sec, "lambda_interior", float, 1.0),
        lambda_boundary=_get(sec, "lambda_boundary", float, None),
        lambda_interface=_get(sec, "lambda_interface", float, 1.0),
        interface_order=_get(sec, "interface_order", str, "C1"),
    )


def load_pde_config(path: str | os.PathLike) -> PdeConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_pde_config(text)
