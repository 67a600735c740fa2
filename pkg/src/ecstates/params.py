"""Physical constants and excited-coherent-state parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class OscillatorConfig:
    """Oscillator constants; natural units (all ones) by default."""

    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "omega", "hbar"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def gamma(self) -> float:
        """Inverse length scale; the dimensionless coordinate is ``gamma * x``."""
        return math.sqrt(self.mass * self.omega / self.hbar)

    @property
    def x0(self) -> float:
        """Ground-state position width ``sqrt(hbar / 2 mu omega)``."""
        return math.sqrt(self.hbar / (2 * self.mass * self.omega))

    @property
    def p0(self) -> float:
        """Ground-state momentum width ``sqrt(mu omega hbar / 2)``."""
        return math.sqrt(self.mass * self.omega * self.hbar / 2)

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega


@dataclass(frozen=True)
class ECSParams:
    """Excitation order ``m`` and coherent amplitude ``alpha = |alpha| e^{i phi}``."""

    m: int = 0
    alpha_mag: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a non-negative integer, got {self.m!r}")
        if not (self.alpha_mag >= 0 and math.isfinite(self.alpha_mag)):
            raise ValueError(f"alpha_mag must be non-negative, got {self.alpha_mag!r}")
        object.__setattr__(self, "m", int(self.m))

    @classmethod
    def from_beta(cls, m: int, beta: float, phi: float = 0.0) -> "ECSParams":
        if beta < 0:
            raise ValueError(f"beta must be non-negative, got {beta!r}")
        return cls(m, math.sqrt(beta), phi)

    @property
    def beta(self) -> float:
        return self.alpha_mag**2

    @property
    def eps0(self) -> float:
        """Dimensionless displacement ``sqrt(2) |alpha|``."""
        return math.sqrt(2.0) * self.alpha_mag

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * complex(math.cos(self.phi), math.sin(self.phi))

    def theta(self, t: float, config: OscillatorConfig):
        """Phase angle ``omega t - phi`` that every observable depends on."""
        return config.omega * t - self.phi
