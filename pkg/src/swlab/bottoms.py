"""Bottom profiles ``H(x)`` and the linear-to-flat point transformation."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class BottomProfile:
    """Base class: subclasses implement ``H`` and ``H_prime`` (vectorised)."""

    def H(self, x):
        raise NotImplementedError

    def H_prime(self, x):
        raise NotImplementedError

    def quadratic_form(self) -> tuple[float, float, float] | None:
        """``(curvature, center, slope)`` with ``H = curv/2 (x-c)^2 + slope (x-c) + const``.

        ``None`` for profiles that are not polynomials of degree <= 2.
        """
        return None


@dataclass(frozen=True)
class Flat(BottomProfile):
    def H(self, x):
        return np.zeros_like(np.asarray(x, dtype=float)) + 0.0

    def H_prime(self, x):
        return np.zeros_like(np.asarray(x, dtype=float)) + 0.0

    def quadratic_form(self):
        return 0.0, 0.0, 0.0


@dataclass(frozen=True)
class Linear(BottomProfile):
    C1: float
    C2: float = 0.0

    def H(self, x):
        return self.C1 * np.asarray(x, dtype=float) + self.C2

    def H_prime(self, x):
        return np.zeros_like(np.asarray(x, dtype=float)) + self.C1

    def quadratic_form(self):
        return 0.0, 0.0, self.C1


@dataclass(frozen=True)
class ParabolicUp(BottomProfile):
    """``H = d1 (2/L)^2 (x - L/2)^2``: zero at the center, ``d1`` at both ends."""

    d1: float
    L: float

    @property
    def curvature(self) -> float:
        return 8.0 * self.d1 / self.L**2

    def H(self, x):
        y = np.asarray(x, dtype=float) - 0.5 * self.L
        return self.d1 * (2.0 / self.L) ** 2 * y * y

    def H_prime(self, x):
        return self.curvature * (np.asarray(x, dtype=float) - 0.5 * self.L)

    def quadratic_form(self):
        return self.curvature, 0.5 * self.L, 0.0


@dataclass(frozen=True)
class ShiftedParabola(BottomProfile):
    """``H = d1 [(2/L)^2 (x - L/2)^2 - 1]``, the profile of the mass-coordinate runs."""

    d1: float
    L: float

    @property
    def curvature(self) -> float:
        return 8.0 * self.d1 / self.L**2

    def H(self, x):
        y = np.asarray(x, dtype=float) - 0.5 * self.L
        return self.d1 * ((2.0 / self.L) ** 2 * y * y - 1.0)

    def H_prime(self, x):
        return self.curvature * (np.asarray(x, dtype=float) - 0.5 * self.L)

    def quadratic_form(self):
        return self.curvature, 0.5 * self.L, 0.0


@dataclass(frozen=True)
class ParabolicSigned(BottomProfile):
    """``H = sign * (beta/2) (x - c)^2`` with ``sign`` in ``{+1, -1}``."""

    beta: float
    c: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    def H(self, x):
        y = np.asarray(x, dtype=float) - self.c
        return self.sign * 0.5 * self.beta * y * y

    def H_prime(self, x):
        return self.sign * self.beta * (np.asarray(x, dtype=float) - self.c)

    def quadratic_form(self):
        return self.sign * self.beta, self.c, 0.0


@dataclass(frozen=True)
class Sinusoidal(BottomProfile):
    """``H = d2 cos^2(2 pi x / L)``."""

    d2: float
    L: float

    def H(self, x):
        return self.d2 * np.cos(2.0 * np.pi * np.asarray(x, dtype=float) / self.L) ** 2

    def H_prime(self, x):
        k = 2.0 * np.pi / self.L
        return -self.d2 * k * np.sin(2.0 * k * np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class Tabulated(BottomProfile):
    """Piecewise-linear profile through samples ``(xs, Hs)``, ``xs`` strictly increasing."""

    xs: np.ndarray
    Hs: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        Hs = np.asarray(self.Hs, dtype=float)
        if xs.ndim != 1 or xs.shape != Hs.shape or xs.size < 2:
            raise ValueError("need matching 1-D sample arrays with at least two points")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("sample abscissae must be strictly increasing")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(Hs))):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "Hs", Hs)

    @classmethod
    def from_csv(cls, path: str | Path) -> "Tabulated":
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows:
                        raise
                    continue  # header line
        if not rows:
            raise ValueError(f"no samples in {path}")
        arr = np.array(rows)
        return cls(arr[:, 0], arr[:, 1])

    def _check(self, x: np.ndarray) -> None:
        if np.any(x < self.xs[0]) or np.any(x > self.xs[-1]):
            raise ValueError(
                f"query outside tabulated range [{self.xs[0]}, {self.xs[-1]}]")

    def H(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        return np.interp(x, self.xs, self.Hs)

    def H_prime(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        slopes = np.diff(self.Hs) / np.diff(self.xs)
        idx = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, slopes.size - 1)
        return slopes[idx]


def eval_H(profile: BottomProfile, x):
    return profile.H(x)


def eval_H_prime(profile: BottomProfile, x):
    return profile.H_prime(x)


def chirkunov_from_flat(point, k: float):
    """Map a flat-bottom point ``(t*, x*, u*, eta*)`` to the bottom ``H = k x``."""
    if k == 0:
        raise ValueError("slope k must be nonzero")
    ts, xs, us, es = point
    half = 0.5 * ts * ts
    return ts / k, (xs + half) / k, us + ts, es - xs - half


def chirkunov_to_flat(point, k: float):
    """Inverse of :func:`chirkunov_from_flat`."""
    if k == 0:
        raise ValueError("slope k must be nonzero")
    t, x, u, eta = point
    ts = k * t
    half = 0.5 * ts * ts
    xs = k * x - half
    return ts, xs, u - ts, eta + xs + half


def orthogonality_defect(k: float, h: float, tau: float, t: float, x: float = 0.0) -> float:
    """Dot product of the images of the cell edges ``h e_x`` and ``tau e_t``.

    The corners ``(t, x)``, ``(t, x + h)`` and ``(t + tau, x)`` are pushed
    through the flat-bottom map and the two edge vectors compared in the
    ``(t*, x*)`` plane.  Zero means the cell stays orthogonal.
    """
    base = chirkunov_to_flat((t, x, 0.0, 0.0), k)
    right = chirkunov_to_flat((t, x + h, 0.0, 0.0), k)
    up = chirkunov_to_flat((t + tau, x, 0.0, 0.0), k)
    h_vec = (right[0] - base[0], right[1] - base[1])
    t_vec = (up[0] - base[0], up[1] - base[1])
    return h_vec[0] * t_vec[0] + h_vec[1] * t_vec[1]


def orthogonality_defect_formula(k: float, h: float, tau: float, t: float) -> float:
    return -0.5 * k**3 * h * tau * (2.0 * t + tau)


def profile_from_spec(kind: str, **params) -> BottomProfile:
    """Build a profile from a config-style name and keyword parameters."""
    kind = kind.lower().replace("-", "_")
    table = {
        "flat": Flat,
        "linear": Linear,
        "parabolic": ParabolicUp,
        "parabolic_up": ParabolicUp,
        "shifted_parabola": ShiftedParabola,
        "parabolic_signed": ParabolicSigned,
        "sinusoidal": Sinusoidal,
    }
    if kind == "tabulated":
        return Tabulated.from_csv(params["path"])
    if kind not in table:
        raise ValueError(f"unknown bottom kind {kind!r}")
    return table[kind](**params)


__all__ = [
    "BottomProfile", "Flat", "Linear", "ParabolicUp", "ShiftedParabola",
    "ParabolicSigned", "Sinusoidal", "Tabulated", "eval_H", "eval_H_prime",
    "chirkunov_from_flat", "chirkunov_to_flat", "orthogonality_defect",
    "orthogonality_defect_formula", "profile_from_spec",
]
