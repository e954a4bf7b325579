"""Parametric excitation kernels and their closed-form functionals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# below this rate the box Laplace transform switches to its Taylor branch
_BOX_SERIES_CUTOFF = 1e-8


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class Kernel:
    """Base class; use :class:`ExponentialKernel` or :class:`BoxKernel`."""

    kind = "abstract"

    def total_mass(self) -> float:
        raise NotImplementedError

    def evaluate(self, s):
        raise NotImplementedError

    def laplace(self, alpha: float) -> float:
        raise NotImplementedError

    def integral(self, s):
        """Primitive of the kernel, int_0^s phi(u) du, vectorised over s >= 0."""
        raise NotImplementedError

    def tail_moment(self, q: float) -> float:
        """int_0^inf s^q phi(s) ds."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ExponentialKernel(Kernel):
    """phi(s) = a * exp(-b s)."""

    a: float
    b: float
    kind = "exponential"

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise KernelError(f"exponential kernel needs a > 0 and b > 0, got a={self.a}, b={self.b}")

    def total_mass(self) -> float:
        return self.a / self.b

    def evaluate(self, s):
        s = _check_nonnegative(s)
        out = self.a * np.exp(-self.b * s)
        return float(out) if np.ndim(out) == 0 else out

    def laplace(self, alpha: float) -> float:
        if alpha < 0:
            raise KernelError(f"alpha must be >= 0, got {alpha}")
        return self.a / (self.b + alpha)

    def integral(self, s):
        s = _check_nonnegative(s)
        out = (self.a / self.b) * -np.expm1(-self.b * s)
        return float(out) if np.ndim(out) == 0 else out

    def tail_moment(self, q: float) -> float:
        return self.a * math.gamma(q + 1) / self.b ** (q + 1)

    def to_dict(self) -> dict:
        return {"type": "exponential", "a": float(self.a), "b": float(self.b)}


@dataclass(frozen=True)
class BoxKernel(Kernel):
    """phi(s) = c * 1_{[0, w]}(s)."""

    c: float
    w: float
    kind = "box"

    def __post_init__(self):
        if not (self.c > 0 and self.w > 0 and math.isfinite(self.c) and math.isfinite(self.w)):
            raise KernelError(f"box kernel needs c > 0 and w > 0, got c={self.c}, w={self.w}")

    def total_mass(self) -> float:
        return self.c * self.w

    def evaluate(self, s):
        s = _check_nonnegative(s)
        out = np.where(s <= self.w, self.c, 0.0)
        return float(out) if np.ndim(out) == 0 else out

    def laplace(self, alpha: float) -> float:
        if alpha < 0:
            raise KernelError(f"alpha must be >= 0, got {alpha}")
        if alpha < _BOX_SERIES_CUTOFF:
            x = alpha * self.w
            return self.c * self.w * (1.0 - x / 2.0 + x * x / 6.0)
        return self.c * -math.expm1(-alpha * self.w) / alpha

    def integral(self, s):
        s = _check_nonnegative(s)
        out = self.c * np.minimum(s, self.w)
        return float(out) if np.ndim(out) == 0 else out

    def tail_moment(self, q: float) -> float:
        return self.c * self.w ** (q + 1) / (q + 1)

    def to_dict(self) -> dict:
        return {"type": "box", "c": float(self.c), "w": float(self.w)}


def _check_nonnegative(s):
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise KernelError("kernel evaluated at a negative time")
    return arr


def kernel_from_dict(d: dict) -> Kernel:
    """Build a kernel from its config form, e.g. ``{"type": "box", "c": 2, "w": 0.25}``."""
    kind = str(d.get("type", "")).lower()
    try:
        if kind == "exponential":
            return ExponentialKernel(float(d["a"]), float(d["b"]))
        if kind == "box":
            return BoxKernel(float(d["c"]), float(d["w"]))
    except KeyError as exc:
        raise KernelError(f"missing kernel field {exc} in {d!r}") from None
    raise KernelError(f"unknown kernel type {d.get('type')!r}")


def total_mass(kernel: Kernel) -> float:
    return kernel.total_mass()


def evaluate(kernel: Kernel, s):
    return kernel.evaluate(s)


def laplace(kernel: Kernel, alpha: float) -> float:
    return kernel.laplace(alpha)


def solve_alpha0(kernel: Kernel, p: float, rtol: float = 1e-12) -> float:
    """Growth rate alpha0 > 0 solving p * laplace(kernel, alpha0) = 1.

    Only defined in the supercritical regime p * Lambda > 1.
    """
    if not 0 < p <= 1:
        raise KernelError(f"p must lie in (0, 1], got {p}")
    mass = kernel.total_mass()
    if p * mass <= 1:
        raise KernelError(
            f"alpha0 needs a supercritical kernel: p * Lambda = {p * mass:.6g} <= 1"
        )
    if isinstance(kernel, ExponentialKernel):
        return p * kernel.a - kernel.b

    lo, hi = 0.0, 1.0
    while p * kernel.laplace(hi) >= 1:
        lo, hi = hi, 2 * hi
    # f(lo) > 1 >= f(hi) and laplace is strictly decreasing
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if p * kernel.laplace(mid) > 1:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
