"""Newton searches for complex roots of scaling-ratio (Moran) equations."""

from __future__ import annotations

import math

from .errors import InvalidRatios
from .strings import moran_real_root

__all__ = ["moran_roots_search"]


def _moran_f(ratios, s: complex) -> complex:
    import cmath

    return sum(cmath.exp(s * math.log(r)) for r in ratios) - 1.0


def _moran_fprime(ratios, s: complex) -> complex:
    import cmath

    return sum(math.log(r) * cmath.exp(s * math.log(r)) for r in ratios)


def moran_roots_search(
    ratios,
    im_range: tuple[float, float],
    tol: float = 1e-12,
    seeds_per_period: int = 6,
) -> list[complex]:
    """Complex solutions of sum r_j^s = 1 with Im s in im_range.

    The unique real root D is found by bisection; complex roots come from
    Newton iterations seeded on the vertical line Re s = D.  Seeds that
    diverge or leave the window are dropped (normal between roots); the
    result is deduplicated within tol and sorted by imaginary part.
    """
    ratios = tuple(float(r) for r in ratios)
    if not ratios or any(not (0 < r < 1) for r in ratios) or sum(ratios) >= 1:
        raise InvalidRatios(f"need ratios in (0,1) with sum < 1, got {ratios}")
    d = moran_real_root(ratios)
    lo, hi = min(im_range), max(im_range)
    roots: list[complex] = []
    if lo <= 0.0 <= hi:
        roots.append(complex(d, 0.0))

    # Seed spacing tied to the densest possible lattice 2*pi/log(1/r_min).
    min_period = 2.0 * math.pi / max(math.log(1.0 / r) for r in ratios)
    step = min_period / seeds_per_period
    n_steps = max(1, int(math.ceil((hi - lo) / step)))
    for i in range(n_steps + 1):
        seed = complex(d, lo + i * step)
        root = _newton(ratios, seed, tol)
        if root is None:
            continue
        if not (lo - tol <= root.imag <= hi + tol):
            continue
        if abs(_moran_f(ratios, root)) > 1e-9:
            continue
        if all(abs(root - r0) > max(100 * tol, 1e-9) for r0 in roots):
            roots.append(root)
    roots.sort(key=lambda z: (z.imag, z.real))
    return roots


def _newton(ratios, seed: complex, tol: float, max_iter: int = 60) -> complex | None:
    z = seed
    for _ in range(max_iter):
        f = _moran_f(ratios, z)
        fp = _moran_fprime(ratios, z)
        if fp == 0:
            return None
        step = f / fp
        z = z - step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None
        if abs(z) > 1e6:
            return None
        if abs(step) < tol * (1.0 + abs(z)):
            return z
    return None
