"""Contour numerics: residues, Laurent coefficients, pole orders, pole search.

All routines work on any evaluable function (a ClosedZeta or a plain
callable).  Circle integrals use the trapezoid rule, which is spectrally
accurate for periodic integrands; node counts double until two successive
estimates agree to the requested relative tolerance or the node cap 2^14 is
reached.  The reported error is the last Richardson difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from . import catalogs as cat
from ._roots import moran_roots_search
from .errors import (
    Ambiguous,
    CatalogMissingAndSearchFailed,
    ContourCrossesPole,
    NotConverged,
    PoleProximity,
    ZeroOnContour,
)
from .expressions import eval_expr

__all__ = [
    "ContourEstimate",
    "laurent_coeff",
    "order_numeric",
    "poles_in_window",
    "residue_numeric",
]

MAX_NODES = 1 << 14


@dataclass(frozen=True)
class ContourEstimate:
    value: complex
    error: float
    nodes: int


def _as_array_callable(func) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(func, cat.ClosedZeta):
        return lambda arr: np.asarray(func.eval(arr), dtype=np.complex128)

    def call(arr: np.ndarray) -> np.ndarray:
        try:
            out = func(arr)
            out = np.asarray(out, dtype=np.complex128)
            if out.shape == arr.shape:
                return out
        except Exception:
            pass
        return np.array([func(complex(z)) for z in arr.ravel()], dtype=np.complex128).reshape(
            arr.shape
        )

    return call


def _check_isolation(func, center: complex, radius: float) -> None:
    """For cataloged functions, ensure the circle encloses only `center`."""
    if not isinstance(func, cat.ClosedZeta) or func.catalog is None:
        return
    catalog = func.catalog
    for pole in catalog.isolated:
        if pole.removable:
            continue
        d = abs(pole.location - center)
        if 1e-12 < d <= radius * 1.02:
            raise ContourCrossesPole(
                f"pole at {pole.location:.6g} inside or on the radius-{radius:g} circle"
            )
    for lat in catalog.lattices:
        k = round(center.imag / lat.spacing)
        for kk in (k - 1, k, k + 1):
            loc = complex(lat.base, kk * lat.spacing)
            d = abs(loc - center)
            if 1e-12 < d <= radius * 1.02:
                raise ContourCrossesPole(
                    f"lattice pole at {loc:.6g} inside or on the radius-{radius:g} circle"
                )


def _circle_values(call, center: complex, radius: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2.0 * math.pi * (np.arange(n) + 0.5) / n  # offset avoids axis poles
    z = radius * np.exp(1j * theta)
    try:
        vals = call(center + z)
    except PoleProximity as exc:
        raise ContourCrossesPole(str(exc)) from exc
    if not np.all(np.isfinite(vals)):
        raise ContourCrossesPole("non-finite value on the contour")
    return z, vals


def _principal_coeff(call, center: complex, radius: float, n_coeff: int, n_nodes: int) -> complex:
    """(1/2*pi*i) * integral f(s) (s - center)^(n_coeff - 1) ds via n_nodes points."""
    z, vals = _circle_values(call, center, radius, n_nodes)
    return complex(np.mean(vals * z**n_coeff))


def _doubling(call, center, radius, n_coeff, tol, n_start):
    n = max(64, n_start)
    prev = _principal_coeff(call, center, radius, n_coeff, n)
    while n < MAX_NODES:
        n *= 2
        cur = _principal_coeff(call, center, radius, n_coeff, n)
        err = abs(cur - prev)
        scale = max(abs(cur), 1e-30)
        if err <= tol * scale or err <= 1e-15:
            return ContourEstimate(cur, err, n)
        prev = cur
    raise NotConverged(
        f"contour estimate still moving by {abs(cur - prev):.3g} at {MAX_NODES} nodes"
    )


def residue_numeric(
    func,
    center: complex,
    radius: float,
    n_nodes: int = 64,
    tol: float = 1e-10,
) -> ContourEstimate:
    """Residue at `center` by circle quadrature with node doubling.

    The circle must isolate the pole; for cataloged functions this is
    checked against the catalog.
    """
    if n_nodes < 64:
        n_nodes = 64
    _check_isolation(func, center, radius)
    call = _as_array_callable(func)
    return _doubling(call, center, radius, 1, tol, n_nodes)


def laurent_coeff(
    func,
    center: complex,
    n: int,
    radius: float,
    n_nodes: int = 64,
    tol: float = 1e-10,
) -> ContourEstimate:
    """Principal Laurent coefficient c_{-n} at `center` (n = 1 is the residue)."""
    if n < 1:
        raise ValueError("principal coefficients need n >= 1")
    _check_isolation(func, center, radius)
    call = _as_array_callable(func)
    return _doubling(call, center, radius, n, tol, n_nodes)


def order_numeric(
    func,
    center: complex,
    radius: float,
    probe_depth: int = 5,
    n_nodes: int = 2048,
) -> int | Literal["essential-suspect"]:
    """Pole order at `center`: minus the winding number of f around the circle.

    When the first `probe_depth` principal coefficients are all clearly
    nonzero the point is reported as "essential-suspect" instead; this is
    deliberately heuristic evidence, not a proof (an order-n pole with
    n >= probe_depth would trip it).
    """
    _check_isolation(func, center, radius)
    call = _as_array_callable(func)
    z, vals = _circle_values(call, center, radius, n_nodes)
    mags = np.abs(vals)
    if mags.min() <= 1e-13 * mags.max():
        raise ZeroOnContour("function vanishes on the contour")

    probes = []
    for k in range(1, probe_depth + 1):
        est = _doubling(call, center, radius, k, 1e-9, n_nodes)
        probes.append(est)
    floor = max(1e-12, 10.0 * max(p.error for p in probes))
    if all(abs(p.value) > floor for p in probes):
        return "essential-suspect"

    phases = np.unwrap(np.angle(np.append(vals, vals[0])))
    winding = (phases[-1] - phases[0]) / (2.0 * math.pi)
    nearest = round(winding)
    if abs(winding - nearest) > 0.15:
        raise Ambiguous(f"winding {winding:.4f} is not near an integer")
    order = -int(nearest)
    if order < 0:
        raise Ambiguous(f"winding {winding:.4f} indicates a zero, not a pole")
    return order


def poles_in_window(
    func,
    re_range: tuple[float, float],
    im_range: tuple[float, float],
    grid: int = 16,
    tol: float = 1e-9,
) -> list[cat.PoleRecord]:
    """All poles in the rectangle, as exportable records sorted by Im then Re.

    Cataloged functions are enumerated analytically (removable candidates and
    numerically cancelled Moran roots are skipped).  Without a catalog the
    window is swept with Newton iterations on 1/f from a coarse grid of
    seeds, and every root found is confirmed by a winding-number order check;
    an empty result means no pole was found, while
    CatalogMissingAndSearchFailed signals that the search itself could not
    run.
    """
    re_lo, re_hi = min(re_range), max(re_range)
    im_lo, im_hi = min(im_range), max(im_range)

    if isinstance(func, cat.ClosedZeta) and func.catalog is not None:
        records = _catalog_window(func, re_lo, re_hi, im_lo, im_hi)
    else:
        records = _search_window(func, re_lo, re_hi, im_lo, im_hi, grid, tol)
    records.sort(key=lambda r: (r.location.imag, r.location.real))
    return records


def _catalog_window(func: cat.ClosedZeta, re_lo, re_hi, im_lo, im_hi) -> list[cat.PoleRecord]:
    catalog = func.catalog
    records: list[cat.PoleRecord] = []
    for pole in catalog.isolated:
        if pole.removable:
            continue
        loc = pole.location
        if re_lo <= loc.real <= re_hi and im_lo <= loc.imag <= im_hi:
            records.append(
                cat.PoleRecord(loc, pole.order, pole.residue, provenance="analytic")
            )
    for lat in catalog.lattices:
        if not (re_lo <= lat.base <= re_hi):
            continue
        k_lo = math.ceil(im_lo / lat.spacing - 1e-12)
        k_hi = math.floor(im_hi / lat.spacing + 1e-12)
        for k in range(k_lo, k_hi + 1):
            loc = complex(lat.base, k * lat.spacing)
            if lat.order is None:
                records.append(cat.PoleRecord(loc, "essential", complex("nan"), "analytic"))
                continue
            residue = lat.residue_of(k) if lat.residue_of is not None else complex("nan")
            if lat.unverified and catalog.numerator is not None:
                # possible zero-pole cancellation: drop candidates whose
                # numerator vanishes at the would-be pole
                if abs(complex(eval_expr(catalog.numerator, loc))) < 1e-10:
                    continue
            records.append(cat.PoleRecord(loc, lat.order, residue, provenance="analytic"))
    if catalog.moran_ratios is not None:
        for root in moran_roots_search(catalog.moran_ratios, (im_lo, im_hi)):
            if not (re_lo <= root.real <= re_hi):
                continue
            if catalog.numerator is not None:
                if abs(complex(eval_expr(catalog.numerator, root))) < 1e-10:
                    continue
                num = complex(eval_expr(catalog.numerator, root))
            else:
                num = 1.0 + 0j
            deriv = sum(
                r**root * math.log(1.0 / r) for r in catalog.moran_ratios
            )
            records.append(cat.PoleRecord(root, 1, num / deriv, provenance="analytic"))
    return records


def _search_window(func, re_lo, re_hi, im_lo, im_hi, grid, tol) -> list[cat.PoleRecord]:
    call = _as_array_callable(func)

    def inv(z: complex) -> complex:
        val = complex(call(np.array([z]))[0])
        return 1.0 / val

    failures = 0
    attempts = 0
    roots: list[complex] = []
    res = (np.arange(grid) + 0.5) / grid
    scale = max(re_hi - re_lo, im_hi - im_lo, 1.0)
    for fr in res:
        for fi in res:
            seed = complex(re_lo + fr * (re_hi - re_lo), im_lo + fi * (im_hi - im_lo))
            attempts += 1
            try:
                root = _newton_inverse(inv, seed, tol)
            except Exception:
                failures += 1
                continue
            if root is None:
                continue
            if not (re_lo - tol <= root.real <= re_hi + tol and im_lo - tol <= root.imag <= im_hi + tol):
                continue
            if all(abs(root - r0) > 1e-7 * scale for r0 in roots):
                roots.append(root)
    if failures == attempts:
        raise CatalogMissingAndSearchFailed("function could not be evaluated at any seed")

    records = []
    spacing = min(
        [abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1 :]] or [0.2 * scale]
    )
    radius = min(0.05 * scale, 0.45 * spacing) if spacing > 0 else 0.05 * scale
    for root in roots:
        try:
            order = order_numeric(func, root, radius)
            if order == 0 or order == "essential-suspect":
                continue
            est = residue_numeric(func, root, radius) if order == 1 else laurent_coeff(
                func, root, order, radius
            )
        except (Ambiguous, ZeroOnContour, NotConverged, ContourCrossesPole):
            continue
        records.append(cat.PoleRecord(root, order, est.value, provenance="numeric-contour"))
    return records


def _newton_inverse(inv, seed: complex, tol: float, max_iter: int = 50) -> complex | None:
    z = seed
    for _ in range(max_iter):
        h = 1e-6 * (1.0 + abs(z))
        g = inv(z)
        gp = (inv(z + h) - inv(z - h)) / (2.0 * h)
        if gp == 0 or not np.isfinite(gp):
            return None
        step = g / gp
        z = z - step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) > 1e9:
            return None
        if abs(step) < tol * (1.0 + abs(z)):
            if abs(inv(z)) < 1e-6:
                return z
            return None
    return None
