"""Closed-form zeta functions with analytic pole catalogs.

Each constructor returns a ClosedZeta: an expression tree, convergence
metadata (abscissas of absolute convergence, holomorphic continuation, and
meromorphic continuation), and an analytic description of its poles: finitely
many isolated points plus vertical lattices base + i*k*spacing with a per-k
residue rule.  Residues of order-n poles store the leading Laurent
coefficient c_{-n}.

A point where the generic construction predicts a pole but the residue
cancels (the s = 0 candidate of string distance zetas built from strings
whose geometric zeta continues to -1 at 0, e.g. every two-parameter Cantor
string) is kept in the catalog flagged ``removable`` and is excluded from
pole enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import (
    DeltaTooSmall,
    InvalidOrder,
    InvalidParameters,
    InvalidRatios,
    PoleProximity,
)
from .expressions import (
    Const,
    Expr,
    IPow,
    PowL,
    Prod,
    Quot,
    Sum,
    Var,
    eval_expr,
    expr_to_json,
    shift_expr,
)
from .strings import moran_real_root

__all__ = [
    "ClosedZeta",
    "IsolatedPole",
    "PoleCatalog",
    "PoleLattice",
    "PoleRecord",
    "ZetaMeta",
    "catalog_cantor_geometric",
    "catalog_distance_string",
    "catalog_extended_self_similar",
    "catalog_generalized_cantor_distance",
    "catalog_grill",
    "catalog_infinite_order",
    "catalog_nth_order_cantor",
    "catalog_sierpinski_carpet",
    "catalog_trivial",
    "scaled_distance_catalog",
]

_REMOVABLE_TOL = 1e-12
GUARD_SCALE = 1e-8  # guard radius is GUARD_SCALE * (1 + |s|)


@dataclass(frozen=True)
class IsolatedPole:
    location: complex
    order: int
    residue: complex  # leading Laurent coefficient c_{-order}
    removable: bool = False
    unverified: bool = False


@dataclass(frozen=True)
class PoleLattice:
    """Vertical lattice base + i*k*spacing, k in Z.

    order None marks essential singularities; residue_of maps k to the
    leading coefficient (None when unknown).
    """

    base: float
    spacing: float
    order: int | None
    residue_of: Callable[[int], complex] | None
    label: str = ""
    unverified: bool = False


@dataclass(frozen=True)
class PoleCatalog:
    isolated: tuple[IsolatedPole, ...] = ()
    lattices: tuple[PoleLattice, ...] = ()
    moran_ratios: tuple[float, ...] | None = None  # unequal-ratio families
    numerator: Expr | None = None  # for cancellation checks at Moran roots


@dataclass(frozen=True)
class ZetaMeta:
    d_abs: float | None = None
    d_hol: float | None = None
    d_mer: float | None = None
    first_length: float | None = None
    delta: float | None = None
    ambient_dim: int | None = None


@dataclass(frozen=True)
class PoleRecord:
    """One complex dimension ready for CSV/JSON export."""

    location: complex
    order: int | str  # positive integer or "essential"
    residue: complex
    provenance: str  # analytic | numeric-contour | numeric-fourier | numeric-limit

    def to_json(self) -> dict:
        order = self.order if isinstance(self.order, str) else int(self.order)
        return {
            "re": self.location.real,
            "im": self.location.imag,
            "order": order,
            "res_re": self.residue.real,
            "res_im": self.residue.imag,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class SeriesInfo:
    """Truncation data for series-defined catalogs (infinite-order family)."""

    ratio: float
    branches: int
    n_max: int


@dataclass(frozen=True)
class ClosedZeta:
    expr: Expr
    meta: ZetaMeta
    catalog: PoleCatalog | None
    label: str
    series: SeriesInfo | None = None

    def eval(self, s, guarded: bool = True):
        """Evaluate the tree; raise PoleProximity inside the guard radius."""
        if guarded and self.catalog is not None:
            dist = self.pole_distance(s)
            guard = GUARD_SCALE * (1.0 + np.abs(np.asarray(s, dtype=np.complex128)))
            if np.any(dist < guard):
                raise PoleProximity(f"{self.label}: evaluation within guard radius of a pole")
        return eval_expr(self.expr, s)

    def __call__(self, s):
        return self.eval(s)

    def pole_distance(self, s):
        """Distance from s (scalar or array) to the nearest cataloged pole."""
        sv = np.asarray(s, dtype=np.complex128)
        dist = np.full(sv.shape, np.inf)
        cat = self.catalog
        if cat is None:
            return dist
        for pole in cat.isolated:
            if not pole.removable:
                dist = np.minimum(dist, np.abs(sv - pole.location))
        for lat in cat.lattices:
            k = np.round(sv.imag / lat.spacing)
            dist = np.minimum(dist, np.hypot(sv.real - lat.base, sv.imag - k * lat.spacing))
        return dist

    def to_json(self) -> dict:
        doc: dict = {
            "label": self.label,
            "expr": expr_to_json(self.expr),
            "meta": {
                "d_abs": _num_or_none(self.meta.d_abs),
                "d_hol": _num_or_none(self.meta.d_hol),
                "d_mer": _num_or_none(self.meta.d_mer),
                "first_length": self.meta.first_length,
                "delta": self.meta.delta,
                "ambient_dim": self.meta.ambient_dim,
            },
        }
        if self.catalog is not None:
            doc["catalog"] = {
                "isolated": [
                    {
                        "re": p.location.real,
                        "im": p.location.imag,
                        "order": p.order,
                        "res_re": p.residue.real,
                        "res_im": p.residue.imag,
                        "removable": p.removable,
                    }
                    for p in self.catalog.isolated
                ],
                "lattices": [
                    {
                        "base_re": lat.base,
                        "spacing": lat.spacing,
                        "order": lat.order if lat.order is not None else "essential",
                        "label": lat.label,
                    }
                    for lat in self.catalog.lattices
                ],
            }
        return doc


def _num_or_none(x: float | None):
    if x is None:
        return None
    if math.isinf(x):
        return "-inf" if x < 0 else "+inf"
    return x


# --------------------------------------------------------------------------
# Catalog constructors
# --------------------------------------------------------------------------

LOG3 = math.log(3.0)
CANTOR_DIM = math.log(2.0) / LOG3


def catalog_trivial(length: float = 1.0) -> ClosedZeta:
    """Geometric zeta of the single-length string {length}: length^s."""
    expr: Expr = PowL(length) if length != 1.0 else Const(1.0 + 0j)
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(d_abs=-math.inf, d_hol=-math.inf, d_mer=-math.inf, first_length=length),
        catalog=PoleCatalog(),
        label=f"trivial({length:g})",
    )


def catalog_cantor_geometric() -> ClosedZeta:
    """3^-s / (1 - 2*3^-s): middle-third Cantor string, simple poles on
    log3(2) + (2*pi/log 3) i Z with constant residue 1/(2 log 3)."""
    expr = Quot(PowL(1.0 / 3.0), Sum((Const(1.0), Prod((Const(-2.0), PowL(1.0 / 3.0))))))
    lattice = PoleLattice(
        base=CANTOR_DIM,
        spacing=2.0 * math.pi / LOG3,
        order=1,
        residue_of=lambda k: complex(1.0 / (2.0 * LOG3)),
        label="cantor-geometric",
    )
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(d_abs=CANTOR_DIM, d_hol=CANTOR_DIM, d_mer=-math.inf, first_length=1.0 / 3.0),
        catalog=PoleCatalog(lattices=(lattice,)),
        label="cantor-geometric",
    )


def _is_const_one(expr: Expr) -> bool:
    return isinstance(expr, Const) and expr.value == 1.0 + 0j


def catalog_extended_self_similar(zeta0: ClosedZeta, ratios) -> ClosedZeta:
    """zeta0(s) / (1 - sum_j r_j^s).

    Equal ratios r with J branches give the exact lattice
    log_{1/r} J + (2*pi/log(1/r)) i Z with residue zeta0(w)/log(1/r); unequal
    ratios record the Moran data so pole enumeration can solve
    sum r_j^s = 1 numerically.  Candidate poles are flagged unverified unless
    zeta0 is identically 1, in which case no zero-pole cancellation can occur.
    """
    ratios = tuple(float(r) for r in ratios)
    if not ratios or any(not (0 < r < 1) for r in ratios) or sum(ratios) >= 1:
        raise InvalidRatios(f"need ratios in (0,1) with sum < 1, got {ratios}")
    den = Sum((Const(1.0),) + tuple(Prod((Const(-1.0), PowL(r))) for r in ratios))
    expr = Quot(zeta0.expr, den)
    trivial = _is_const_one(zeta0.expr)
    moran_d = moran_real_root(ratios)

    isolated = []
    for pole in zeta0.catalog.isolated if zeta0.catalog else ():
        denom = 1.0 - sum(r**pole.location for r in ratios)
        isolated.append(
            replace(
                pole,
                residue=pole.residue / denom,
                unverified=pole.unverified or abs(denom) < 1e-10,
            )
        )

    lattices = list(zeta0.catalog.lattices) if zeta0.catalog else []
    equal = all(r == ratios[0] for r in ratios)
    moran_ratios = None
    if equal:
        r = ratios[0]
        J = len(ratios)
        t_log = math.log(1.0 / r)
        base = math.log(J) / t_log
        spacing = 2.0 * math.pi / t_log

        def residue_of(k: int, _z=zeta0, _base=base, _sp=spacing, _tl=t_log) -> complex:
            w = complex(_base, k * _sp)
            return eval_expr(_z.expr, w) / _tl

        lattices.append(
            PoleLattice(
                base=base,
                spacing=spacing,
                order=1,
                residue_of=residue_of,
                label="moran-lattice",
                unverified=not trivial,
            )
        )
    else:
        moran_ratios = ratios

    d0 = zeta0.meta.d_abs if zeta0.meta.d_abs is not None else -math.inf
    d_abs = max(d0, moran_d)
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(
            d_abs=d_abs,
            d_hol=d_abs if trivial or equal else None,
            d_mer=zeta0.meta.d_mer,
            first_length=zeta0.meta.first_length,
        ),
        catalog=PoleCatalog(
            isolated=tuple(isolated),
            lattices=tuple(lattices),
            moran_ratios=moran_ratios,
            numerator=None if trivial else zeta0.expr,
        ),
        label="self-similar",
    )


def catalog_nth_order_cantor(n: int) -> ClosedZeta:
    """3^((n-1)s) / (3^s - 2)^n: lattice poles of order n, c_{-n} = 1/(2 log^n 3)."""
    if n < 1:
        raise InvalidOrder(f"order must be >= 1, got {n}")
    num: Expr = Const(1.0) if n == 1 else PowL(3.0 ** (n - 1))
    expr = Quot(num, IPow(Sum((PowL(3.0), Const(-2.0))), n))
    leading = 1.0 / (2.0 * LOG3**n)
    lattice = PoleLattice(
        base=CANTOR_DIM,
        spacing=2.0 * math.pi / LOG3,
        order=n,
        residue_of=lambda k, _c=leading: complex(_c),
        label=f"cantor-order-{n}",
    )
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(d_abs=CANTOR_DIM, d_hol=CANTOR_DIM, d_mer=-math.inf, first_length=1.0 / 3.0),
        catalog=PoleCatalog(lattices=(lattice,)),
        label=f"cantor-order-{n}",
    )


def catalog_infinite_order(zeta0: ClosedZeta, ratios, n_max: int) -> ClosedZeta:
    """Truncation of zeta0(s) * r^s * sum_{n>=1} (n!)^-s (r^-s - J)^-n.

    This is the geometric zeta function of the union over n of copies of the
    n-fold self-similar iterate scaled by r^n/n!; every lattice point
    log_{1/r} J + (2*pi/log(1/r)) i k is an essential singularity of the full
    series.  Requires equal ratios.  n_max is capped at 150 so factorials
    stay inside double range.
    """
    ratios = tuple(float(r) for r in ratios)
    if not ratios or any(not (0 < r < 1) for r in ratios) or sum(ratios) >= 1:
        raise InvalidRatios(f"need ratios in (0,1) with sum < 1, got {ratios}")
    if any(r != ratios[0] for r in ratios):
        raise InvalidRatios("the scaled union construction needs equal ratios")
    if n_max < 1:
        raise InvalidOrder(f"n_max must be >= 1, got {n_max}")
    n_max = min(int(n_max), 150)
    r = ratios[0]
    J = len(ratios)
    inv = Sum((PowL(1.0 / r), Const(float(-J))))  # r^-s - J
    terms = []
    for n in range(1, n_max + 1):
        terms.append(Quot(PowL(1.0 / math.factorial(n)), IPow(inv, n)))
    body: Expr = Sum(tuple(terms))
    factors: list[Expr] = []
    if not _is_const_one(zeta0.expr):
        factors.append(zeta0.expr)
    factors.extend([PowL(r), body])
    expr = Prod(tuple(factors)) if len(factors) > 1 else body
    t_log = math.log(1.0 / r)
    base = math.log(J) / t_log
    lattice = PoleLattice(
        base=base,
        spacing=2.0 * math.pi / t_log,
        order=None,
        residue_of=None,
        label="essential-lattice",
    )
    d0 = zeta0.meta.d_abs if zeta0.meta.d_abs is not None else -math.inf
    d = max(d0, base)
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(d_abs=d, d_hol=d, d_mer=d, first_length=None),
        catalog=PoleCatalog(lattices=(lattice,)),
        label="infinite-order",
        series=SeriesInfo(ratio=r, branches=J, n_max=n_max),
    )


def infinite_order_tail_bound(zeta: ClosedZeta, s) -> float:
    """Bound the dropped series tail of an infinite-order catalog at s.

    Terms beyond n_max are dominated by ((n!)^-sigma q^n) with
    q = 1/|r^-s - J|; the bound is the next term over (1 - growth ratio).
    """
    from .errors import TruncationUnstable

    info = zeta.series
    if info is None:
        raise InvalidParameters("not a series-defined catalog")
    sv = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    sigma = float(np.min(sv.real))
    denom = np.abs(eval_expr(Sum((PowL(1.0 / info.ratio), Const(float(-info.branches)))), sv))
    q = 1.0 / float(np.min(denom))
    n1 = info.n_max + 1
    ratio = q / (n1 + 1) ** sigma
    if ratio >= 1.0:
        raise TruncationUnstable(
            f"series ratio {ratio:.3g} >= 1 at n_max={info.n_max}; "
            "evaluation point too close to the singular lattice"
        )
    lead = math.exp(-sigma * math.lgamma(n1 + 1) + n1 * math.log(q))
    prefactor = info.ratio ** sigma
    return prefactor * lead / (1.0 - ratio)


def catalog_distance_string(zeta_l: ClosedZeta, delta: float) -> ClosedZeta:
    """Distance zeta of the 1-D realization of a string: (2^(1-s) zeta_L(s) + 2 delta^s)/s.

    Valid when delta >= l_1/2 so every gap is fully covered.  The candidate
    pole at s = 0 carries residue 2*(1 + zeta_L(0)); when the continuation of
    zeta_L at 0 equals -1 (all two-scale Cantor strings) it cancels and the
    point is removable.
    """
    if zeta_l.meta.first_length is None:
        raise InvalidParameters("zeta_L carries no first-length metadata")
    if delta < zeta_l.meta.first_length / 2.0:
        raise DeltaTooSmall(f"delta must be >= {zeta_l.meta.first_length / 2.0:g}")
    expr = Quot(
        Sum(
            (
                Prod((Const(2.0), PowL(0.5), zeta_l.expr)),
                Prod((Const(2.0), PowL(delta))),
            )
        ),
        Var(),
    )

    def u(w: complex) -> complex:
        return 2.0 ** (1.0 - w) / w

    isolated = []
    for pole in zeta_l.catalog.isolated if zeta_l.catalog else ():
        isolated.append(replace(pole, residue=u(pole.location) * pole.residue))
    res0 = 2.0 * (complex(eval_expr(zeta_l.expr, 0.0 + 0j)) + 1.0)
    isolated.append(
        IsolatedPole(location=0j, order=1, residue=res0, removable=abs(res0) < _REMOVABLE_TOL)
    )

    lattices = []
    for lat in zeta_l.catalog.lattices if zeta_l.catalog else ():
        if lat.residue_of is None:
            lattices.append(lat)
            continue

        def residue_of(k: int, _lat=lat) -> complex:
            w = complex(_lat.base, k * _lat.spacing)
            return u(w) * _lat.residue_of(k)

        lattices.append(replace(lat, residue_of=residue_of, label=lat.label + "-distance"))

    meta = zeta_l.meta
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(
            d_abs=meta.d_abs,
            d_hol=meta.d_hol,
            d_mer=meta.d_mer,
            first_length=meta.first_length,
            delta=delta,
            ambient_dim=1,
        ),
        catalog=PoleCatalog(
            isolated=tuple(isolated),
            lattices=tuple(lattices),
            moran_ratios=zeta_l.catalog.moran_ratios if zeta_l.catalog else None,
            numerator=zeta_l.catalog.numerator if zeta_l.catalog else None,
        ),
        label=f"distance({zeta_l.label})",
    )


def catalog_generalized_cantor_distance(m: int, a: float, delta: float) -> ClosedZeta:
    """Distance zeta of the two-parameter Cantor set C(m, a) in [0, 1]:

        C^(s-1) (1-ma) / (s (1 - m a^s)) + 2 delta^s / s,  C = (1-ma)/(2(m-1)),

    with simple poles on D + (2*pi/T) i Z, D = log_{1/a} m, T = log(1/a), and
    residue C^(s_k - 1) (1-ma)/(s_k T).  The candidate at s = 0 cancels
    exactly for every (m, a) and is recorded as removable.
    """
    if m < 2 or int(m) != m:
        raise InvalidParameters(f"need integer m >= 2, got {m}")
    if not (0 < a and m * a < 1):
        raise InvalidParameters(f"need 0 < a < 1/m, got a={a}")
    big_c = (1.0 - m * a) / (2.0 * (m - 1))
    if delta < big_c:
        raise DeltaTooSmall(f"delta must be >= {big_c:g}")
    one_ma = 1.0 - m * a
    expr = Sum(
        (
            Quot(
                Prod((Const(one_ma / big_c), PowL(big_c))),
                Prod((Var(), Sum((Const(1.0), Prod((Const(float(-m)), PowL(a))))))),
            ),
            Quot(Prod((Const(2.0), PowL(delta))), Var()),
        )
    )
    t_log = math.log(1.0 / a)
    dim = math.log(m) / t_log
    spacing = 2.0 * math.pi / t_log

    def residue_of(k: int) -> complex:
        w = complex(dim, k * spacing)
        return big_c ** (w - 1.0) * one_ma / (w * t_log)

    lattice = PoleLattice(base=dim, spacing=spacing, order=1, residue_of=residue_of, label="cantor-lattice")
    zero = IsolatedPole(location=0j, order=1, residue=0j, removable=True)
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(
            d_abs=dim,
            d_hol=dim,
            d_mer=-math.inf,
            first_length=2.0 * big_c,
            delta=delta,
            ambient_dim=1,
        ),
        catalog=PoleCatalog(isolated=(zero,), lattices=(lattice,)),
        label=f"generalized-cantor-distance(m={m}, a={a:g})",
    )


def catalog_sierpinski_carpet(delta: float) -> ClosedZeta:
    """Distance zeta of the Sierpinski carpet with a connected delta-collar:

        8 / (2^s s (s-1) (3^s - 8)) + 2 pi delta^s / s + 4 delta^(s-1) / (s-1),

    simple poles at {0, 1} and on log3(8) + (2*pi/log 3) i Z with residue
    2^(-s_k) / (log(3) s_k (s_k - 1))."""
    if delta <= 1.0 / 6.0:
        raise DeltaTooSmall("delta must exceed 1/6 for a connected neighborhood")
    expr = Sum(
        (
            Quot(
                Const(8.0),
                Prod((PowL(2.0), Var(), Sum((Var(), Const(-1.0))), Sum((PowL(3.0), Const(-8.0))))),
            ),
            Quot(Prod((Const(2.0 * math.pi), PowL(delta))), Var()),
            Quot(Prod((Const(4.0 / delta), PowL(delta))), Sum((Var(), Const(-1.0)))),
        )
    )
    dim = math.log(8.0) / LOG3
    spacing = 2.0 * math.pi / LOG3

    def residue_of(k: int) -> complex:
        w = complex(dim, k * spacing)
        return 2.0 ** (-w) / (LOG3 * w * (w - 1.0))

    lattice = PoleLattice(base=dim, spacing=spacing, order=1, residue_of=residue_of, label="carpet-lattice")
    isolated = (
        IsolatedPole(location=0j, order=1, residue=complex(8.0 / 7.0 + 2.0 * math.pi)),
        IsolatedPole(location=1.0 + 0j, order=1, residue=complex(16.0 / 5.0)),
    )
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(d_abs=dim, d_hol=dim, d_mer=-math.inf, delta=delta, ambient_dim=2),
        catalog=PoleCatalog(isolated=isolated, lattices=(lattice,)),
        label="sierpinski-carpet",
    )


def catalog_grill(zeta_a: ClosedZeta, m: int) -> ClosedZeta:
    """Distance zeta of the product set A x [0,1]^m:

        sum_{k=0}^m binomial(m, k) zeta_A(s - m + k),

    shifting every pole of zeta_A up by m (the k = 0 term) and adding lower
    copies; the abscissa of convergence moves up by exactly m."""
    if m < 1:
        raise InvalidParameters(f"need m >= 1, got {m}")
    terms = []
    for k in range(0, m + 1):
        coeff = math.comb(m, k)
        shifted = shift_expr(zeta_a.expr, float(m - k))
        terms.append(shifted if coeff == 1 else Prod((Const(float(coeff)), shifted)))
    expr = Sum(tuple(terms))

    located: dict[complex, IsolatedPole] = {}
    for k in range(0, m + 1):
        coeff = float(math.comb(m, k))
        for pole in zeta_a.catalog.isolated if zeta_a.catalog else ():
            if pole.removable:
                continue
            loc = pole.location + (m - k)
            add = coeff * pole.residue
            if loc in located:
                prev = located[loc]
                located[loc] = replace(prev, residue=prev.residue + add)
            else:
                located[loc] = replace(pole, location=loc, residue=add)

    lattices = []
    for k in range(0, m + 1):
        coeff = float(math.comb(m, k))
        for lat in zeta_a.catalog.lattices if zeta_a.catalog else ():
            if lat.residue_of is None:
                lattices.append(replace(lat, base=lat.base + (m - k)))
                continue

            def residue_of(j: int, _lat=lat, _c=coeff) -> complex:
                return _c * _lat.residue_of(j)

            lattices.append(
                replace(
                    lat,
                    base=lat.base + (m - k),
                    residue_of=residue_of,
                    label=f"{lat.label}+{m - k}",
                )
            )

    meta = zeta_a.meta
    d_abs = None if meta.d_abs is None else meta.d_abs + m
    d_mer = None if meta.d_mer is None else (meta.d_mer + m if math.isfinite(meta.d_mer) else meta.d_mer)
    return ClosedZeta(
        expr=expr,
        meta=ZetaMeta(
            d_abs=d_abs,
            d_hol=None if meta.d_hol is None else meta.d_hol + m,
            d_mer=d_mer,
            delta=meta.delta,
            ambient_dim=None if meta.ambient_dim is None else meta.ambient_dim + m,
        ),
        catalog=PoleCatalog(isolated=tuple(located.values()), lattices=tuple(lattices)),
        label=f"grill({zeta_a.label}, m={m})",
    )


def scaled_distance_catalog(zeta_a: ClosedZeta, lam: float) -> ClosedZeta:
    """Distance zeta of the set scaled by lam > 0 (neighborhood scaled along):
    lam^s * zeta_A(s); pole locations are unchanged and residues pick up lam^w."""
    if lam <= 0:
        raise InvalidParameters(f"need lam > 0, got {lam}")
    expr = Prod((PowL(lam), zeta_a.expr))
    isolated = tuple(
        replace(p, residue=lam**p.location * p.residue)
        for p in (zeta_a.catalog.isolated if zeta_a.catalog else ())
    )
    lattices = []
    for lat in zeta_a.catalog.lattices if zeta_a.catalog else ():
        if lat.residue_of is None:
            lattices.append(lat)
            continue

        def residue_of(k: int, _lat=lat) -> complex:
            w = complex(_lat.base, k * _lat.spacing)
            return lam**w * _lat.residue_of(k)

        lattices.append(replace(lat, residue_of=residue_of))
    meta = zeta_a.meta
    return ClosedZeta(
        expr=expr,
        meta=replace(
            meta,
            first_length=None if meta.first_length is None else lam * meta.first_length,
            delta=None if meta.delta is None else lam * meta.delta,
        ),
        catalog=PoleCatalog(
            isolated=isolated,
            lattices=tuple(lattices),
            moran_ratios=zeta_a.catalog.moran_ratios if zeta_a.catalog else None,
            numerator=zeta_a.catalog.numerator if zeta_a.catalog else None,
        ),
        label=f"scaled({lam:g}, {zeta_a.label})",
    )
