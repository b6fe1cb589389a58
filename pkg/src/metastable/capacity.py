"""Quadrature verification of capacity formulas on boxes around a saddle.

This module provides numerical routes to the same capacities that
:mod:`metastable.rates` evaluates in closed form, so each can check the other:

- :func:`reduced_capacity` -- the one-dimensional reduction
  ``eps * [integral of exp(-u2/eps)] / [integral of exp(-u1/eps)]`` times the
  Gaussian factors of the quadratic directions,
- :func:`dirichlet_upper_bound` -- the Dirichlet energy of an explicit trial
  function on a tensor grid (an upper bound by the variational principle),
- :func:`fiber_lower_bound` -- the fiber-integral lower bound with boundary
  values fixed at one and zero,
- :func:`capacity_1d_exact` -- the exact one-dimensional capacity.

Boxes follow the half-width choices used in the derivations (threshold level
``d * eps * |log eps|``); :func:`default_box` builds them from a classified
stationary point.  The contribution from outside the box is dropped, not
estimated -- it is exponentially small once the box conditions hold, and the
bounds carry that caveat in their notes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .landscape import StationaryPoint, codim1_coefficients, codim2_form
from .potentials import PotentialModel

__all__ = [
    "BoxSpec",
    "CapacityEstimate",
    "default_box",
    "reduced_capacity",
    "dirichlet_upper_bound",
    "fiber_lower_bound",
    "capacity_1d_exact",
    "verification_report",
]

_QUAD_OPTS = dict(epsabs=0.0, epsrel=1e-10, limit=200)
# per-axis node caps for the refinement loop, by dimension
_MAX_NODES = {1: 8193, 2: 1025, 3: 257}


@dataclass(frozen=True)
class BoxSpec:
    """Integration box around a saddle, expressed in its eigenbasis.

    Parameters
    ----------
    delta1 : float
        Half-width along the unstable (or soft unstable) axis.
    eps : float
        Noise intensity the box was sized for.
    delta2 : float, optional
        Half-width shared by the degenerate transverse axes, when any exist.
    deltaj : tuple of float
        Half-widths of the quadratic stable axes, in ascending-eigenvalue
        order (shape ``delta / sqrt(lambda_j)``).
    remainder_order : int
        Order ``r + 1`` of the normal-form remainder used by the advisory
        width check ``(delta1 + delta2)**(r+1) = o(eps |log eps|)``.
    """

    delta1: float
    eps: float
    delta2: float | None = None
    deltaj: tuple[float, ...] = ()
    remainder_order: int = 5

    def __post_init__(self) -> None:
        object.__setattr__(self, "deltaj", tuple(float(v) for v in self.deltaj))
        if not self.delta1 > 0.0:
            raise ValueError("delta1 must be positive")
        if self.delta2 is not None and not self.delta2 > 0.0:
            raise ValueError("delta2 must be positive when given")
        if any(v <= 0.0 for v in self.deltaj):
            raise ValueError("deltaj half-widths must be positive")
        if not self.eps > 0.0:
            raise ValueError("eps must be positive")

    def advisory_warnings(self) -> list[str]:
        """Width checks that hold only asymptotically; violations are advisory."""
        out = []
        spread = self.delta1 + (self.delta2 or 0.0)
        budget = self.eps * abs(math.log(self.eps))
        if spread**self.remainder_order > budget:
            out.append(
                f"(delta1 + delta2)^{self.remainder_order} = "
                f"{spread ** self.remainder_order:.3e} exceeds eps |log eps| = "
                f"{budget:.3e}; normal-form remainders may not be negligible"
            )
        return out

    def as_dict(self) -> dict:
        return {
            "delta1": self.delta1,
            "delta2": self.delta2,
            "deltaj": list(self.deltaj),
            "eps": self.eps,
        }


@dataclass(frozen=True)
class CapacityEstimate:
    """Numerical capacity value with its method and integration metadata."""

    value: float
    method: str
    eps: float
    box: BoxSpec | None
    grid_shape: tuple[int, ...] | None = None
    rel_change: float | None = None
    notes: tuple[str, ...] = ()


def default_box(
    model: PotentialModel,
    point: StationaryPoint,
    eps: float,
    *,
    scale: float = 1.0,
) -> BoxSpec:
    """Box half-widths adapted to the saddle's spectrum at noise ``eps``.

    Quadratic directions get ``2 sqrt(d eps |log eps| / lambda_j)`` (twice the
    threshold width along stable axes, ``sqrt(2 ...)`` along the unstable one);
    a quartic unstable direction gets ``(d eps |log eps| / C)**(1/4)``; a soft
    quadratic-quartic transverse direction solves the quadratic-in-``delta2**2``
    threshold equation; a codimension-two block uses its angular minimum
    ``K_-``.  ``scale`` multiplies every half-width (the threshold constants
    are proof parameters, not sharp).
    """
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    evs = point.eigenvalues
    d = model.dim
    level = d * eps * abs(math.log(eps))
    zeros = set(point.zero_indices)
    quad_stable = [v for i, v in enumerate(evs) if i not in zeros and v > 0.0]
    deltaj = tuple(2.0 * math.sqrt(level / v) for v in quad_stable)
    delta2 = None

    if not zeros:
        if not evs[0] < 0.0:
            raise ValueError("point has no unstable direction; not a saddle box")
        delta1 = math.sqrt(2.0 * level / -evs[0])
    elif len(zeros) == 1:
        nf = codim1_coefficients(model, point)
        if evs[0] >= 0.0 or 0 in zeros:
            # soft unstable direction: normal form -|C4| y^4
            if not nf.C4 < 0.0:
                raise ValueError("soft unstable direction is not quartic unstable (C4 >= 0)")
            delta1 = (level / -nf.C4) ** 0.25
        else:
            if not nf.C4 > 0.0:
                raise ValueError("soft stable direction is not quartic stable (C4 <= 0)")
            lam2 = evs[sorted(zeros)[0]]
            delta1 = math.sqrt(2.0 * level / -evs[0])
            delta2 = math.sqrt(
                (-lam2 + math.sqrt(lam2**2 + 32.0 * nf.C4 * level)) / (4.0 * nf.C4)
            )
    elif len(zeros) == 2:
        nf2 = codim2_form(model, point)
        if not evs[0] < 0.0:
            raise ValueError("codimension-two box requires a quadratic unstable direction")
        delta1 = math.sqrt(2.0 * level / -evs[0])
        delta2 = (2.0 * level / nf2.K_minus) ** 0.25
    else:
        raise ValueError("default boxes cover at most two degenerate directions")

    box = BoxSpec(
        delta1=scale * delta1,
        eps=eps,
        delta2=None if delta2 is None else scale * delta2,
        deltaj=tuple(scale * v for v in deltaj),
    )
    for msg in box.advisory_warnings():
        warnings.warn(msg, stacklevel=2)
    return box


# ---------------------------------------------------------------------------
# reduced integral formula


def _checked_quad(f: Callable[[float], float], a: float, b: float, what: str) -> float:
    value, err = quad(f, a, b, **_QUAD_OPTS)
    tol = max(1e-12, 1e-8 * abs(value))
    if err > tol:
        raise RuntimeError(
            f"quadrature for {what} did not converge: achieved absolute error "
            f"{err:.3e} against tolerance {tol:.3e}"
        )
    return value


def reduced_capacity(
    u1: Callable[[float], float],
    u2: Callable[..., float],
    lambdas: Sequence[float],
    eps: float,
    box: BoxSpec,
    *,
    q: int = 2,
) -> CapacityEstimate:
    """Capacity of a normal form ``-u1(y1) + u2(y2..yq) + sum lambda_j y_j**2 / 2``.

    Parameters
    ----------
    u1 : callable
        Potential well shape along the unstable axis (``u1 >= 0``), integrated
        over ``[-delta1, delta1]``.
    u2 : callable
        Transverse degenerate part: a function of one variable for ``q = 2``,
        of two variables for ``q = 3``; integrated over the interval resp. disc
        of radius ``delta2``.
    lambdas : sequence of float
        Strictly positive eigenvalues of the quadratic directions
        (``lambda_{q+1}..lambda_d``); each contributes ``sqrt(2 pi eps / lambda)``.
    eps : float
        Noise intensity.
    box : BoxSpec
        Supplies ``delta1`` and ``delta2``.
    q : int
        Number of non-quadratic directions plus one (2 or 3).

    Returns
    -------
    CapacityEstimate
        ``eps * I2 / I1 * prod_j sqrt(2 pi eps / lambda_j)`` with all integrals
        adaptive to relative accuracy 1e-10.  The normal-form altitude is zero,
        so no ``exp(-V(z)/eps)`` factor appears.
    """
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    if q not in (2, 3):
        raise ValueError("q must be 2 or 3")
    lambdas = [float(v) for v in lambdas]
    if any(v <= 0.0 for v in lambdas):
        raise ValueError("quadratic eigenvalues must be strictly positive")
    if box.delta2 is None:
        raise ValueError("reduced_capacity needs box.delta2 for the transverse block")

    i1 = _checked_quad(lambda t: math.exp(-u1(t) / eps), -box.delta1, box.delta1, "u1")
    if q == 2:
        i2 = _checked_quad(lambda t: math.exp(-u2(t) / eps), -box.delta2, box.delta2, "u2")
    else:
        def ring(r: float) -> float:
            return r * _checked_quad(
                lambda phi: math.exp(-u2(r * math.cos(phi), r * math.sin(phi)) / eps),
                0.0,
                2.0 * math.pi,
                "u2 angular",
            )

        i2 = _checked_quad(ring, 0.0, box.delta2, "u2 radial")

    gauss = math.prod(math.sqrt(2.0 * math.pi * eps / v) for v in lambdas)
    return CapacityEstimate(
        value=eps * i2 / i1 * gauss,
        method="reduced_integral",
        eps=eps,
        box=box,
    )


# ---------------------------------------------------------------------------
# tensor-grid Dirichlet bounds


def _simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def _axis_widths(box: BoxSpec, d: int) -> list[float]:
    n_soft = d - 1 - len(box.deltaj)
    if n_soft < 0 or n_soft > 2:
        raise ValueError(
            f"box lists {len(box.deltaj)} quadratic half-widths for dimension {d}"
        )
    if n_soft and box.delta2 is None:
        raise ValueError("box.delta2 required: the saddle has degenerate transverse axes")
    return [box.delta1] + [box.delta2] * n_soft + list(box.deltaj)


def _tensor_w(
    model: PotentialModel,
    point: StationaryPoint,
    widths: Sequence[float],
    shape: Sequence[int],
) -> tuple[np.ndarray, list[np.ndarray]]:
    axes = [np.linspace(-w, w, n) for w, n in zip(widths, shape)]
    mesh = np.meshgrid(*axes, indexing="ij")
    ycoords = np.stack([m.ravel() for m in mesh], axis=-1)
    x = point.location[None, :] + ycoords @ point.eigenvectors.T
    w = model.value_many(x).reshape(tuple(shape)) - point.value
    return w, axes


def _box_condition_warnings(
    w: np.ndarray, eps: float, d: int, method: str
) -> list[str]:
    level = d * eps * abs(math.log(eps))
    out = []
    # along the unstable axis the potential must stay within the threshold level
    center = tuple([slice(None)] + [s // 2 for s in w.shape[1:]])
    drop = float(np.max(np.abs(w[center])))
    if drop > 2.0 * level:
        out.append(
            f"unstable-axis potential range {drop:.3e} exceeds twice the threshold "
            f"level {2 * level:.3e}; box too wide for eps = {eps}"
        )
    if w.ndim > 1:
        # transverse boundary must rise far enough for boundary terms to vanish
        rim = min(
            float(np.min(np.take(w, index, axis=axis)))
            for axis in range(1, w.ndim)
            for index in (0, w.shape[axis] - 1)
        )
        if rim < 2.0 * level:
            out.append(
                f"transverse boundary rise {rim:.3e} is below the threshold "
                f"2 d eps |log eps| = {2 * level:.3e}; boundary terms may not "
                f"be negligible for {method}"
            )
    return out


def _refine(
    model: PotentialModel,
    point: StationaryPoint,
    box: BoxSpec,
    grid: int,
    evaluate: Callable[[np.ndarray, list[np.ndarray]], float],
    rel_tol: float = 1e-6,
) -> tuple[float, tuple[int, ...], float]:
    d = model.dim
    widths = _axis_widths(box, d)
    n = max(5, int(grid))
    if n % 2 == 0:
        n += 1
    cap = _MAX_NODES.get(d)
    if cap is None:
        raise ValueError("tensor-grid bounds support dimensions 1 to 3 only")
    w, axes = _tensor_w(model, point, widths, [n] * d)
    value = evaluate(w, axes)
    rel = math.inf
    while n < cap:
        n = 2 * n - 1
        w, axes = _tensor_w(model, point, widths, [n] * d)
        new = evaluate(w, axes)
        rel = abs(new - value) / max(abs(new), 1e-300)
        value = new
        if rel < rel_tol:
            break
    return value, (n,) * d, rel


def dirichlet_upper_bound(
    model: PotentialModel,
    saddle: StationaryPoint,
    box: BoxSpec,
    grid: int = 65,
) -> CapacityEstimate:
    """Capacity upper bound from the one-dimensional trial function.

    The trial function varies only along the unstable axis,
    ``f'(y1) = exp(W(y1, 0)/eps) / integral exp(W(t, 0)/eps) dt`` with
    ``W = V - V(z)``, and its Dirichlet energy
    ``eps exp(-V(z)/eps) integral exp(-W/eps) f'(y1)**2 dy`` is a true upper
    bound for the capacity up to quadrature error and the dropped outside-box
    contribution.  Simpson tensor grids are refined (nodes doubled per axis)
    until the value changes by less than 1e-6 relative.
    """
    eps = box.eps
    notes = ["outside-box contribution dropped (exponentially negligible)"]

    def evaluate(w: np.ndarray, axes: list[np.ndarray]) -> float:
        weights = [_simpson_weights(len(a), a[1] - a[0]) for a in axes]
        center = tuple([slice(None)] + [len(a) // 2 for a in axes[1:]])
        g = np.exp(w[center] / eps)
        f_norm = float(weights[0] @ g)
        integrand = np.exp(-w / eps) * (g / f_norm).reshape(
            (-1,) + (1,) * (w.ndim - 1)
        ) ** 2
        for wt in reversed(weights):
            integrand = integrand @ wt
        return eps * float(integrand)

    value, shape, rel = _refine(model, saddle, box, grid, evaluate)
    w, _ = _tensor_w(model, saddle, _axis_widths(box, model.dim), [min(s, 65) for s in shape])
    for msg in _box_condition_warnings(w, eps, model.dim, "dirichlet_upper"):
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    scale = math.exp(-saddle.value / eps)
    return CapacityEstimate(
        value=value * scale,
        method="dirichlet_upper",
        eps=eps,
        box=box,
        grid_shape=shape,
        rel_change=rel,
        notes=tuple(notes),
    )


def fiber_lower_bound(
    model: PotentialModel,
    saddle: StationaryPoint,
    box: BoxSpec,
    grid: int = 65,
) -> CapacityEstimate:
    """Capacity lower bound from one-dimensional fiber integrals.

    Each transverse grid point contributes ``[integral exp(W(t, yperp)/eps) dt]**(-1)``
    (the exact one-dimensional capacity of its fiber with boundary values fixed
    at one and zero); integrating over the transverse section gives a lower
    bound.  By the Cauchy-Schwarz inequality the fiber integrand never exceeds
    the trial-function integrand of :func:`dirichlet_upper_bound`, so on a
    shared box and grid the ordering ``lower <= upper`` holds exactly.  Fibers
    are evaluated as one vectorized map in a fixed order, so results are
    deterministic.
    """
    eps = box.eps
    notes = [
        "outside-box contribution dropped (exponentially negligible)",
        "boundary values fixed at 1 and 0; the O(sqrt(eps)) equilibrium-potential "
        "correction is folded into comparison tolerances",
    ]

    def evaluate(w: np.ndarray, axes: list[np.ndarray]) -> float:
        weights = [_simpson_weights(len(a), a[1] - a[0]) for a in axes]
        inner = np.tensordot(np.exp(w / eps), weights[0], axes=(0, 0))
        integrand = 1.0 / inner
        if w.ndim == 1:
            return eps * float(integrand)
        for wt in reversed(weights[1:]):
            integrand = integrand @ wt
        return eps * float(integrand)

    value, shape, rel = _refine(model, saddle, box, grid, evaluate)
    w, _ = _tensor_w(model, saddle, _axis_widths(box, model.dim), [min(s, 65) for s in shape])
    for msg in _box_condition_warnings(w, eps, model.dim, "fiber_lower"):
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    scale = math.exp(-saddle.value / eps)
    return CapacityEstimate(
        value=value * scale,
        method="fiber_lower",
        eps=eps,
        box=box,
        grid_shape=shape,
        rel_change=rel,
        notes=tuple(notes),
    )


def capacity_1d_exact(
    potential: Callable[[float], float], a: float, b: float, eps: float
) -> CapacityEstimate:
    """Exact one-dimensional capacity ``eps / integral_a^b exp(V(t)/eps) dt``.

    The integrand is shifted by its sampled maximum before quadrature so the
    result stays well conditioned deep in the small-``eps`` regime.
    """
    if not a < b:
        raise ValueError("capacity_1d_exact requires a < b")
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    ts = np.linspace(a, b, 2001)
    vals = np.array([float(potential(t)) for t in ts])
    i_max = int(np.argmax(vals))
    shift = float(vals[i_max])
    integral, err = quad(
        lambda t: math.exp((float(potential(t)) - shift) / eps),
        a,
        b,
        points=[float(ts[i_max])] if 0 < i_max < len(ts) - 1 else None,
        **_QUAD_OPTS,
    )
    tol = max(1e-12, 1e-8 * abs(integral))
    if err > tol:
        raise RuntimeError(
            f"quadrature for the 1-d capacity did not converge: achieved "
            f"absolute error {err:.3e} against tolerance {tol:.3e}"
        )
    return CapacityEstimate(
        value=eps * math.exp(-shift / eps) / integral,
        method="exact_1d",
        eps=eps,
        box=None,
    )


def verification_report(estimate: CapacityEstimate, closed_form: float) -> dict:
    """JSON-ready comparison of a quadrature estimate against a closed form."""
    return {
        "method": estimate.method,
        "eps": estimate.eps,
        "value": estimate.value,
        "closed_form": closed_form,
        "ratio": estimate.value / closed_form if closed_form else math.inf,
        "box": estimate.box.as_dict() if estimate.box is not None else None,
        "grid": {
            "shape": list(estimate.grid_shape) if estimate.grid_shape else None,
            "rel_change": estimate.rel_change,
        },
    }
