"""Closed-form expected transition times and capacities for gradient diffusions.

Every operation evaluates a sharp Kramers-type law for the expected first
hitting time of a target well and the associated capacity, for one family of
gate geometries:

- :func:`ek_classical` -- nondegenerate (quadratic) saddle,
- :func:`ek_flat_unstable` / :func:`ek_flat_stable` -- one direction with a
  flat ``2p``-th order normal form (unstable resp. stable),
- :func:`ek_codim2` -- two flat transverse directions with angular quartic
  profile ``k(phi)``,
- :func:`pitchfork_transverse_time` / :func:`pitchfork_longitudinal_time` --
  crossover laws through a symmetric pitchfork bifurcation,
- :func:`doublezero_time` -- crossover law for a double-zero bifurcation,
- :func:`sombrero_time` -- ring of ``2M`` gates past a double-zero bifurcation.

All results come back as :class:`RateResult`, whose ``expected_time`` equals
``prefactor * exp(barrier / eps)`` exactly (in float arithmetic) and whose
``capacity`` equals ``capacity_prefactor * exp(-saddle_value / eps)``.  The
time and capacity prefactors of every regime satisfy the exact algebraic
duality ``prefactor * capacity_prefactor = (2*pi*eps)**(d/2) / sqrt(det_min)``
where ``det_min`` is the Hessian determinant at the starting minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence, Union

from scipy.integrate import quad

from .crossover import chi, psi_minus, psi_plus, theta_minus, theta_plus

__all__ = [
    "MinimumSpec",
    "SaddleSpec",
    "RateResult",
    "Quadratic",
    "FlatUnstable",
    "FlatStable",
    "Codim2",
    "PitchforkTransverse",
    "PitchforkLongitudinal",
    "DoubleZero",
    "Sombrero",
    "SplitSaddles",
    "ek_classical",
    "ek_flat_unstable",
    "ek_flat_stable",
    "ek_codim2",
    "pitchfork_saddles",
    "longitudinal_saddles",
    "pitchfork_transverse_time",
    "pitchfork_longitudinal_time",
    "doublezero_time",
    "sombrero_time",
    "combine_gates",
    "relative_discrepancy",
    "higher_codim_capacity_order",
    "soft_window",
    "sweep_transverse",
    "sweep_longitudinal",
    "sweep_doublezero",
    "sweep_sombrero",
    "SWEEP_FIELDS",
]

TWO_PI = 2.0 * math.pi
_EXP_MAX = 709.0  # exp() overflows float64 just above this argument

AngularProfile = Union[float, Callable[[float], float]]


def _safe_exp(x: float) -> float:
    if x > _EXP_MAX:
        return math.inf
    return math.exp(x)


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not math.isfinite(eps) or eps <= 0.0:
        raise ValueError(f"eps must be a positive real number, got {eps!r}")
    return eps


def _prod(values: Sequence[float]) -> float:
    return math.prod(values) if values else 1.0


# ---------------------------------------------------------------------------
# saddle regimes


@dataclass(frozen=True)
class Quadratic:
    """Nondegenerate saddle: one negative and ``d - 1`` positive eigenvalues."""


@dataclass(frozen=True)
class FlatUnstable:
    """Unstable direction with normal form ``-c * y1**(2p)``, ``c > 0``, ``p >= 2``."""

    p: int
    coefficient: float

    def __post_init__(self) -> None:
        _check_flat_order(self.p)
        if not self.coefficient > 0.0:
            raise ValueError("normal-form coefficient must be positive")


@dataclass(frozen=True)
class FlatStable:
    """One stable direction with normal form ``+c * y2**(2p)`` next to a quadratic unstable one."""

    p: int
    coefficient: float

    def __post_init__(self) -> None:
        _check_flat_order(self.p)
        if not self.coefficient > 0.0:
            raise ValueError("normal-form coefficient must be positive")


@dataclass(frozen=True)
class Codim2:
    """Two flat stable directions with angular profile ``k(phi) * r**(2p)``.

    ``angular`` is either a strictly positive constant or a callable
    ``phi -> k(phi)`` on ``[0, 2*pi)``; constants take a closed-form shortcut
    in the angular integral.
    """

    angular: AngularProfile
    p: int = 2

    def __post_init__(self) -> None:
        _check_flat_order(self.p)
        _check_constant_angular(self.angular)


@dataclass(frozen=True)
class PitchforkTransverse:
    """Transverse pitchfork: soft stable direction ``lambda2 * y2**2 / 2 + quartic * y2**4``.

    For ``lambda2 < 0`` the bifurcation has happened and the gate consists of
    the two split saddles; callers must then supply ``mu2 > 0``, the soft
    eigenvalue at the split saddles (leading order ``-2 * lambda2``, see
    :func:`pitchfork_saddles`), and the ``SaddleSpec`` carries the split-saddle
    altitude and spectrum.
    """

    lambda2: float
    quartic: float
    mu2: float | None = None

    def __post_init__(self) -> None:
        if not self.quartic > 0.0:
            raise ValueError("quartic coefficient must be positive")


@dataclass(frozen=True)
class PitchforkLongitudinal:
    """Longitudinal pitchfork: soft unstable direction ``lambda1 * y1**2 / 2 - quartic * y1**4``.

    For ``lambda1 > 0`` the gate has split into two saddles crossed in series;
    callers must then supply ``mu1 < 0``, the unstable eigenvalue at the split
    saddles (leading order ``-2 * lambda1``, see :func:`longitudinal_saddles`).
    """

    lambda1: float
    quartic: float
    mu1: float | None = None

    def __post_init__(self) -> None:
        if not self.quartic > 0.0:
            raise ValueError("quartic coefficient must be positive")


@dataclass(frozen=True)
class DoubleZero:
    """Two soft transverse directions ``lambda2 * r**2 / 2 + k(phi) * r**4``.

    Valid for ``lambda2 >= -sqrt(eps * |log eps|)``; more negative values are
    rejected by :func:`doublezero_time` (the ring regime of
    :func:`sombrero_time` takes over there).
    """

    lambda2: float
    angular: AngularProfile

    def __post_init__(self) -> None:
        _check_constant_angular(self.angular)


@dataclass(frozen=True)
class Sombrero:
    """Ring of ``2M`` alternating saddles and minima past a double-zero bifurcation.

    ``mu2`` is the (small, positive) angular eigenvalue and ``mu3`` the radial
    eigenvalue at the ring saddles; ``quartic`` is the radial normal-form
    coefficient ``C4``.
    """

    gate_pairs: int
    mu2: float
    mu3: float
    quartic: float

    def __post_init__(self) -> None:
        if not isinstance(self.gate_pairs, int) or self.gate_pairs < 2:
            raise ValueError("gate_pairs must be an integer >= 2")
        if not self.mu2 > 0.0:
            raise ValueError("mu2 must be positive (ring dips must be saddles)")
        if not self.mu3 > 0.0:
            raise ValueError("mu3 must be positive")
        if not self.quartic > 0.0:
            raise ValueError("quartic coefficient must be positive")


Regime = Union[
    Quadratic,
    FlatUnstable,
    FlatStable,
    Codim2,
    PitchforkTransverse,
    PitchforkLongitudinal,
    DoubleZero,
    Sombrero,
]

# number of Hessian directions absorbed by the regime itself (the remaining
# directions are listed in SaddleSpec.stable_eigenvalues)
_SOFT_DIMS = {
    Quadratic: 1,
    FlatUnstable: 1,
    FlatStable: 2,
    Codim2: 3,
    PitchforkTransverse: 2,
    PitchforkLongitudinal: 1,
    DoubleZero: 3,
    Sombrero: 3,
}

# regimes whose unstable direction is quadratic and enters through |lambda_1|
_NEEDS_UNSTABLE = (
    Quadratic,
    FlatStable,
    Codim2,
    PitchforkTransverse,
    DoubleZero,
    Sombrero,
)


def _check_flat_order(p: object) -> None:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        raise ValueError(f"flat order p must be an integer >= 2, got {p!r}")


def _check_constant_angular(angular: AngularProfile) -> None:
    if not callable(angular) and not float(angular) > 0.0:
        raise ValueError("angular profile must be strictly positive")


# ---------------------------------------------------------------------------
# endpoint specifications


@dataclass(frozen=True)
class MinimumSpec:
    """Quadratic local minimum the diffusion starts from.

    Parameters
    ----------
    value : float
        Potential value ``V(x)`` at the minimum.
    hessian_det : float, optional
        Determinant of the Hessian at the minimum.  May be omitted when
        ``eigenvalues`` is given.
    eigenvalues : sequence of float, optional
        Hessian eigenvalues at the minimum, all strictly positive.  When both
        fields are given their product must agree with ``hessian_det``.
    """

    value: float
    hessian_det: float | None = None
    eigenvalues: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.eigenvalues is not None:
            object.__setattr__(self, "eigenvalues", tuple(float(v) for v in self.eigenvalues))
            if not self.eigenvalues or min(self.eigenvalues) <= 0.0:
                raise ValueError("minimum eigenvalues must all be strictly positive")
        if self.hessian_det is None:
            if self.eigenvalues is None:
                raise ValueError("provide hessian_det or eigenvalues for the minimum")
            object.__setattr__(self, "hessian_det", _prod(self.eigenvalues))
        if not self.hessian_det > 0.0:
            raise ValueError("hessian_det must be positive (quadratic minimum)")
        if self.eigenvalues is not None:
            prod = _prod(self.eigenvalues)
            if abs(prod - self.hessian_det) > 1e-6 * max(abs(prod), abs(self.hessian_det)):
                raise ValueError(
                    f"hessian_det {self.hessian_det!r} disagrees with eigenvalue "
                    f"product {prod!r}"
                )

    @property
    def det(self) -> float:
        return float(self.hessian_det)


@dataclass(frozen=True)
class SaddleSpec:
    """Gate description: altitude, regime, and the quadratic part of the spectrum.

    Parameters
    ----------
    value : float
        Potential value at the gate (``V(z)``, or ``V(z+-)`` for split gates).
    regime : Regime
        One of the regime dataclasses in this module.
    stable_eigenvalues : sequence of float
        The strictly positive eigenvalues entering the spectral product, i.e.
        the directions not absorbed by the regime (``lambda_2..lambda_d`` for a
        quadratic saddle, ``lambda_3..`` when one direction is soft, ``lambda_4..``
        when two are).
    unstable_eigenvalue : float, optional
        ``|lambda_1|`` (or ``|mu_1|``), for regimes whose unstable direction is
        quadratic.  Must be omitted for ``FlatUnstable`` and
        ``PitchforkLongitudinal``, whose unstable direction is the degenerate one.
    """

    value: float
    regime: Regime
    stable_eigenvalues: tuple[float, ...] = ()
    unstable_eigenvalue: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "stable_eigenvalues", tuple(float(v) for v in self.stable_eigenvalues)
        )
        if any(v <= 0.0 for v in self.stable_eigenvalues):
            raise ValueError(
                "stable eigenvalues must be strictly positive; zero or negative "
                "eigenvalues belong to a degenerate regime"
            )
        if isinstance(self.regime, _NEEDS_UNSTABLE):
            if self.unstable_eigenvalue is None or not self.unstable_eigenvalue > 0.0:
                raise ValueError(
                    "unstable_eigenvalue must be the positive magnitude |lambda_1| "
                    f"for regime {type(self.regime).__name__}"
                )
        elif self.unstable_eigenvalue is not None:
            raise ValueError(
                f"regime {type(self.regime).__name__} has a degenerate unstable "
                "direction; leave unstable_eigenvalue unset"
            )

    @property
    def dimension(self) -> int:
        return _SOFT_DIMS[type(self.regime)] + len(self.stable_eigenvalues)

    @property
    def stable_product(self) -> float:
        return _prod(self.stable_eigenvalues)


@dataclass(frozen=True)
class RateResult:
    """Expected-time/capacity pair produced by one of the rate operations.

    ``expected_time == prefactor * exp(barrier / eps)`` and
    ``capacity == capacity_prefactor * exp(-saddle_value / eps)`` hold exactly
    in float arithmetic (overflowing exponentials saturate to ``inf``).
    """

    regime_tag: str
    eps: float
    barrier: float
    saddle_value: float
    prefactor: float
    expected_time: float
    capacity_prefactor: float
    capacity: float
    dimension: int
    error_order: str
    notes: tuple[str, ...] = ()


def _result(
    tag: str,
    eps: float,
    minimum: MinimumSpec,
    saddle: SaddleSpec,
    prefactor: float,
    capacity_prefactor: float,
    error_order: str,
    notes: Sequence[str] = (),
) -> RateResult:
    if not (math.isfinite(prefactor) and prefactor > 0.0):
        raise ValueError(f"computed a non-positive prefactor {prefactor!r}")
    if not (math.isfinite(capacity_prefactor) and capacity_prefactor > 0.0):
        raise ValueError(f"computed a non-positive capacity prefactor {capacity_prefactor!r}")
    barrier = saddle.value - minimum.value
    return RateResult(
        regime_tag=tag,
        eps=eps,
        barrier=barrier,
        saddle_value=saddle.value,
        prefactor=prefactor,
        expected_time=prefactor * _safe_exp(barrier / eps),
        capacity_prefactor=capacity_prefactor,
        capacity=capacity_prefactor * _safe_exp(-saddle.value / eps),
        dimension=saddle.dimension,
        error_order=error_order,
        notes=tuple(notes),
    )


def _check_regime(saddle: SaddleSpec, kind: type, op: str) -> Regime:
    if not isinstance(saddle.regime, kind):
        raise ValueError(
            f"{op} requires a SaddleSpec with regime {kind.__name__}, "
            f"got {type(saddle.regime).__name__}"
        )
    return saddle.regime


def _check_minimum_dim(minimum: MinimumSpec, saddle: SaddleSpec) -> None:
    if minimum.eigenvalues is not None and len(minimum.eigenvalues) != saddle.dimension:
        raise ValueError(
            f"minimum lists {len(minimum.eigenvalues)} eigenvalues but the saddle "
            f"implies dimension {saddle.dimension}"
        )


def _flat_error(p: int) -> str:
    return f"eps^(1/{2 * p}) |log eps|^({2 * p + 1}/{2 * p})"


def _crossover_error(symbol: str) -> str:
    return f"(eps |log eps|^3 / max({symbol}, sqrt(eps |log eps|)))^(1/2)"


_CLASSICAL_ERROR = "eps^(1/2) |log eps|"


def soft_window(eps: float) -> float:
    """Width ``sqrt(eps * |log eps|)`` of the crossover window for soft eigenvalues."""
    eps = _check_eps(eps)
    return math.sqrt(eps * abs(math.log(eps)))


# ---------------------------------------------------------------------------
# angular integrals


def _angular_mean(angular: AngularProfile, func: Callable[[float], float]) -> float:
    """Average ``func(k(phi))`` over ``phi`` in ``[0, 2*pi)``.

    Constant profiles short-circuit to a single evaluation; callable profiles
    are integrated adaptively to relative accuracy 1e-11.
    """
    if not callable(angular):
        k = float(angular)
        if k <= 0.0:
            raise ValueError("angular profile must be strictly positive")
        return func(k)

    def integrand(phi: float) -> float:
        k = float(angular(phi))
        if k <= 0.0:
            raise ValueError(f"angular profile must be strictly positive, got k({phi})={k}")
        return func(k)

    value, _ = quad(integrand, 0.0, TWO_PI, epsabs=0.0, epsrel=1e-11, limit=200)
    return value / TWO_PI


def _angular_integral(angular: AngularProfile, exponent: float) -> float:
    """``integral_0^{2 pi} k(phi)**exponent dphi`` with a constant shortcut."""
    return TWO_PI * _angular_mean(angular, lambda k: k**exponent)


# ---------------------------------------------------------------------------
# rate operations


def ek_classical(minimum: MinimumSpec, saddle: SaddleSpec, eps: float) -> RateResult:
    """Kramers law for a nondegenerate saddle.

    Parameters
    ----------
    minimum : MinimumSpec
        Starting minimum (value and Hessian determinant).
    saddle : SaddleSpec
        Gate with ``Quadratic`` regime: ``unstable_eigenvalue`` is ``|lambda_1|``
        and ``stable_eigenvalues`` are ``lambda_2..lambda_d``.
    eps : float
        Noise intensity.

    Returns
    -------
    RateResult
        ``prefactor = (2*pi/|lambda_1|) * sqrt(|det Hess(z)| / det Hess(x))``
        and the matching capacity.
    """
    eps = _check_eps(eps)
    _check_regime(saddle, Quadratic, "ek_classical")
    _check_minimum_dim(minimum, saddle)
    lam1 = float(saddle.unstable_eigenvalue)
    prod = saddle.stable_product
    d = saddle.dimension
    prefactor = (TWO_PI / lam1) * math.sqrt(lam1 * prod / minimum.det)
    cap_pref = math.sqrt((TWO_PI * eps) ** d * lam1 / prod) / TWO_PI
    return _result("classical", eps, minimum, saddle, prefactor, cap_pref, _CLASSICAL_ERROR)


def ek_flat_unstable(minimum: MinimumSpec, saddle: SaddleSpec, eps: float) -> RateResult:
    """Kramers law when the unstable direction is ``2p``-flat.

    The gate normal form is ``-c * y1**(2p) + sum_j lambda_j y_j**2 / 2`` with
    ``c = regime.coefficient``.  The prefactor carries ``eps**(-(p-1)/(2p))``,
    so the subexponential order *grows* as ``eps`` shrinks.
    """
    eps = _check_eps(eps)
    regime = _check_regime(saddle, FlatUnstable, "ek_flat_unstable")
    _check_minimum_dim(minimum, saddle)
    p, c = regime.p, regime.coefficient
    prod = saddle.stable_product
    d = saddle.dimension
    gamma = math.gamma(1.0 / (2 * p))
    root = c ** (1.0 / (2 * p))
    prefactor = (
        gamma / (p * root) * math.sqrt(TWO_PI * prod / minimum.det) * eps ** (-(p - 1) / (2 * p))
    )
    cap_pref = (
        (p * root / gamma)
        * math.sqrt(TWO_PI ** (d - 1) / prod)
        * eps ** (d / 2 + (p - 1) / (2 * p))
    )
    return _result("flat-unstable", eps, minimum, saddle, prefactor, cap_pref, _flat_error(p))


def ek_flat_stable(minimum: MinimumSpec, saddle: SaddleSpec, eps: float) -> RateResult:
    """Kramers law when one stable direction is ``2p``-flat.

    The gate normal form is ``-|lambda_1| y1**2 / 2 + c * y2**(2p) + ...``; the
    prefactor carries ``eps**(+(p-1)/(2p))`` (the flat stable direction widens
    the gate, shortening the time as noise grows).
    """
    eps = _check_eps(eps)
    regime = _check_regime(saddle, FlatStable, "ek_flat_stable")
    _check_minimum_dim(minimum, saddle)
    p, c = regime.p, regime.coefficient
    lam1 = float(saddle.unstable_eigenvalue)
    prod = saddle.stable_product
    d = saddle.dimension
    gamma = math.gamma(1.0 / (2 * p))
    root = c ** (1.0 / (2 * p))
    prefactor = (
        (p * root / gamma)
        * math.sqrt(TWO_PI**3 * prod / (lam1 * minimum.det))
        * eps ** ((p - 1) / (2 * p))
    )
    cap_pref = (
        (gamma / (p * root))
        * math.sqrt(TWO_PI ** (d - 3) * lam1 / prod)
        * eps ** (d / 2 - (p - 1) / (2 * p))
    )
    return _result("flat-stable", eps, minimum, saddle, prefactor, cap_pref, _flat_error(p))


def ek_codim2(minimum: MinimumSpec, saddle: SaddleSpec, eps: float) -> RateResult:
    """Kramers law for a gate with two ``2p``-flat transverse directions.

    The transverse normal form is ``k(phi) * r**(2p)`` in polar coordinates;
    the angular profile enters through ``I_p = integral k(phi)**(-1/p) dphi``,
    evaluated adaptively (closed form for constant ``k``).
    """
    eps = _check_eps(eps)
    regime = _check_regime(saddle, Codim2, "ek_codim2")
    _check_minimum_dim(minimum, saddle)
    p = regime.p
    lam1 = float(saddle.unstable_eigenvalue)
    prod = saddle.stable_product
    d = saddle.dimension
    i_p = _angular_integral(regime.angular, -1.0 / p)
    gamma = math.gamma(1.0 / p)
    prefactor = (
        (2 * p / gamma)
        / i_p
        * math.sqrt(TWO_PI**4 * prod / (lam1 * minimum.det))
        * eps ** ((p - 1) / p)
    )
    cap_pref = (
        (gamma / (2 * p))
        * i_p
        * math.sqrt(TWO_PI ** (d - 4) * lam1 / prod)
        * eps ** (d / 2 - (p - 1) / p)
    )
    return _result("codim2", eps, minimum, saddle, prefactor, cap_pref, _flat_error(p))


# ---------------------------------------------------------------------------
# pitchfork crossovers


@dataclass(frozen=True)
class SplitSaddles:
    """Leading-order data for the pair of saddles born at a pitchfork bifurcation.

    Attributes
    ----------
    offset : float
        Distance of ``z+-`` from the bifurcating point along the soft axis.
    soft_eigenvalue : float
        Eigenvalue of the soft direction at ``z+-``: ``mu2 = -2*lambda2 > 0``
        for the transverse family, ``mu1 = -2*lambda1 < 0`` for the
        longitudinal one.
    value_shift : float
        ``V(z+-) - V(z)``.

    All three fields are leading-order expressions; corrections of relative
    order ``sqrt(|lambda|)`` are dropped.
    """

    offset: float
    soft_eigenvalue: float
    value_shift: float


def pitchfork_saddles(lambda2: float, quartic: float) -> SplitSaddles:
    """Split saddles of a transverse pitchfork, to leading order.

    Parameters
    ----------
    lambda2 : float
        Soft eigenvalue of the bifurcating saddle; must be negative.
    quartic : float
        Normal-form coefficient ``C4 > 0``.

    Returns
    -------
    SplitSaddles
        Offsets ``+-sqrt(|lambda2| / (4*C4))``, soft eigenvalue
        ``mu2 = 2*|lambda2|``, altitude shift ``-lambda2**2 / (16*C4)``.
    """
    if not lambda2 < 0.0:
        raise ValueError("pitchfork_saddles requires lambda2 < 0 (post-bifurcation)")
    if not quartic > 0.0:
        raise ValueError("quartic coefficient must be positive")
    return SplitSaddles(
        offset=math.sqrt(-lambda2 / (4.0 * quartic)),
        soft_eigenvalue=-2.0 * lambda2,
        value_shift=-(lambda2**2) / (16.0 * quartic),
    )


def longitudinal_saddles(lambda1: float, quartic: float) -> SplitSaddles:
    """Split saddles of a longitudinal pitchfork, to leading order.

    For ``lambda1 > 0`` the former saddle is a local minimum flanked by two
    saddles at ``+-sqrt(lambda1 / (4*C4))`` with unstable eigenvalue
    ``mu1 = -2*lambda1`` and altitude ``V(z) + lambda1**2 / (16*C4)``.
    """
    if not lambda1 > 0.0:
        raise ValueError("longitudinal_saddles requires lambda1 > 0 (post-bifurcation)")
    if not quartic > 0.0:
        raise ValueError("quartic coefficient must be positive")
    return SplitSaddles(
        offset=math.sqrt(lambda1 / (4.0 * quartic)),
        soft_eigenvalue=-2.0 * lambda1,
        value_shift=lambda1**2 / (16.0 * quartic),
    )


def pitchfork_transverse_time(minimum: MinimumSpec, saddle: SaddleSpec, eps: float) -> RateResult:
    """Crossover law through a transverse pitchfork bifurcation.

    For ``lambda2 >= 0`` the single gate is used with the ``psi_plus``
    correction; for ``lambda2 < 0`` the regime must carry ``mu2 > 0`` and the
    ``SaddleSpec`` must describe the split saddles (altitude ``V(z+-)``,
    spectrum ``mu_3..mu_d``), with the ``psi_minus`` correction accounting for
    the two parallel gates.
    """
    eps = _check_eps(eps)
    regime = _check_regime(saddle, PitchforkTransverse, "pitchfork_transverse_time")
    _check_minimum_dim(minimum, saddle)
    lam1 = float(saddle.unstable_eigenvalue)
    prod = saddle.stable_product
    d = saddle.dimension
    a = math.sqrt(2.0 * eps * regime.quartic)
    notes: list[str] = []
    if regime.lambda2 >= 0.0:
        if regime.mu2 is not None:
            raise ValueError("mu2 applies only to the post-bifurcation branch (lambda2 < 0)")
        soft = regime.lambda2
        psi = psi_plus(soft / a)
        tag = "pitchfork-transverse"
        window = soft_window(eps)
        if abs(soft - window) <= 1e-9 * window:
            classical = ek_classical(
                minimum,
                SaddleSpec(
                    value=saddle.value,
                    regime=Quadratic(),
                    stable_eigenvalues=(soft,) + saddle.stable_eigenvalues,
                    unstable_eigenvalue=lam1,
                ),
                eps,
            )
            pref = TWO_PI * math.sqrt((soft + a) * prod / (lam1 * minimum.det)) / psi
            disc = abs(pref - classical.prefactor) / max(pref, classical.prefactor)
            notes.append(
                f"at the upper crossover boundary lambda2 = sqrt(eps |log eps|); "
                f"classical-branch prefactor discrepancy {disc:.3e}"
            )
    else:
        if regime.mu2 is None:
            raise ValueError(
                "lambda2 < 0 requires the split-saddle eigenvalue mu2 "
                "(see pitchfork_saddles for the leading-order value)"
            )
        if not regime.mu2 > 0.0:
            raise ValueError("mu2 must be positive at the split saddles")
        soft = regime.mu2
        psi = psi_minus(soft / a)
        tag = "pitchfork-transverse-split"
        window = soft_window(eps)
        if abs(-regime.lambda2 - window) <= 1e-9 * window:
            classical = ek_classical(
                minimum,
                SaddleSpec(
                    value=saddle.value,
                    regime=Quadratic(),
                    stable_eigenvalues=(soft,) + saddle.stable_eigenvalues,
                    unstable_eigenvalue=lam1,
                ),
                eps,
            )
            pair = combine_gates(classical, 2, arrangement="parallel")
            pref = TWO_PI * math.sqrt((soft + a) * prod / (lam1 * minimum.det)) / psi
            disc = abs(pref - pair.prefactor) / max(pref, pair.prefactor)
            notes.append(
                f"at the lower crossover boundary lambda2 = -sqrt(eps |log eps|); "
                f"two-gate classical prefactor discrepancy {disc:.3e}"
            )
    prefactor = TWO_PI * math.sqrt((soft + a) * prod / (lam1 * minimum.det)) / psi
    cap_pref = math.sqrt(TWO_PI ** (d - 2) * lam1 / ((soft + a) * prod)) * psi * eps ** (d / 2)
    return _result(
        tag, eps, minimum, saddle, prefactor, cap_pref, _crossover_error("|lambda2|"), notes
    )


def pitchfork_longitudinal_time(
    minimum: MinimumSpec, saddle: SaddleSpec, eps: float
) -> RateResult:
    """Crossover law through a longitudinal pitchfork bifurcation.

    For ``lambda1 <= 0`` the single gate is used and ``psi_plus`` *multiplies*
    the time (the flat unstable direction slows the crossing); for
    ``lambda1 > 0`` the regime must carry ``mu1 < 0`` and the ``SaddleSpec``
    must describe the split saddles (altitude ``V(z+-) = V(z) + lambda1**2/(16 C4)``,
    spectrum ``mu_2..mu_d``), crossed in series.
    """
    eps = _check_eps(eps)
    regime = _check_regime(saddle, PitchforkLongitudinal, "pitchfork_longitudinal_time")
    _check_minimum_dim(minimum, saddle)
    prod = saddle.stable_product
    d = saddle.dimension
    a = math.sqrt(2.0 * eps * regime.quartic)
    notes: list[str] = []
    if regime.lambda1 <= 0.0:
        if regime.mu1 is not None:
            raise ValueError("mu1 applies only to the post-bifurcation branch (lambda1 > 0)")
        soft = -regime.lambda1
        psi = psi_plus(soft / a)
        tag = "pitchfork-longitudinal"
        window = soft_window(eps)
        if abs(soft - window) <= 1e-9 * window:
            classical = ek_classical(
                minimum,
                SaddleSpec(
                    value=saddle.value,
                    regime=Quadratic(),
                    stable_eigenvalues=saddle.stable_eigenvalues,
                    unstable_eigenvalue=soft,
                ),
                eps,
            )
            pref = TWO_PI * math.sqrt(prod / ((soft + a) * minimum.det)) * psi
            disc = abs(pref - classical.prefactor) / max(pref, classical.prefactor)
            notes.append(
                f"at the crossover boundary |lambda1| = sqrt(eps |log eps|); "
                f"classical-branch prefactor discrepancy {disc:.3e}"
            )
    else:
        if regime.mu1 is None:
            raise ValueError(
                "lambda1 > 0 requires the split-saddle eigenvalue mu1 "
                "(see longitudinal_saddles for the leading-order value)"
            )
        if not regime.mu1 < 0.0:
            raise ValueError("mu1 must be negative at the split saddles")
        soft = -regime.mu1
        psi = psi_minus(soft / a)
        tag = "pitchfork-longitudinal-split"
        window = soft_window(eps)
        if abs(regime.lambda1 - window) <= 1e-9 * window:
            classical = ek_classical(
                minimum,
                SaddleSpec(
                    value=saddle.value,
                    regime=Quadratic(),
                    stable_eigenvalues=saddle.stable_eigenvalues,
                    unstable_eigenvalue=soft,
                ),
                eps,
            )
            pair = combine_gates(classical, 2, arrangement="series")
            pref = TWO_PI * math.sqrt(prod / ((soft + a) * minimum.det)) * psi
            disc = abs(pref - pair.prefactor) / max(pref, pair.prefactor)
            notes.append(
                f"at the crossover boundary lambda1 = sqrt(eps |log eps|); "
                f"two-gate series prefactor discrepancy {disc:.3e}"
            )
    prefactor = TWO_PI * math.sqrt(prod / ((soft + a) * minimum.det)) * psi
    cap_pref = math.sqrt(TWO_PI ** (d - 2) * (soft + a) / prod) * eps ** (d / 2) / psi
    return _result(
        tag, eps, minimum, saddle, prefactor, cap_pref, _crossover_error("|lambda1|"), notes
    )


def doublezero_time(minimum: MinimumSpec, saddle: SaddleSpec, eps: float) -> RateResult:
    """Crossover law for a saddle with two vanishing transverse eigenvalues.

    The two soft directions share the eigenvalue ``lambda2`` and the angular
    quartic ``k(phi)``.  For ``lambda2 >= 0`` the correction averages
    ``theta_plus``; for ``-sqrt(eps |log eps|) <= lambda2 < 0`` it averages
    ``theta_minus`` with the ``exp(lambda2**2 / (16 eps k))`` altitude weight
    (the ``SaddleSpec`` keeps the altitude of the central point).  More
    negative ``lambda2`` is rejected: the ring of developed dips is the regime
    of :func:`sombrero_time`.
    """
    eps = _check_eps(eps)
    regime = _check_regime(saddle, DoubleZero, "doublezero_time")
    _check_minimum_dim(minimum, saddle)
    lam1 = float(saddle.unstable_eigenvalue)
    prod = saddle.stable_product
    d = saddle.dimension
    lam2 = float(regime.lambda2)
    window = soft_window(eps)
    notes: list[str] = []
    if lam2 >= 0.0:
        denom = _angular_mean(
            regime.angular,
            lambda k: theta_plus(lam2 / math.sqrt(2.0 * eps * k))
            / (lam2 + math.sqrt(2.0 * eps * k)),
        )
        tag = "doublezero"
        if abs(lam2 - window) <= 1e-9 * window:
            classical = ek_classical(
                minimum,
                SaddleSpec(
                    value=saddle.value,
                    regime=Quadratic(),
                    stable_eigenvalues=(lam2, lam2) + saddle.stable_eigenvalues,
                    unstable_eigenvalue=lam1,
                ),
                eps,
            )
            pref = TWO_PI * math.sqrt(prod / (lam1 * minimum.det)) / denom
            disc = abs(pref - classical.prefactor) / max(pref, classical.prefactor)
            notes.append(
                f"at the upper crossover boundary lambda2 = sqrt(eps |log eps|); "
                f"classical-branch prefactor discrepancy {disc:.3e}"
            )
    else:
        if lam2 < -window * (1.0 + 1e-9):
            raise ValueError(
                f"lambda2 = {lam2} lies below -sqrt(eps |log eps|) = {-window}; "
                "the rim dips are developed there -- use sombrero_time with the "
                "mu-spectrum of the ring saddles"
            )
        denom = _angular_mean(
            regime.angular,
            lambda k: theta_minus(-lam2 / math.sqrt(2.0 * eps * k))
            / math.sqrt(2.0 * eps * k)
            * math.exp(lam2**2 / (16.0 * eps * k)),
        )
        tag = "doublezero-negative"
        if abs(-lam2 - window) <= 1e-9 * window:
            notes.append(
                "at the lower validity edge lambda2 = -sqrt(eps |log eps|); the "
                "sombrero regime adjoins (compare against sombrero_time via "
                "relative_discrepancy)"
            )
    prefactor = TWO_PI * math.sqrt(prod / (lam1 * minimum.det)) / denom
    cap_pref = math.sqrt(TWO_PI ** (d - 2) * lam1 / prod) * denom * eps ** (d / 2)
    return _result(
        tag, eps, minimum, saddle, prefactor, cap_pref, _crossover_error("|lambda2|"), notes
    )


def sombrero_time(minimum: MinimumSpec, saddle: SaddleSpec, eps: float) -> RateResult:
    """Kramers law for a ring of ``2M`` gates past a double-zero bifurcation.

    The ``SaddleSpec`` describes one ring saddle ``z*``: altitude ``V(z*)``,
    ``unstable_eigenvalue = |mu_1|``, ``stable_eigenvalues = mu_4..mu_N``, and a
    ``Sombrero`` regime carrying ``(M, mu2, mu3, C4)``.  The corrections
    ``theta_minus(mu3 / sqrt(8 eps C4))`` and
    ``chi(mu2 mu3 / ((2M)**2 8 eps C4))`` interpolate between the flat-ring,
    rotation-invariant, and ``2M``-discrete-gates regimes.
    """
    eps = _check_eps(eps)
    regime = _check_regime(saddle, Sombrero, "sombrero_time")
    _check_minimum_dim(minimum, saddle)
    lam1 = float(saddle.unstable_eigenvalue)
    prod = saddle.stable_product
    d = saddle.dimension
    two_m = 2 * regime.gate_pairs
    b = 8.0 * eps * regime.quartic
    theta = theta_minus(regime.mu3 / math.sqrt(b))
    chi_val = chi(regime.mu2 * regime.mu3 / (two_m**2 * b))
    core = regime.mu2 * regime.mu3 + two_m**2 * b
    prefactor = (
        (TWO_PI / two_m) * math.sqrt(core * prod / (lam1 * minimum.det)) / (theta * chi_val)
    )
    cap_pref = (
        two_m
        * math.sqrt(TWO_PI ** (d - 2) * lam1 / (core * prod))
        * theta
        * chi_val
        * eps ** (d / 2)
    )
    return _result(
        "sombrero", eps, minimum, saddle, prefactor, cap_pref, _crossover_error("mu2")
    )


# ---------------------------------------------------------------------------
# helpers


def combine_gates(result: RateResult, count: int, *, arrangement: str = "parallel") -> RateResult:
    """Aggregate ``count`` identical gates in parallel or in series.

    Parallel gates divide the expected time and add the capacities; series
    gates do the opposite.  The duality product ``prefactor *
    capacity_prefactor`` is unchanged either way.
    """
    if not isinstance(count, int) or count < 1:
        raise ValueError("count must be a positive integer")
    if arrangement == "parallel":
        scale = 1.0 / count
    elif arrangement == "series":
        scale = float(count)
    else:
        raise ValueError("arrangement must be 'parallel' or 'series'")
    return replace(
        result,
        prefactor=result.prefactor * scale,
        expected_time=result.expected_time * scale,
        capacity_prefactor=result.capacity_prefactor / scale,
        capacity=result.capacity / scale,
        notes=result.notes + (f"{count} identical gates in {arrangement}",),
    )


def relative_discrepancy(a: RateResult, b: RateResult) -> float:
    """Largest relative difference between two results' prefactor, capacity prefactor, and barrier."""
    pairs = (
        (a.prefactor, b.prefactor),
        (a.capacity_prefactor, b.capacity_prefactor),
        (a.barrier, b.barrier),
    )
    out = 0.0
    for x, y in pairs:
        scale = max(abs(x), abs(y))
        if scale > 0.0:
            out = max(out, abs(x - y) / scale)
    return out


def higher_codim_capacity_order(dimension: int, zero_block: int, p: int) -> tuple[float, str]:
    """Order-only estimate for ``q - 1 >= 3`` vanishing eigenvalues.

    When the eigenvalues ``lambda_2 .. lambda_q`` all vanish (``zero_block = q
    >= 4``) and the first nonvanishing normal-form coefficient has even degree
    ``2p``, the capacity prefactor has order ``eps**(d/2 - (q-1)(p-1)/(2p))``.
    No constant is available (it would involve a ``(q-2)``-dimensional angular
    integral), so only the exponent and a display string are returned.
    """
    if not isinstance(zero_block, int) or zero_block < 4:
        raise ValueError("zero_block must be an integer >= 4 (use ek_codim2 for q = 3)")
    _check_flat_order(p)
    if dimension < zero_block:
        raise ValueError("dimension must be at least the size of the degenerate block")
    exponent = dimension / 2 - (zero_block - 1) * (p - 1) / (2 * p)
    return exponent, f"eps^({exponent:g}) (constant requires a {zero_block - 2}-dim angular integral)"


# ---------------------------------------------------------------------------
# parameter sweeps

SWEEP_FIELDS = (
    "control_parameter",
    "eps",
    "barrier",
    "prefactor",
    "expected_time",
    "regime_tag",
    "error_order",
)


def _sweep_row(control: float, result: RateResult) -> dict:
    return {
        "control_parameter": float(control),
        "eps": result.eps,
        "barrier": result.barrier,
        "prefactor": result.prefactor,
        "expected_time": result.expected_time,
        "regime_tag": result.regime_tag,
        "error_order": result.error_order,
    }


def _default_minimum(minimum: MinimumSpec | None) -> MinimumSpec:
    return MinimumSpec(value=0.0, hessian_det=1.0) if minimum is None else minimum


def sweep_transverse(
    eps: float,
    lambda2_values: Sequence[float],
    *,
    quartic: float = 0.5,
    barrier: float = 0.0,
    unstable: float = 1.0,
    stable: Sequence[float] = (),
    minimum: MinimumSpec | None = None,
) -> list[dict]:
    """Transverse-pitchfork prefactor sweep over ``lambda2``.

    Defaults put the saddle in normal-form units (``|lambda_1| = 1``, unit
    minimum determinant, ``C4 = 1/2`` so the crossover scale is exactly
    ``sqrt(eps)``).  For ``lambda2 < 0`` the split-saddle data from
    :func:`pitchfork_saddles` is used, including the lowered altitude.  Rows
    follow the input order and carry the fields in :data:`SWEEP_FIELDS`.
    """
    minimum = _default_minimum(minimum)
    rows = []
    for lam2 in lambda2_values:
        lam2 = float(lam2)
        if lam2 >= 0.0:
            regime = PitchforkTransverse(lambda2=lam2, quartic=quartic)
            value = minimum.value + barrier
        else:
            split = pitchfork_saddles(lam2, quartic)
            regime = PitchforkTransverse(lambda2=lam2, quartic=quartic, mu2=split.soft_eigenvalue)
            value = minimum.value + barrier + split.value_shift
        saddle = SaddleSpec(
            value=value,
            regime=regime,
            stable_eigenvalues=tuple(stable),
            unstable_eigenvalue=unstable,
        )
        rows.append(_sweep_row(lam2, pitchfork_transverse_time(minimum, saddle, eps)))
    return rows


def sweep_longitudinal(
    eps: float,
    lambda1_values: Sequence[float],
    *,
    quartic: float = 0.5,
    barrier: float = 0.0,
    stable: Sequence[float] = (1.0,),
    minimum: MinimumSpec | None = None,
) -> list[dict]:
    """Longitudinal-pitchfork prefactor sweep over the soft eigenvalue ``lambda1``.

    For ``lambda1 > 0`` the split saddles of :func:`longitudinal_saddles` are
    used, including the raised altitude.
    """
    minimum = _default_minimum(minimum)
    rows = []
    for lam1 in lambda1_values:
        lam1 = float(lam1)
        if lam1 <= 0.0:
            regime = PitchforkLongitudinal(lambda1=lam1, quartic=quartic)
            value = minimum.value + barrier
        else:
            split = longitudinal_saddles(lam1, quartic)
            regime = PitchforkLongitudinal(
                lambda1=lam1, quartic=quartic, mu1=split.soft_eigenvalue
            )
            value = minimum.value + barrier + split.value_shift
        saddle = SaddleSpec(value=value, regime=regime, stable_eigenvalues=tuple(stable))
        rows.append(_sweep_row(lam1, pitchfork_longitudinal_time(minimum, saddle, eps)))
    return rows


def sweep_doublezero(
    eps: float,
    lambda2_values: Sequence[float],
    *,
    angular: AngularProfile = 0.5,
    barrier: float = 0.0,
    unstable: float = 1.0,
    stable: Sequence[float] = (),
    minimum: MinimumSpec | None = None,
) -> list[dict]:
    """Double-zero prefactor sweep over ``lambda2``.

    Values below ``-sqrt(eps |log eps|)`` raise (use :func:`sweep_sombrero`
    for the ring regime).
    """
    minimum = _default_minimum(minimum)
    rows = []
    for lam2 in lambda2_values:
        lam2 = float(lam2)
        saddle = SaddleSpec(
            value=minimum.value + barrier,
            regime=DoubleZero(lambda2=lam2, angular=angular),
            stable_eigenvalues=tuple(stable),
            unstable_eigenvalue=unstable,
        )
        rows.append(_sweep_row(lam2, doublezero_time(minimum, saddle, eps)))
    return rows


def sweep_sombrero(
    eps: float,
    mu3_values: Sequence[float],
    *,
    gate_pairs: int = 3,
    quartic: float = 0.125,
    barrier: float = 0.0,
    unstable: float = 1.0,
    stable: Sequence[float] = (),
    minimum: MinimumSpec | None = None,
    mu2_map: Callable[[float], float] | None = None,
) -> list[dict]:
    """Sombrero prefactor sweep over the radial eigenvalue ``mu3``.

    Defaults model the three-particle ring: ``M = 3`` gates pairs, radial
    quartic ``C4 = 1/8``, and the angular eigenvalue map
    ``mu2 = mu3**2 / 2`` implied by the sixth-order rim modulation of that
    lattice.  The ring altitude ``V(z*) = barrier - mu3**2 / (64 * C4)`` drops
    with ``mu3`` exactly as the split-saddle altitude of the radial pitchfork.
    """
    minimum = _default_minimum(minimum)
    if mu2_map is None:
        mu2_map = lambda m3: 0.5 * m3 * m3
    rows = []
    for mu3 in mu3_values:
        mu3 = float(mu3)
        if not mu3 > 0.0:
            raise ValueError("mu3 values must be positive")
        value = minimum.value + barrier - mu3**2 / (64.0 * quartic)
        saddle = SaddleSpec(
            value=value,
            regime=Sombrero(
                gate_pairs=gate_pairs, mu2=float(mu2_map(mu3)), mu3=mu3, quartic=quartic
            ),
            stable_eigenvalues=tuple(stable),
            unstable_eigenvalue=unstable,
        )
        rows.append(_sweep_row(mu3, sombrero_time(minimum, saddle, eps)))
    return rows
