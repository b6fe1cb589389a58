"""Potential-energy models with exact or finite-difference derivatives.

The central abstraction is :class:`PotentialModel`: an evaluable potential
``V : R^d -> R`` together with its gradient, Hessian and higher partial
derivatives up to order four.  Built-in families (polynomials, the periodic
particle chain) carry exact derivatives; anything else falls back to central
finite differences with order-dependent step sizes.
"""

from __future__ import annotations

import itertools
import json
import math

import numpy as np

__all__ = [
    "PotentialModel",
    "PolynomialPotential",
    "ChainPotential",
    "FunctionPotential",
    "chain_potential",
    "rotated_two_particle",
    "double_well_1d",
    "fourier_eigenvalues",
    "critical_coupling",
    "uniform_minimum_spectrum",
    "load_potential",
    "TWO_PARTICLE_CRITICAL_COUPLING",
]

#: Coupling threshold below which the two-particle saddle splits (N=2 analogue
#: of :func:`critical_coupling`, which is defined only for N >= 3).
TWO_PARTICLE_CRITICAL_COUPLING = 0.5

_EPS = np.finfo(float).eps


def _fd_step(order: int, x: np.ndarray) -> float:
    # Truncation/rounding balance for a central difference of a k-th derivative.
    return _EPS ** (1.0 / (2 + order)) * max(1.0, float(np.linalg.norm(x)))


class PotentialModel:
    """Base class: a smooth potential on R^d.

    Subclasses must implement :meth:`value` and set :attr:`dim`.  Derivative
    evaluators default to central finite differences and should be overridden
    whenever exact expressions are available.

    Parameters
    ----------
    dim : int
        Ambient dimension d.
    smoothness : int, optional
        Guaranteed smoothness order (metadata only).
    confining : bool, optional
        Caller-asserted flag that level sets are exponentially tight; never
        verified numerically.
    """

    def __init__(self, dim: int, smoothness: int = 4, confining: bool = True):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        self.dim = int(dim)
        self.smoothness = int(smoothness)
        self.confining = bool(confining)

    # -- evaluation --------------------------------------------------------

    def value(self, x) -> float:
        raise NotImplementedError

    def value_many(self, pts: np.ndarray) -> np.ndarray:
        """Evaluate V on an (n, d) array of points.  Loop fallback."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.array([self.value(p) for p in pts])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim <= 1:
            return self.value(x)
        return self.value_many(x)

    # -- derivatives -------------------------------------------------------

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        h = _fd_step(1, x)
        g = np.empty(self.dim)
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = h
            g[i] = (self.value(x + e) - self.value(x - e)) / (2 * h)
        return g

    def gradient_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.array([self.gradient(p) for p in pts])

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        h = _fd_step(2, x)
        H = np.empty((self.dim, self.dim))
        f0 = self.value(x)
        for i in range(self.dim):
            ei = np.zeros(self.dim)
            ei[i] = h
            H[i, i] = (self.value(x + ei) - 2 * f0 + self.value(x - ei)) / h**2
            for j in range(i + 1, self.dim):
                ej = np.zeros(self.dim)
                ej[j] = h
                H[i, j] = H[j, i] = (
                    self.value(x + ei + ej)
                    - self.value(x + ei - ej)
                    - self.value(x - ei + ej)
                    + self.value(x - ei - ej)
                ) / (4 * h**2)
        return 0.5 * (H + H.T)

    def _fd_nested(self, x: np.ndarray, dirs: tuple[int, ...], h: float) -> float:
        # Nested central differences; the stencil is permutation-symmetric.
        if not dirs:
            return self.value(x)
        e = np.zeros(self.dim)
        e[dirs[0]] = h
        return (
            self._fd_nested(x + e, dirs[1:], h) - self._fd_nested(x - e, dirs[1:], h)
        ) / (2 * h)

    def partial(self, x, dirs: tuple[int, ...]) -> float:
        """Mixed partial derivative ∂_{dirs} V(x) (dirs lists axes, repeats allowed)."""
        x = np.asarray(x, dtype=float)
        k = len(dirs)
        if k == 0:
            return self.value(x)
        if k == 1:
            return self.gradient(x)[dirs[0]]
        if k == 2:
            return self.hessian(x)[dirs[0], dirs[1]]
        return self._fd_nested(x, tuple(dirs), _fd_step(k, x))

    def third_tensor(self, x) -> np.ndarray:
        """Full symmetric third-derivative tensor, shape (d, d, d)."""
        d = self.dim
        T = np.zeros((d, d, d))
        for idx in itertools.combinations_with_replacement(range(d), 3):
            v = self.partial(x, idx)
            for perm in set(itertools.permutations(idx)):
                T[perm] = v
        return T

    def fourth_tensor(self, x) -> np.ndarray:
        """Full symmetric fourth-derivative tensor, shape (d, d, d, d)."""
        d = self.dim
        T = np.zeros((d, d, d, d))
        for idx in itertools.combinations_with_replacement(range(d), 4):
            v = self.partial(x, idx)
            for perm in set(itertools.permutations(idx)):
                T[perm] = v
        return T


class FunctionPotential(PotentialModel):
    """Wrap a plain callable ``f(x) -> float`` with finite-difference derivatives."""

    def __init__(self, f, dim: int, smoothness: int = 4, confining: bool = True):
        super().__init__(dim, smoothness, confining)
        self._f = f

    def value(self, x) -> float:
        return float(self._f(np.asarray(x, dtype=float)))


class PolynomialPotential(PotentialModel):
    """Polynomial potential with exact derivatives of every order.

    Parameters
    ----------
    terms : sequence of (exponents, coeff)
        Each term is ``coeff * prod_i x_i**exponents[i]``.  Exponents are
        non-negative integers; terms with equal exponent vectors are merged.
    dim : int, optional
        Ambient dimension; inferred from the exponent vectors if omitted.
    """

    def __init__(self, terms, dim: int | None = None, confining: bool = True):
        terms = [(tuple(int(e) for e in exps), float(c)) for exps, c in terms]
        if dim is None:
            if not terms:
                raise ValueError("cannot infer dimension from an empty term list")
            dim = len(terms[0][0])
        for exps, _ in terms:
            if len(exps) != dim:
                raise ValueError(
                    f"exponent vector {exps} has length {len(exps)}, expected {dim}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
        super().__init__(dim, smoothness=10**9, confining=confining)
        merged: dict[tuple[int, ...], float] = {}
        for exps, c in terms:
            merged[exps] = merged.get(exps, 0.0) + c
        merged = {e: c for e, c in merged.items() if c != 0.0}
        self.exponents = np.array(sorted(merged), dtype=int).reshape(len(merged), dim)
        self.coefficients = np.array([merged[tuple(e)] for e in self.exponents])
        self._grad_polys = [self._differentiated(i) for i in range(dim)]

    def _differentiated(self, axis: int) -> tuple[np.ndarray, np.ndarray]:
        keep = self.exponents[:, axis] > 0
        exps = self.exponents[keep].copy()
        coeffs = self.coefficients[keep] * exps[:, axis]
        exps[:, axis] -= 1
        return exps, coeffs

    @staticmethod
    def _eval_terms(exps: np.ndarray, coeffs: np.ndarray, pts: np.ndarray) -> np.ndarray:
        if len(coeffs) == 0:
            return np.zeros(pts.shape[0])
        monomials = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
        return monomials @ coeffs

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float).reshape(1, self.dim)
        return float(self._eval_terms(self.exponents, self.coefficients, x)[0])

    def value_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self._eval_terms(self.exponents, self.coefficients, pts)

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(1, self.dim)
        return np.array(
            [self._eval_terms(e, c, x)[0] for e, c in self._grad_polys]
        )

    def gradient_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.stack(
            [self._eval_terms(e, c, pts) for e, c in self._grad_polys], axis=1
        )

    def _partial_arrays(self, dirs) -> tuple[np.ndarray, np.ndarray]:
        exps, coeffs = self.exponents, self.coefficients
        for axis in dirs:
            keep = exps[:, axis] > 0
            exps = exps[keep].copy()
            coeffs = coeffs[keep] * exps[:, axis]
            exps[:, axis] -= 1
        return exps, coeffs

    def partial(self, x, dirs: tuple[int, ...]) -> float:
        x = np.asarray(x, dtype=float).reshape(1, self.dim)
        exps, coeffs = self._partial_arrays(dirs)
        return float(self._eval_terms(exps, coeffs, x)[0])

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        H = np.empty((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(i, self.dim):
                H[i, j] = H[j, i] = self.partial(x, (i, j))
        return H

    def linearly_transformed(self, A: np.ndarray) -> "PolynomialPotential":
        """Exact polynomial for ``x -> V(A x)`` (e.g. A orthogonal for rotations)."""
        A = np.asarray(A, dtype=float)
        if A.shape != (self.dim, self.dim):
            raise ValueError(f"matrix must be {self.dim}x{self.dim}, got {A.shape}")
        acc: dict[tuple[int, ...], float] = {}
        zero = tuple([0] * self.dim)
        for exps, c in zip(self.exponents, self.coefficients):
            term: dict[tuple[int, ...], float] = {zero: float(c)}
            for i, e in enumerate(exps):
                # linear form (A x)_i as a monomial dict
                lin = {
                    tuple(1 if j == k else 0 for j in range(self.dim)): A[i, k]
                    for k in range(self.dim)
                    if A[i, k] != 0.0
                }
                for _ in range(int(e)):
                    nxt: dict[tuple[int, ...], float] = {}
                    for e1, c1 in term.items():
                        for e2, c2 in lin.items():
                            key = tuple(a + b for a, b in zip(e1, e2))
                            nxt[key] = nxt.get(key, 0.0) + c1 * c2
                    term = nxt
            for key, val in term.items():
                acc[key] = acc.get(key, 0.0) + val
        return PolynomialPotential(list(acc.items()), dim=self.dim)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dimension": self.dim,
            "terms": [
                {"exponents": [int(e) for e in exps], "coeff": float(c)}
                for exps, c in zip(self.exponents, self.coefficients)
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PolynomialPotential":
        if "dimension" not in doc or "terms" not in doc:
            raise ValueError("polynomial document needs 'dimension' and 'terms'")
        dim = int(doc["dimension"])
        terms = []
        for t in doc["terms"]:
            exps, coeff = t["exponents"], float(t["coeff"])
            if not math.isfinite(coeff):
                raise ValueError(f"non-finite coefficient {coeff!r}")
            terms.append((exps, coeff))
        return cls(terms, dim=dim)


class ChainPotential(PotentialModel):
    """Periodic chain of N bistable particles with harmonic nearest-neighbour coupling.

    ``V(x) = sum_i U(x_i) + (gamma/4) sum_i (x_i - x_{i+1})^2`` with
    ``U(t) = t^4/4 - t^2/2`` and periodic indices.  All derivatives are exact;
    the third and fourth tensors are diagonal (``6 x_i`` and ``6``).
    """

    def __init__(self, N: int, gamma: float):
        if N < 2:
            raise ValueError(f"chain needs N >= 2 particles, got {N}")
        if gamma < 0:
            raise ValueError(f"coupling gamma must be >= 0, got {gamma}")
        super().__init__(dim=int(N), smoothness=10**9, confining=True)
        self.N = int(N)
        self.gamma = float(gamma)
        L = np.zeros((N, N))
        for i in range(N):
            L[i, i] += 1.0
            L[i, (i + 1) % N] -= 0.5
            L[i, (i - 1) % N] -= 0.5
        self._laplacian = L  # coupling quadratic form: (gamma/4)*sum (x_i-x_{i+1})^2 = (gamma/2) x.L.x

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        onsite = float(np.sum(0.25 * x**4 - 0.5 * x**2))
        diff = x - np.roll(x, -1)
        return onsite + 0.25 * self.gamma * float(np.sum(diff**2))

    def value_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        onsite = np.sum(0.25 * pts**4 - 0.5 * pts**2, axis=1)
        diff = pts - np.roll(pts, -1, axis=1)
        return onsite + 0.25 * self.gamma * np.sum(diff**2, axis=1)

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x**3 - x + self.gamma * (self._laplacian @ x)

    def gradient_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return pts**3 - pts + self.gamma * (pts @ self._laplacian.T)

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.diag(3.0 * x**2 - 1.0) + self.gamma * self._laplacian

    def partial(self, x, dirs: tuple[int, ...]) -> float:
        k = len(dirs)
        if k == 0:
            return self.value(x)
        if k == 1:
            return float(self.gradient(x)[dirs[0]])
        if k == 2:
            return float(self.hessian(x)[dirs[0], dirs[1]])
        if len(set(dirs)) != 1:
            return 0.0
        x = np.asarray(x, dtype=float)
        if k == 3:
            return 6.0 * float(x[dirs[0]])
        if k == 4:
            return 6.0
        return 0.0


# ---------------------------------------------------------------------------
# built-in families and spectra


def chain_potential(N: int, gamma: float) -> ChainPotential:
    """Construct the periodic N-particle chain potential.

    Parameters
    ----------
    N : int
        Number of particles, at least 2.
    gamma : float
        Coupling strength, non-negative.
    """
    return ChainPotential(N, gamma)


def rotated_two_particle(gamma: float) -> PolynomialPotential:
    """Two-particle chain in rotated coordinates (y1, y2) = ((x1+x2), (x1-x2))/sqrt(2).

    Returns the quartic polynomial
    ``-y1^2/2 - (1-2*gamma)/2 * y2^2 + (y1^4 + 6 y1^2 y2^2 + y2^4)/8``.
    At ``gamma = 1/2`` the y2-quadratic term vanishes and the origin becomes a
    degenerate saddle with a quartic transverse direction.
    """
    return PolynomialPotential(
        [
            ((2, 0), -0.5),
            ((0, 2), -(1.0 - 2.0 * gamma) / 2.0),
            ((4, 0), 0.125),
            ((2, 2), 0.75),
            ((0, 4), 0.125),
        ],
        dim=2,
    )


def double_well_1d() -> PolynomialPotential:
    """The scalar double well ``x^4/4 - x^2/2`` (wells at ±1, barrier 1/4)."""
    return PolynomialPotential([((4,), 0.25), ((2,), -0.5)], dim=1)


def _fourier_modes(N: int) -> list[int]:
    # complete residue system: -ceil(N/2)+1 .. floor(N/2)
    return list(range(-((N + 1) // 2) + 1, N // 2 + 1))


def fourier_eigenvalues(N: int, gamma: float) -> list[tuple[int, float]]:
    """Hessian spectrum of the chain at the origin, as (k, eta_k) pairs sorted by k.

    ``eta_k = -1 + 2*gamma*sin^2(k*pi/N)`` for k in the complete residue
    system ``-ceil(N/2)+1 .. floor(N/2)``; eta_0 = -1 always.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    return [
        (k, -1.0 + 2.0 * gamma * math.sin(k * math.pi / N) ** 2)
        for k in _fourier_modes(N)
    ]


def critical_coupling(N: int) -> float:
    """Coupling gamma* at which eta_{±1} vanish and the origin degenerates.

    Defined for N >= 3 (``1/(2 sin^2(pi/N))``).  For N=2 the analogous
    threshold is the constant :data:`TWO_PARTICLE_CRITICAL_COUPLING`.
    """
    if N < 3:
        raise ValueError(
            "critical_coupling is defined for N >= 3; "
            "for N=2 use TWO_PARTICLE_CRITICAL_COUPLING"
        )
    return 1.0 / (2.0 * math.sin(math.pi / N) ** 2)


def uniform_minimum_spectrum(N: int, gamma: float) -> list[tuple[int, float]]:
    """Hessian spectrum of the chain at the uniform minima ±(1,...,1).

    ``nu_k = 2 + 2*gamma*sin^2(k*pi/N)`` over the same mode range as
    :func:`fourier_eigenvalues`; valid for every chain size ``N >= 2``.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    return [
        (k, 2.0 + 2.0 * gamma * math.sin(k * math.pi / N) ** 2)
        for k in _fourier_modes(N)
    ]


# ---------------------------------------------------------------------------
# loading


_BUILTINS = {"chain", "rotated2", "double_well"}


def _build_named(name: str, params: dict) -> PotentialModel:
    params = dict(params or {})
    if name == "chain":
        try:
            N, gamma = params.pop("N"), params.pop("gamma")
        except KeyError as exc:
            raise ValueError(f"chain potential needs parameter {exc}") from None
        _reject_extra(name, params)
        return chain_potential(int(N), float(gamma))
    if name == "rotated2":
        try:
            gamma = params.pop("gamma")
        except KeyError as exc:
            raise ValueError(f"rotated2 potential needs parameter {exc}") from None
        _reject_extra(name, params)
        return rotated_two_particle(float(gamma))
    if name == "double_well":
        _reject_extra(name, params)
        return double_well_1d()
    raise ValueError(f"unknown potential name {name!r}; built-ins: {sorted(_BUILTINS)}")


def _reject_extra(name: str, leftover: dict) -> None:
    if leftover:
        raise ValueError(f"unexpected parameters for {name!r}: {sorted(leftover)}")


def load_potential(source, params: dict | None = None) -> PotentialModel:
    """Load a potential from a name, a JSON document, or a JSON file path.

    Accepted forms:

    * a built-in family name (``"chain"``, ``"rotated2"``, ``"double_well"``)
      with ``params`` supplying the family parameters;
    * a dict ``{"dimension": d, "terms": [{"exponents": [...], "coeff": c}]}``;
    * a dict ``{"name": ..., "params": {...}}`` addressing a built-in;
    * a path to a JSON file containing either dict form.
    """
    if isinstance(source, PotentialModel):
        return source
    if isinstance(source, dict):
        doc = source
    elif isinstance(source, str):
        if source in _BUILTINS:
            return _build_named(source, params or {})
        try:
            with open(source) as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise ValueError(
                f"{source!r} is neither a built-in potential name nor a readable file"
            ) from None
        except json.JSONDecodeError as exc:
            raise ValueError(f"could not parse {source!r} as JSON: {exc}") from None
    else:
        raise TypeError(f"cannot load a potential from {type(source).__name__}")
    if "name" in doc:
        merged = dict(doc.get("params") or {})
        merged.update(params or {})
        return _build_named(doc["name"], merged)
    return PolynomialPotential.from_dict(doc)
