# polynomial/gauge_polynomial.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Tuple, Union

import numpy as np

from errors import ArgumentError, NumericalError, PolynomialError

# A point z in C^N, or a field: axis 0 indexes components, trailing axes are grid points.
ComplexVector = np.ndarray

_IMAG_TOL = 1e-12


@dataclass(frozen=True, order=True)
class MultiIndexPair:
    """Exponents of one monomial z^alpha * conj(z)^beta with |alpha| = |beta| = 2"""
    alpha: Tuple[int, ...]
    beta: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        if len(self.alpha) != len(self.beta) or not self.alpha:
            raise PolynomialError(f"alpha and beta must have equal positive length, got {self.alpha}, {self.beta}")
        if min(self.alpha) < 0 or min(self.beta) < 0:
            raise PolynomialError(f"exponents must be non-negative, got {self.alpha}, {self.beta}")
        # |alpha| = |beta| is the gauge condition for a quartic
        if sum(self.alpha) != 2 or sum(self.beta) != 2:
            raise PolynomialError(
                f"monomial must have |alpha| = |beta| = 2, got |alpha|={sum(self.alpha)}, |beta|={sum(self.beta)}"
            )

    @property
    def n_components(self) -> int:
        return len(self.alpha)

    def swapped(self) -> "MultiIndexPair":
        return MultiIndexPair(self.beta, self.alpha)

    def canonical(self) -> "MultiIndexPair":
        """Lexicographically least member of the realness pair {(alpha, beta), (beta, alpha)}"""
        return min(self, self.swapped())

    def is_self_conjugate(self) -> bool:
        return self.alpha == self.beta


PairLike = Union[MultiIndexPair, Tuple[Iterable[int], Iterable[int]]]


def _as_pair(key: PairLike) -> MultiIndexPair:
    if isinstance(key, MultiIndexPair):
        return key
    alpha, beta = key
    return MultiIndexPair(tuple(alpha), tuple(beta))


class _MonomialTable:
    """Dense exponent arrays for vectorized evaluation of a list of monomials"""

    def __init__(self, n: int, monomials: List[Tuple[MultiIndexPair, float]]):
        self.n = n
        self.coef = np.array([c for _, c in monomials], dtype=float)
        self.alpha = np.array([m.alpha for m, _ in monomials], dtype=int).reshape(len(monomials), n)
        self.beta = np.array([m.beta for m, _ in monomials], dtype=int).reshape(len(monomials), n)

    def __len__(self) -> int:
        return len(self.coef)

    def evaluate(self, powers, conj_powers, shape) -> np.ndarray:
        total = np.zeros(shape, dtype=complex)
        for c, alpha, beta in zip(self.coef, self.alpha, self.beta):
            term = None
            for j in range(self.n):
                for factor in (powers[j][alpha[j]], conj_powers[j][beta[j]]):
                    if factor is None:
                        continue
                    term = factor if term is None else term * factor
            total += c * (term if term is not None else 1.0)
        return total


def _power_cache(z: np.ndarray, max_power: int = 2):
    # index p holds z_j**p; p = 0 is None so products skip it
    powers, conj_powers = [], []
    for zj in z:
        zc = np.conj(zj)
        row, crow = [None, zj], [None, zc]
        for _ in range(2, max_power + 1):
            row.append(row[-1] * zj)
            crow.append(crow[-1] * zc)
        powers.append(row)
        conj_powers.append(crow)
    return powers, conj_powers


def _monomial(pair, powers, conj_powers, shape) -> np.ndarray:
    term = np.ones(shape, dtype=complex)
    for j in range(pair.n_components):
        for factor in (powers[j][pair.alpha[j]], conj_powers[j][pair.beta[j]]):
            if factor is not None:
                term = term * factor
    return term


class GaugePolynomial:
    """Gauge-invariant real quartic polynomial g on C^N.

    Coefficients are stored once per realness pair, on the canonical
    (lexicographically least) member; g sums 2 Re of each pair.
    The nonlinearity F_j = 1/2 d g / d conj(z_j) is precomputed as a second
    monomial table so that field evaluation is a plain sum of products.
    """

    def __init__(self, n_components: int, terms: Mapping[PairLike, float] = None, symmetrize: bool = True):
        if int(n_components) < 1:
            raise PolynomialError(f"n_components must be positive, got {n_components}")
        self.n_components = int(n_components)

        full: Dict[MultiIndexPair, float] = {}
        for key, coeff in (terms or {}).items():
            pair = _as_pair(key)
            if pair.n_components != self.n_components:
                raise PolynomialError(
                    f"monomial {pair} has {pair.n_components} components, expected {self.n_components}"
                )
            if np.iscomplexobj(coeff):
                raise PolynomialError(f"coefficient of {pair} must be real, got {coeff}")
            if not np.isfinite(coeff):
                raise PolynomialError(f"coefficient of {pair} is not finite")
            full[pair] = full.get(pair, 0.0) + float(coeff)

        canonical: Dict[MultiIndexPair, float] = {}
        for pair, coeff in full.items():
            partner = pair.swapped()
            if partner in full and full[partner] != coeff:
                raise PolynomialError(
                    f"realness violated: coeff{pair} = {coeff} but coeff{partner} = {full[partner]}"
                )
            if partner not in full and not symmetrize:
                raise PolynomialError(f"realness partner {partner} of {pair} is missing")
            if coeff != 0.0:
                canonical[pair.canonical()] = coeff

        self._coeffs: Dict[MultiIndexPair, float] = dict(sorted(canonical.items()))
        self._f_tables = [
            _MonomialTable(self.n_components, self._derivative_terms(j)) for j in range(self.n_components)
        ]

    # ------------------------------------------------------------------ #
    # table access

    @property
    def coefficients(self) -> Dict[MultiIndexPair, float]:
        """Canonical coefficient table (one entry per realness pair)"""
        return dict(self._coeffs)

    @property
    def terms(self) -> Dict[MultiIndexPair, float]:
        """Full coefficient table with both members of every realness pair"""
        out: Dict[MultiIndexPair, float] = {}
        for pair, coeff in self._coeffs.items():
            out[pair] = coeff
            out[pair.swapped()] = coeff
        return dict(sorted(out.items()))

    def _derivative_terms(self, j: int) -> List[Tuple[MultiIndexPair, float]]:
        # d/d conj(z_j) lowers beta_j; the lowered exponents no longer satisfy |beta| = 2
        out = []
        for pair, coeff in self.terms.items():
            if pair.beta[j] == 0:
                continue
            beta = list(pair.beta)
            beta[j] -= 1
            out.append((_LoweredPair(pair.alpha, tuple(beta)), 0.5 * coeff * pair.beta[j]))
        return out

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient_bound(self) -> float:
        """Sum of |coefficients|; |g(z)| <= bound * |z|^4 for every z"""
        return float(sum(abs(c) for c in self.terms.values()))

    def scaled(self, factor: float) -> "GaugePolynomial":
        return GaugePolynomial(self.n_components, {p: factor * c for p, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaugePolynomial):
            return NotImplemented
        return self.n_components == other.n_components and self._coeffs == other._coeffs

    def __repr__(self) -> str:
        return f"GaugePolynomial(n={self.n_components}, pairs={len(self._coeffs)})"

    # ------------------------------------------------------------------ #
    # serialization

    def to_json(self) -> dict:
        return {
            "n": self.n_components,
            "terms": [
                {"alpha": list(p.alpha), "beta": list(p.beta), "coeff": c}
                for p, c in self.terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GaugePolynomial":
        try:
            n = int(data["n"])
            raw = data["terms"]
        except (KeyError, TypeError, ValueError) as e:
            raise PolynomialError(f"Failed to read polynomial table: {e}") from e
        terms: Dict[MultiIndexPair, float] = {}
        for i, entry in enumerate(raw):
            try:
                pair = MultiIndexPair(tuple(entry["alpha"]), tuple(entry["beta"]))
                coeff = float(entry["coeff"])
            except (KeyError, TypeError, ValueError) as e:
                raise PolynomialError(f"Failed to read term: {e}", pointer=f"/terms/{i}") from e
            if pair in terms and terms[pair] != coeff:
                raise PolynomialError(f"duplicate monomial {pair}", pointer=f"/terms/{i}")
            terms[pair] = coeff
        return cls(n, terms, symmetrize=True)

    # ------------------------------------------------------------------ #
    # evaluation

    def _check(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.ndim == 0 or z.shape[0] != self.n_components:
            raise ArgumentError(
                f"expected {self.n_components} components, got shape {z.shape}"
            )
        return z

    def evaluate(self, z: ComplexVector) -> np.ndarray:
        """g(z) for a point or a field; returns real values.

        Each realness pair contributes 2 Re(c z^alpha conj(z)^beta); self-conjugate
        monomials are built from the factors |z_j|^(2a), so any imaginary residue
        left is roundoff and must stay below 1e-12 (1 + |Re g|).
        """
        z = self._check(z)
        powers, conj_powers = _power_cache(z)
        shape = z.shape[1:]
        value = np.zeros(shape, dtype=float)
        residue = np.zeros(shape, dtype=float)
        for pair, coeff in self._coeffs.items():
            if pair.is_self_conjugate():
                term = np.ones(shape, dtype=complex)
                for j, a in enumerate(pair.alpha):
                    if a:
                        term = term * (powers[j][a] * conj_powers[j][a])
                value += coeff * term.real
                residue += coeff * term.imag
            else:
                term = _monomial(pair, powers, conj_powers, shape)
                value += 2.0 * coeff * term.real
        if np.any(np.abs(residue) > _IMAG_TOL * (1.0 + np.abs(value))):
            raise NumericalError(
                f"g has a non-vanishing imaginary part {np.max(np.abs(residue)):.3e}"
            )
        return value

    def nonlinearity(self, z: ComplexVector) -> np.ndarray:
        """F(z) with F_j = 1/2 dg/d conj(z_j); same shape as z"""
        z = self._check(z)
        powers, conj_powers = _power_cache(z)
        out = np.empty(z.shape, dtype=complex)
        for j, table in enumerate(self._f_tables):
            out[j] = table.evaluate(powers, conj_powers, z.shape[1:])
        return out

    def directional_derivative(self, z: ComplexVector, dz: ComplexVector) -> np.ndarray:
        """4 sum_j Re(F_j(z) conj(dz_j)), the derivative of g at z along dz"""
        z = self._check(z)
        dz = self._check(dz)
        if dz.shape != z.shape:
            raise ArgumentError(f"z and dz shapes differ: {z.shape} vs {dz.shape}")
        return 4.0 * np.sum(np.real(self.nonlinearity(z) * np.conj(dz)), axis=0)


@dataclass(frozen=True, order=True)
class _LoweredPair:
    # exponents of a derivative monomial (cubic, |alpha| = 2, |beta| = 1)
    alpha: Tuple[int, ...]
    beta: Tuple[int, ...]


def eval_g(g: GaugePolynomial, z: ComplexVector):
    value = g.evaluate(z)
    return float(value) if np.ndim(value) == 0 else value


def eval_F(g: GaugePolynomial, z: ComplexVector) -> np.ndarray:
    return g.nonlinearity(z)


def eval_grad_g_spatial_factor(g: GaugePolynomial, z: ComplexVector, dz: ComplexVector):
    value = g.directional_derivative(z, dz)
    return float(value) if np.ndim(value) == 0 else value
