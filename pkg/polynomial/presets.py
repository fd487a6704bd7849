# polynomial/presets.py
import json
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Tuple

from errors import PolynomialError, ValidationError
from .gauge_polynomial import GaugePolynomial, MultiIndexPair


def _unit(n: int, *indices: int) -> Tuple[int, ...]:
    e = [0] * n
    for i in indices:
        e[i] += 1
    return tuple(e)


def _add(terms: Dict[MultiIndexPair, float], pair: MultiIndexPair, coeff: float):
    terms[pair] = terms.get(pair, 0.0) + coeff


def _add_density_product(terms, n, i, j, coeff):
    """coeff * |z_i|^2 |z_j|^2"""
    e = _unit(n, i, j)
    _add(terms, MultiIndexPair(e, e), coeff)


def manakov(n: int = 2) -> GaugePolynomial:
    """g = (sum_j |z_j|^2)^2, the vector NLS nonlinearity F_j = z_j sum_k |z_k|^2"""
    if int(n) < 1:
        raise ValidationError(f"manakov preset needs n >= 1, got {n}")
    n = int(n)
    terms: Dict[MultiIndexPair, float] = {}
    for i in range(n):
        for j in range(n):
            _add_density_product(terms, n, i, j, 1.0)
    return GaugePolynomial(n, terms)


def spinor(a: float = 1.0, b: float = 0.0) -> GaugePolynomial:
    """Spin-1 condensate nonlinearity on C^3.

    g = a (|z1|^2+|z2|^2+|z3|^2)^2
        + b ((|z1|^2-|z3|^2)^2 + 2|z2|^2(|z1|^2+|z3|^2) + 4 Re(conj(z1) z2^2 conj(z3)))
    """
    n = 3
    terms: Dict[MultiIndexPair, float] = {}
    for pair, coeff in manakov(3).terms.items():
        _add(terms, pair, a * coeff)

    _add_density_product(terms, n, 0, 0, b)
    _add_density_product(terms, n, 2, 2, b)
    _add_density_product(terms, n, 0, 2, -2.0 * b)
    _add_density_product(terms, n, 1, 0, 2.0 * b)
    _add_density_product(terms, n, 1, 2, 2.0 * b)
    # 4 Re(w) = 2 w + 2 conj(w), w = z2^2 conj(z1) conj(z3)
    _add(terms, MultiIndexPair(_unit(n, 1, 1), _unit(n, 0, 2)), 2.0 * b)
    _add(terms, MultiIndexPair(_unit(n, 0, 2), _unit(n, 1, 1)), 2.0 * b)
    return GaugePolynomial(n, terms)


def _manakov_from_params(params: Mapping[str, Any]) -> GaugePolynomial:
    return manakov(int(params.get("n", 2)))


def _spinor_from_params(params: Mapping[str, Any]) -> GaugePolynomial:
    if "n" in params and int(params["n"]) != 3:
        raise ValidationError(f"spinor preset is defined for n = 3 only, got n = {params['n']}", pointer="/n")
    return spinor(float(params.get("a", 1.0)), float(params.get("b", 0.0)))


PRESETS: Dict[str, Callable[[Mapping[str, Any]], GaugePolynomial]] = {
    "manakov": _manakov_from_params,
    "spinor": _spinor_from_params,
}

PRESET_PARAMS = {
    "manakov": {"n"},
    "spinor": {"n", "a", "b"},
}


def get_preset(name: str, **params) -> GaugePolynomial:
    """Build a named preset polynomial"""
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}", pointer="/preset")
    unknown = set(params) - PRESET_PARAMS[name]
    if unknown:
        raise ValidationError(f"unknown parameters for {name}: {sorted(unknown)}")
    return PRESETS[name](params)


def load_polynomial_file(path) -> GaugePolynomial:
    """Load a polynomial table from a JSON file"""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise PolynomialError(f"Failed to load polynomial file '{path}': {e}") from e
    return GaugePolynomial.from_json(data)
