"""
Метод наименьших квадратов.

Основной путь - нормальные уравнения через разложение Холецкого на
центрированных и отмасштабированных столбцах. При плохой обусловленности
(или если Холецкий не прошёл) - QR с выбором ведущего столбца, который
также определяет коллинеарные члены.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from scipy import linalg

from paradoxlens.configs import config
from paradoxlens.core.errors import DataValidationError, DegreesOfFreedomError, SingularDesignError
from paradoxlens.core.models import Dataset

from .design import GROUP0, GROUP1, INTERCEPT, DesignSpec, design_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Результат МНК: коэффициенты, остатки и стандартная статистика"""

    spec: DesignSpec
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_statistics: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    residual_variance: float
    r_squared: float
    n: int
    dataset_fingerprint: str
    solver: str = "cholesky"

    @property
    def terms(self) -> Tuple[str, ...]:
        return self.spec.terms

    @property
    def df_resid(self) -> int:
        return self.n - len(self.terms)

    @property
    def sse(self) -> float:
        return float(self.residuals @ self.residuals)

    def coef(self, term: str) -> float:
        return float(self.coefficients[self.spec.index(term)])

    def se(self, term: str) -> float:
        return float(self.standard_errors[self.spec.index(term)])

    def t(self, term: str) -> float:
        return float(self.t_statistics[self.spec.index(term)])

    def to_dict(self) -> Dict[str, Any]:
        """{terms, coef, se, t, r2, resid_var, n}"""
        return {
            "terms": list(self.terms),
            "coef": [float(v) for v in self.coefficients],
            "se": [float(v) for v in self.standard_errors],
            "t": [float(v) for v in self.t_statistics],
            "r2": float(self.r_squared),
            "resid_var": float(self.residual_variance),
            "n": int(self.n),
        }


def _anchors(terms: Tuple[str, ...]) -> Tuple[str, ...]:
    """Члены, через которые выражается константа: свободный член или пара индикаторов групп"""
    if INTERCEPT in terms:
        return (INTERCEPT,)
    if GROUP0 in terms and GROUP1 in terms:
        return (GROUP0, GROUP1)
    return ()


def _scaling(X: np.ndarray, terms: Tuple[str, ...]) -> Tuple[np.ndarray, np.ndarray]:
    """Центры и масштабы столбцов; центрирование только если константа лежит в оболочке плана"""
    n, p = X.shape
    anchors = _anchors(terms)
    centers = np.zeros(p)
    if anchors:
        for j, term in enumerate(terms):
            if term not in anchors:
                centers[j] = X[:, j].mean()

    scales = np.sqrt(np.mean((X - centers) ** 2, axis=0))
    raw = np.sqrt(np.mean(X ** 2, axis=0))
    tol = config.analysis.rank_tolerance
    degenerate = [j for j in range(p) if raw[j] == 0.0 or scales[j] <= tol * raw[j]]
    if degenerate:
        named = [terms[j] for j in degenerate]
        if INTERCEPT in anchors and INTERCEPT not in named:
            named.append(INTERCEPT)
        raise SingularDesignError(named)
    return centers, scales


def _back_transform(terms: Tuple[str, ...], centers: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """Матрица T: beta = T @ theta, theta - коэффициенты на масштабированных столбцах"""
    p = len(terms)
    T = np.diag(1.0 / scales)
    anchors = _anchors(terms)
    for anchor in anchors:
        k = terms.index(anchor)
        for j, term in enumerate(terms):
            if term not in anchors:
                T[k, j] = -centers[j] / scales[j]
    return T


def _solve_cholesky(Xs: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    gram = Xs.T @ Xs
    factor = linalg.cho_factor(gram, lower=False, check_finite=False)
    theta = linalg.cho_solve(factor, Xs.T @ y, check_finite=False)
    gram_inv = linalg.cho_solve(factor, np.eye(gram.shape[0]), check_finite=False)
    return theta, gram_inv


def _solve_qr(Xs: np.ndarray, y: np.ndarray, terms: Tuple[str, ...]) -> Tuple[np.ndarray, np.ndarray]:
    p = Xs.shape[1]
    Q, R, perm = linalg.qr(Xs, mode="economic", pivoting=True)
    pivots = np.abs(np.diag(R))
    rank = int(np.count_nonzero(pivots > config.analysis.rank_tolerance * pivots[0]))
    if rank < p:
        raise SingularDesignError([terms[perm[i]] for i in range(rank, p)])

    theta = np.empty(p)
    theta[perm] = linalg.solve_triangular(R, Q.T @ y)
    R_inv = linalg.solve_triangular(R, np.eye(p))
    gram_inv = np.empty((p, p))
    gram_inv[np.ix_(perm, perm)] = R_inv @ R_inv.T
    return theta, gram_inv


def _fit_matrix(X: np.ndarray, y: np.ndarray, spec: DesignSpec, fingerprint: str) -> FitResult:
    n, p = X.shape
    if n < p:
        raise DegreesOfFreedomError(n, p)

    centers, scales = _scaling(X, spec.terms)
    Xs = (X - centers) / scales

    solver = "cholesky"
    with np.errstate(all="ignore"):
        condition = np.linalg.cond(Xs.T @ Xs)
    if not np.isfinite(condition) or condition > config.analysis.condition_limit:
        logger.debug(f"Обусловленность {condition:.3g} > порога, переходим на QR")
        solver = "qr"
    if solver == "cholesky":
        try:
            theta, gram_inv = _solve_cholesky(Xs, y)
        except linalg.LinAlgError:
            logger.debug("Разложение Холецкого не удалось, переходим на QR")
            solver = "qr"
    if solver == "qr":
        theta, gram_inv = _solve_qr(Xs, y, spec.terms)

    T = _back_transform(spec.terms, centers, scales)
    beta = T @ theta
    xtx_inv = T @ gram_inv @ T.T

    fitted = X @ beta
    residuals = y - fitted
    sse = float(residuals @ residuals)
    df = n - p

    if df > 0:
        residual_variance = sse / df
        standard_errors = np.sqrt(np.maximum(residual_variance * np.diag(xtx_inv), 0.0))
    else:
        # Точная интерполяция: дисперсия остатков не оценивается
        residual_variance = 0.0
        standard_errors = np.full(p, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_statistics = beta / standard_errors

    if spec.has_intercept_span:
        sst = float(np.sum((y - y.mean()) ** 2))
    else:
        sst = float(y @ y)
    r_squared = float(np.clip(1.0 - sse / sst, 0.0, 1.0)) if sst > 0 else 0.0

    for arr in (beta, standard_errors, t_statistics, residuals, fitted):
        arr.flags.writeable = False

    return FitResult(
        spec=spec,
        coefficients=beta,
        standard_errors=standard_errors,
        t_statistics=t_statistics,
        residuals=residuals,
        fitted=fitted,
        residual_variance=float(residual_variance),
        r_squared=r_squared,
        n=n,
        dataset_fingerprint=fingerprint,
        solver=solver,
    )


def fit(ds: Dataset, spec: DesignSpec) -> FitResult:
    """
    МНК-оценка модели spec на наборе ds.

    Raises:
        SingularDesignError: план неполного ранга (с именами членов)
        DegreesOfFreedomError: n меньше числа членов
    """
    if spec.response == "residual":
        raise DataValidationError("отклик 'residual' задаётся через fit_response")
    y = np.asarray(ds.variable(spec.response), dtype=np.float64)
    result = _fit_matrix(design_matrix(ds, spec.terms), y, spec, ds.fingerprint())
    logger.debug(f"МНК {spec.response} ~ {' + '.join(spec.terms)}: {result.to_dict()['coef']}")
    return result


def fit_response(ds: Dataset, terms: Tuple[str, ...], response: np.ndarray,
                 name: str = "residual") -> FitResult:
    """МНК для произвольного вектора отклика (например, остатков подмодели)"""
    y = np.asarray(response, dtype=np.float64)
    if y.shape != (ds.n,):
        raise DataValidationError(f"длина отклика {y.shape} не совпадает с n={ds.n}")
    spec = DesignSpec(response=name, terms=tuple(terms))
    return _fit_matrix(design_matrix(ds, spec.terms), y, spec, ds.fingerprint())


def predict(result: FitResult, ds: Dataset) -> np.ndarray:
    """Прогноз X @ beta для строк ds"""
    return design_matrix(ds, result.terms) @ result.coefficients
