"""
Dip-статистика Хартиганов и её p-значение по равномерному нулю.

Статистика - максимальное расстояние между эмпирической функцией
распределения и ближайшей унимодальной, через наибольшую выпуклую
миноранту и наименьшую вогнутую мажоранту (алгоритм AS 217 в версии
Мэхлера). Вычисления идут на списках Python: для n порядка тысяч это
заметно быстрее поэлементного доступа к numpy.
"""
import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from paradoxlens.core.errors import InsufficientDataError

logger = logging.getLogger(__name__)

MIN_POINTS = 10


def _convex_minorant_links(x: List[float]) -> List[int]:
    n = len(x)
    mn = [0] * n
    for j in range(1, n):
        mn[j] = j - 1
        while True:
            mnj = mn[j]
            mnmnj = mn[mnj]
            if mnj == 0 or (x[j] - x[mnj]) * (mnj - mnmnj) < (x[mnj] - x[mnmnj]) * (j - mnj):
                break
            mn[j] = mnmnj
    return mn


def _concave_majorant_links(x: List[float]) -> List[int]:
    n = len(x)
    mj = [0] * n
    mj[n - 1] = n - 1
    for k in range(n - 2, -1, -1):
        mj[k] = k + 1
        while True:
            mjk = mj[k]
            mjmjk = mj[mjk]
            if mjk == n - 1 or (x[k] - x[mjk]) * (mjk - mjmjk) < (x[mjk] - x[mjmjk]) * (k - mjk):
                break
            mj[k] = mjmjk
    return mj


def _dip_sorted(x: List[float]) -> float:
    """Dip для отсортированного списка (n >= 4, x[0] < x[-1])"""
    n = len(x)
    mn = _convex_minorant_links(x)
    mj = _concave_majorant_links(x)
    gcm = [0] * (n + 1)
    lcm = [0] * (n + 1)
    low, high = 0, n - 1
    dip = 0.0

    while True:
        gcm[0] = high
        i = 0
        while gcm[i] > low:
            gcm[i + 1] = mn[gcm[i]]
            i += 1
        ig = l_gcm = i
        ix = ig - 1

        lcm[0] = low
        i = 0
        while lcm[i] < high:
            lcm[i + 1] = mj[lcm[i]]
            i += 1
        ih = l_lcm = i
        iv = 1

        d = 0.0
        if l_gcm != 1 or l_lcm != 1:
            while True:
                gcmix = gcm[ix]
                lcmiv = lcm[iv]
                if gcmix > lcmiv:
                    gcmil = gcm[ix + 1]
                    dx = (lcmiv - gcmil + 1) - (x[lcmiv] - x[gcmil]) * (gcmix - gcmil) / (x[gcmix] - x[gcmil])
                    iv += 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv - 1
                else:
                    lcmivl = lcm[iv - 1]
                    dx = (x[gcmix] - x[lcmivl]) * (lcmiv - lcmivl) / (x[lcmiv] - x[lcmivl]) - (gcmix - lcmivl - 1)
                    ix -= 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv
                if ix < 0:
                    ix = 0
                if iv > l_lcm:
                    iv = l_lcm
                if gcm[ix] == lcm[iv]:
                    break
        if d < dip:
            break

        # Выпуклая миноранта
        dip_l = 0.0
        for j in range(ig, l_gcm):
            max_t = 1.0
            jb, je = gcm[j + 1], gcm[j]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                for jj in range(jb, je + 1):
                    t = (jj - jb + 1) - (x[jj] - x[jb]) * c
                    if t > max_t:
                        max_t = t
            if max_t > dip_l:
                dip_l = max_t

        # Вогнутая мажоранта
        dip_u = 0.0
        for j in range(ih, l_lcm):
            max_t = 1.0
            jb, je = lcm[j], lcm[j + 1]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                for jj in range(jb, je + 1):
                    t = (x[jj] - x[jb]) * c - (jj - jb - 1)
                    if t > max_t:
                        max_t = t
            if max_t > dip_u:
                dip_u = max_t

        dip = max(dip, dip_l, dip_u)
        if low == gcm[ig] and high == lcm[ih]:
            break
        low, high = gcm[ig], lcm[ih]

    return dip / (2 * n)


def dip_statistic(values: Sequence[float]) -> float:
    """
    Dip-статистика выборки, в [0, 1/4].

    Args:
        values: одномерная выборка
    """
    x = np.sort(np.asarray(values, dtype=np.float64))
    if x.size < 4 or x[0] == x[-1]:
        return 0.0
    return _dip_sorted(x.tolist())


@lru_cache(maxsize=64)
def uniform_null_dips(n: int, draws: int, seed: int) -> np.ndarray:
    """Отсортированные dip-значения равномерных выборок размера n"""
    logger.debug(f"Нулевое распределение dip: n={n}, выборок {draws}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    dips = np.array([_dip_sorted(np.sort(rng.random(n)).tolist()) for _ in range(draws)])
    dips.sort()
    dips.flags.writeable = False
    return dips


def unimodality_test(values: Sequence[float], draws: int, seed: int) -> Tuple[float, float]:
    """
    Dip-тест унимодальности.

    Args:
        values: выборка, n >= 10
        draws: число равномерных выборок для нулевого распределения
        seed: зерно нулевого распределения

    Returns:
        (dip, p), p = (1 + #{dip* >= dip}) / (draws + 1)

    Raises:
        InsufficientDataError: меньше 10 точек
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size < MIN_POINTS:
        raise InsufficientDataError(f"dip-тест требует не менее {MIN_POINTS} точек, получено {x.size}")
    if draws < 1:
        raise InsufficientDataError(f"число выборок Монте-Карло должно быть >= 1, получено {draws}")
    dip = dip_statistic(x)
    if dip == 0.0:
        return 0.0, 1.0
    null = uniform_null_dips(int(x.size), int(draws), int(seed))
    exceed = null.size - int(np.searchsorted(null, dip, side="left"))
    return dip, (1 + exceed) / (draws + 1)
