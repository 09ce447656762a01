"""Compiled inner loop of the away-step conditional gradient solver.

Utilities are passed as integer kind codes plus a ``beta`` parameter, see
``utility.LINEAR`` and friends; the formulas here must stay in sync with
``utility.G``.
"""

import math

import numpy as np
from numba import njit

_LINEAR, _LOG, _POWER, _SQRT = 0, 1, 2, 3
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)
LS_WIDTH = 1e-12

STATUS_CONVERGED, STATUS_MAX_ITER, STATUS_STALLED = 0, 1, 2


@njit(cache=True)
def _g(kind, beta, s):
    if kind == _LINEAR:
        return s
    if kind == _SQRT:
        return math.sqrt(s)
    if s <= 0.0:
        if kind == _LOG or beta > 1.0:
            return -math.inf
        return 0.0
    if kind == _LOG:
        return math.log(s)
    return s ** (1.0 - beta) / (1.0 - beta)


@njit(cache=True)
def _dg(kind, beta, s):
    if kind == _LINEAR:
        return 1.0
    if s <= 0.0:
        return math.inf
    if kind == _LOG:
        return 1.0 / s
    if kind == _SQRT:
        return 0.5 / math.sqrt(s)
    return s ** (-beta)


@njit(cache=True)
def _obj(x, w, kinds, betas):
    total = 0.0
    for j in range(x.shape[0]):
        if w[j] > 0.0:
            total += w[j] * _g(kinds[j], betas[j], x[j])
    return total


@njit(cache=True)
def _obj_along(x, d, gamma, w, kinds, betas):
    total = 0.0
    for j in range(x.shape[0]):
        if w[j] > 0.0:
            s = x[j] + gamma * d[j]
            if s < 0.0:
                s = 0.0
            total += w[j] * _g(kinds[j], betas[j], s)
    return total


@njit(cache=True)
def _line_search(x, d, gmax, w, kinds, betas):
    """Maximize the concave restriction on [0, gmax]; endpoints are preferred on ties."""
    a, b = 0.0, gmax
    c = b - _GOLDEN * (b - a)
    e = a + _GOLDEN * (b - a)
    fc = _obj_along(x, d, c, w, kinds, betas)
    fe = _obj_along(x, d, e, w, kinds, betas)
    while b - a > LS_WIDTH:
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _GOLDEN * (b - a)
            fc = _obj_along(x, d, c, w, kinds, betas)
        else:
            a, c, fc = c, e, fe
            e = a + _GOLDEN * (b - a)
            fe = _obj_along(x, d, e, w, kinds, betas)
    gamma = 0.5 * (a + b)
    best = _obj_along(x, d, gamma, w, kinds, betas)
    f_end = _obj_along(x, d, gmax, w, kinds, betas)
    if f_end >= best:
        return gmax, f_end
    f0 = _obj_along(x, d, 0.0, w, kinds, betas)
    if f0 >= best:
        return 0.0, f0
    return gamma, best


@njit(cache=True)
def away_step_fw(V, lam, w, kinds, betas, tol, max_iter, history):
    """Run away-step conditional gradient in place on convex weights ``lam``.

    ``V`` is (m, n) float, ``lam`` (m,) the starting convex weights. Ties in
    both oracles resolve to the lowest vertex index. ``history`` receives the
    objective after every iteration (length >= max_iter + 1).
    Returns (status, iterations, gap, objective).
    """
    m, n = V.shape
    x = V.T @ lam
    f = _obj(x, w, kinds, betas)
    history[0] = f
    grad = np.zeros(n)
    gap = math.inf
    it = 0
    status = STATUS_MAX_ITER
    while True:
        for j in range(n):
            grad[j] = w[j] * _dg(kinds[j], betas[j], x[j]) if w[j] > 0.0 else 0.0
        scores = V @ grad
        gx = 0.0
        for j in range(n):
            gx += grad[j] * x[j]
        fw = 0
        for i in range(1, m):
            if scores[i] > scores[fw]:
                fw = i
        aw = -1
        for i in range(m):
            if lam[i] > 0.0 and (aw < 0 or scores[i] < scores[aw]):
                aw = i
        gap = scores[fw] - gx
        if not math.isfinite(gap):
            status = STATUS_STALLED
            break
        if gap <= tol * (1.0 + abs(f)):
            status = STATUS_CONVERGED
            break
        if it >= max_iter:
            status = STATUS_MAX_ITER
            break
        away_gap = gx - scores[aw]
        d = np.empty(n)
        if gap >= away_gap or lam[aw] >= 1.0:
            for j in range(n):
                d[j] = V[fw, j] - x[j]
            gmax = 1.0
            gamma, f_new = _line_search(x, d, gmax, w, kinds, betas)
            if gamma <= 0.0 or f_new < f:
                status = STATUS_STALLED
                break
            for i in range(m):
                lam[i] *= 1.0 - gamma
            if gamma == gmax:
                for i in range(m):
                    lam[i] = 0.0
            lam[fw] += gamma
        else:
            for j in range(n):
                d[j] = x[j] - V[aw, j]
            gmax = lam[aw] / (1.0 - lam[aw])
            gamma, f_new = _line_search(x, d, gmax, w, kinds, betas)
            if gamma <= 0.0 or f_new < f:
                status = STATUS_STALLED
                break
            for i in range(m):
                lam[i] *= 1.0 + gamma
            if gamma == gmax:
                lam[aw] = 0.0
            else:
                lam[aw] -= gamma
        total = 0.0
        for i in range(m):
            if lam[i] < 0.0:
                lam[i] = 0.0
            total += lam[i]
        for i in range(m):
            lam[i] /= total
        x = V.T @ lam
        f = _obj(x, w, kinds, betas)
        it += 1
        history[it] = f
    return status, it, gap, f
