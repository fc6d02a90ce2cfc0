"""Компилируемые циклы моделирования траекторий"""
import numba as nb
import numpy as np


@nb.njit(nogil=True, cache=True)
def ar_step(a, loading, x, epsilon, z, out):
    d = a.shape[0]
    k = loading.shape[1]
    for i in range(d):
        drift = 0.0
        for j in range(d):
            drift += a[i, j] * x[j]
        shock = 0.0
        for j in range(k):
            shock += loading[i, j] * z[j]
        out[i] = drift + epsilon * shock


@nb.njit(nogil=True, cache=True)
def ar_path(a, loading, x0, epsilon, noises):
    steps = noises.shape[0]
    points = np.empty((steps + 1, x0.shape[0]))
    points[0] = x0
    for t in range(steps):
        ar_step(a, loading, points[t], epsilon, noises[t], points[t + 1])
    return points


@nb.njit(nogil=True, cache=True)
def arn_next(b, history, t, epsilon, z):
    # history[t - 1], ..., history[t - n] weighted by b[0], ..., b[n - 1]
    drift = 0.0
    for i in range(b.shape[0]):
        drift += b[i] * history[t - 1 - i]
    return drift + epsilon * z


@nb.njit(nogil=True, cache=True)
def arn_path(b, starts, epsilon, noises):
    n = b.shape[0]
    values = np.empty(n + noises.shape[0])
    values[:n] = starts
    for s in range(noises.shape[0]):
        values[n + s] = arn_next(b, values, n + s, epsilon, noises[s])
    return values
