"""Циклы до первого выхода; отпускают GIL, чтобы траектории шли в потоках"""
import numba as nb
import numpy as np

from exitrates.kernels import ar_step


@nb.njit(nogil=True, cache=True)
def ar_exit_time(rng, a, loading, x0, c, epsilon, one_sided, max_steps,
                 block):
    d = a.shape[0]
    k = loading.shape[1]
    x = np.empty(d)
    x[:] = x0
    y = np.empty(d)
    done = 0
    while done < max_steps:
        m = min(block, max_steps - done)
        draws = rng.standard_normal(m * k)
        for s in range(m):
            ar_step(a, loading, x, epsilon, draws[s * k:(s + 1) * k], y)
            x, y = y, x
            level = 0.0
            for i in range(d):
                level += c[i] * x[i]
            if level >= 1.0 or (not one_sided and level <= -1.0):
                return done + s + 1
        done += m
    return -1


@nb.njit(nogil=True, cache=True)
def arn_exit_time(rng, b, starts, scale, epsilon, one_sided, max_steps,
                  block):
    n = b.shape[0]
    # window[i] = x_{t−1−i}
    window = np.empty(n)
    for i in range(n):
        window[i] = starts[n - 1 - i]
    done = 0
    while done < max_steps:
        m = min(block, max_steps - done)
        draws = rng.standard_normal(m)
        for s in range(m):
            drift = 0.0
            for i in range(n):
                drift += b[i] * window[i]
            value = drift + epsilon * draws[s]
            for i in range(n - 1, 0, -1):
                window[i] = window[i - 1]
            window[0] = value
            level = scale * value
            if level >= 1.0 or (not one_sided and level <= -1.0):
                return done + s + 1
        done += m
    return -1


@nb.njit(nogil=True, cache=True)
def normal_moments(rng, size, block):
    total = 0.0
    squares = 0.0
    done = 0
    while done < size:
        m = min(block, size - done)
        draws = rng.standard_normal(m)
        for s in range(m):
            total += draws[s]
            squares += draws[s] * draws[s]
        done += m
    mean = total / size
    return mean, squares / size - mean * mean
