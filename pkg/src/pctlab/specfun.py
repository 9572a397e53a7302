"""Polynomial special-function kernels for the closed-form wavefunctions.

Everything here is a finite sum or a polynomial recurrence: the bound
states only ever need terminating series, so no asymptotics or
transformation machinery is involved.  Sums run in ascending order with
compensated accumulation to limit cancellation for arguments up to ~50.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def _check_n(n: int) -> None:
    if n < 0 or int(n) != n:
        raise ValidationError(f"polynomial degree must be a non-negative integer, got {n}")


def laguerre(n: int, a: float, x):
    """Generalized Laguerre polynomial L_n^a(x).

    Evaluated with the stable three-term recurrence
    L_k = ((2k - 1 + a - x) L_{k-1} - (k - 1 + a) L_{k-2}) / k.
    """
    _check_n(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + a - x
    for k in range(2, n + 1):
        prev, cur = cur, ((2.0 * k - 1.0 + a - x) * cur - (k - 1.0 + a) * prev) / k
    return cur


def kummer_terminating(n: int, b: float, x):
    """Terminating confluent hypergeometric sum 1F1(-n; b; x).

    The series has n + 1 terms; b may not hit a non-positive integer
    before the series terminates.
    """
    _check_n(n)
    for k in range(n):
        if b + k == 0.0:
            raise ValidationError(f"1F1 pole: b + {k} = 0 before termination (b={b})")
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    total = np.ones_like(x)
    comp = np.zeros_like(x)
    for k in range(n):
        term = term * ((-n + k) / (b + k)) * x / (k + 1.0)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def gauss2f1_terminating(n: int, b: float, c: float, x):
    """Terminating Gauss hypergeometric sum 2F1(-n, b; c; x)."""
    _check_n(n)
    for k in range(n):
        if c + k == 0.0:
            raise ValidationError(f"2F1 pole: c + {k} = 0 before termination (c={c})")
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    total = np.ones_like(x)
    comp = np.zeros_like(x)
    for k in range(n):
        term = term * ((-n + k) * (b + k) / ((c + k) * (k + 1.0))) * x
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def binomial_real(a: float, k: int) -> float:
    """Generalized binomial coefficient a (a-1) ... (a-k+1) / k!."""
    if k < 0 or int(k) != k:
        raise ValidationError(f"binomial lower index must be a non-negative integer, got {k}")
    out = 1.0
    for i in range(k):
        out *= (a - i) / (i + 1.0)
    return out


def hulthen_sum(n_r: int, beta_n: float, t):
    """Finite expansion used by the Hulthen bound states.

    sum_{v=1}^{n_r} (-1)^(v-1) C(n_r-1, v-1) C(n_r+beta_n+v-2, v) t^v,
    with generalized binomials in the second factor.
    """
    if n_r < 1:
        raise ValidationError(f"the Hulthen sum starts at state index 1, got n_r={n_r}")
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    for v in range(1, n_r + 1):
        coeff = (
            (-1.0) ** (v - 1)
            * binomial_real(float(n_r - 1), v - 1)
            * binomial_real(n_r + beta_n + v - 2.0, v)
        )
        total = total + coeff * t**v
    return total
