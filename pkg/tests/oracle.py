"""Independent reference computations in plain fractions.

Nothing here imports the package: vertices come from iterating the affine
map and its hand-inverted form, and cylinder moduli from the height over
circumference formulas rather than from polygon areas.
"""
from fractions import Fraction as F


def T(c, p):
    x, y = p
    return (c * x + (c - 1) * y + 1, (c + 1) * x + c * y + 1)


def T_inv(c, p):
    # T has linear part [[c, c-1], [c+1, c]] with determinant 1
    x, y = p[0] - 1, p[1] - 1
    return (c * x - (c - 1) * y, -(c + 1) * x + c * y)


def vertices(c, k_max):
    """{k: P_k} for |k| <= k_max."""
    c = F(c)
    out = {0: (F(0), F(0))}
    p = q = out[0]
    for k in range(1, k_max + 1):
        p = T(c, p)
        q = T_inv(c, q)
        out[k], out[-k] = p, q
    return out


def horizontal_modulus(c, n):
    P = vertices(c, n)
    circumference = 2 * P[n - 1][0] + 2 * P[n][0]
    height = P[n][1] - P[n - 1][1]
    return height / circumference


def slope_one_modulus(c, n):
    # both lengths carry a factor sqrt(2) which cancels in the ratio
    P = vertices(c, n + 1)
    circumference = P[n][0] - P[1 - n][0] + P[n + 1][0] - P[-n][0]
    dx, dy = P[n + 1][0] - P[n][0], P[n + 1][1] - P[n][1]
    height = F(1, 2) * (-dx + dy)
    return height / circumference


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def generators(c):
    c = F(c)
    return {
        "A": [[-1, 0], [0, 1]],
        "B": [[-1, 2], [0, 1]],
        "C": [[-c, c - 1], [-c - 1, c]],
        "N": [[-1, 0], [0, -1]],
    }


def wedge(u, v):
    return u[0] * v[1] - u[1] * v[0]
