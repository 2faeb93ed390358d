#!/usr/bin/env python3
"""Independent reference computations used to freeze expected values in the C++ tests.

Run:  python3 tests/oracles/oracles.py
Nothing here imports or calls the C++ library.
"""
import math
from fractions import Fraction

import numpy as np
import sympy as sp


def char_poly_sympy(rows):
    x = sp.symbols("x")
    m = sp.Matrix(rows)
    return sp.Poly((x * sp.eye(m.shape[0]) - m).det(), x).all_coeffs()


def unit_roots(rows):
    ev = np.linalg.eigvals(np.array(rows, dtype=float))
    mods = np.abs(ev)
    return (int((mods > 1 + 1e-9).sum()), int((abs(mods - 1) <= 1e-9).sum()), int((mods < 1 - 1e-9).sum()), max(mods))


def covariances(rows, coeffs, nmax):
    """Brute force Cov_n = sum_m c_{S^T^n m} conj(c_m) with exact integer orbits."""
    st = np.array(rows, dtype=object).T
    out = []
    for n in range(nmax + 1):
        total = 0
        for m, cm in coeffs.items():
            v = np.array(m, dtype=object)
            for _ in range(n):
                v = st.dot(v)
            total += coeffs.get(tuple(int(t) for t in v), 0) * np.conj(cm)
        out.append(total)
    return out


def leonov_tail(alpha, q, b, radius):
    s = 0.0
    for k in range(radius, b - 1, -1):
        s += 2 * ((1 + k) ** -0.75 * math.log(2 + k) ** -alpha) ** q
    return s


def leonov_remainder(alpha, q, n):
    a = 0.75 * q
    g = alpha * q
    cands = []
    if a > 1:
        cands.append(math.log(2 + n) ** -g * (1 + n) ** (1 - a) / (a - 1))
    if a >= 1 - 1e-12 and g > 1 and n >= 1:
        cands.append(math.log(1 + n) ** (1 - g) / (g - 1))
    return 2 * min(cands) if cands else math.inf


def fit(xs, ys):
    A = np.vstack([xs, np.ones_like(xs)]).T
    sol, *_ = np.linalg.lstsq(A, ys, rcond=None)
    res = ys - A.dot(sol)
    return sol[0], res


if __name__ == "__main__":
    cat = [[2, 1], [1, 1]]
    paper = [[0, 0, 0, -1], [1, 0, 0, 2], [0, 1, 0, 0], [0, 0, 1, 2]]
    print("charpoly cat", char_poly_sympy(cat))
    print("charpoly paper", char_poly_sympy(paper))
    print("dims cat", unit_roots(cat))
    print("dims paper", unit_roots(paper))
    x = sp.symbols("x")
    for n in range(1, 33):
        if sp.totient(n) <= 4:
            print(n, sp.resultant(x**4 - 2 * x**3 - 2 * x + 1, sp.cyclotomic_poly(n, x), x))

    print("cov cat cosine", covariances(cat, {(1, 0): 1, (-1, 0): 1}, 3))
    print("cov coboundary", covariances(cat, {(1, 0): -1, (-1, 0): -1, (2, 1): 1, (-2, -1): 1}, 4))
    print("cov paper cosine", covariances(paper, {(1, 0, 0, 0): 1, (-1, 0, 0, 0): 1}, 8))
    # two-frequency observable on the paper matrix: e1 and S^T e1 image.
    st = np.array(paper, dtype=object).T
    img = tuple(int(t) for t in st.dot(np.array([1, 0, 0, 0], dtype=object)))
    coeffs = {(1, 0, 0, 0): 1, (-1, 0, 0, 0): 1, img: 0.5, tuple(-t for t in img): 0.5}
    cv = covariances(paper, coeffs, 6)
    print("paper two-freq image", img, cv, "sigma2", cv[0] + 2 * sum(cv[1:]))

    # Leonov class, d=1, alpha=2, p=4
    q = 4 / 3
    radius = 1 << 16
    grid = [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
    tails = [leonov_tail(2, q, b, radius) + leonov_remainder(2, q, radius) for b in grid]
    slope, res = fit(np.log(np.log(grid)), np.log(tails))
    print("leonov tails", tails)
    print("leonov theta_hat", -slope, "max|res|", max(abs(res)))
    for theta in (1.2, 1.25, 7 / 6 + 0.1):
        print("min R at theta", theta, max(t * math.log(b) ** theta for t, b in zip(tails, grid)))
    # long brute force compare: upper bound must dominate.
    big = 1 << 21
    for b in (16, 4096):
        bf = leonov_tail(2, q, b, big) + leonov_remainder(2, q, big)
        print("b", b, "brute", bf)

    # product decay delta=2, q=2
    tails = []
    for b in grid:
        s = sum(2 * (1 + k) ** -4.0 for k in range(radius, b - 1, -1)) + 2 * (1 + radius) ** -3 / 3
        tails.append(s)
    slope, res = fit(np.log(np.log(grid)), np.log(tails))
    print("product delta2 theta_hat", -slope, "max|res|", max(abs(res)))
    ys = np.log(tails)
    print("R2", 1 - (res**2).sum() / ((ys - ys.mean()) ** 2).sum())
