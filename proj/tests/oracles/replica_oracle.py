"""Brute-force reference values for the replica saddle point and the scalar prox.

Everything here avoids closed forms: the scalar problem is minimized by
vectorized golden-section search, expectations over z use a dense trapezoid
rule, and chi uses Stein's identity E[x* z] / sqrt(chi_hat).  The printed
numbers are frozen into the C++ unit tests.
"""
import sys

import numpy as np


def penalty(x, fam, lam, a):
    ax = np.abs(x)
    if fam == "l1":
        return lam * ax
    if fam == "scad":
        mid = (2 * a * lam * ax - ax**2 - lam**2) / (2 * (a - 1))
        return np.where(ax <= lam, lam * ax, np.where(ax <= a * lam, mid, (a + 1) * lam**2 / 2))
    if fam == "mcp":
        return np.where(ax <= a * lam, lam * ax - ax**2 / (2 * a), a * lam**2 / 2)
    raise ValueError(fam)


def scalar_argmin(h, qhat, fam, lam, a, iters=200):
    """argmin_x qhat x^2 / 2 - h x + J(x), vectorized over h."""
    h = np.asarray(h, dtype=float)
    lo = np.minimum(0.0, h / qhat) - 1e-12
    hi = np.maximum(0.0, h / qhat) + 1e-12
    f = lambda x: 0.5 * qhat * x**2 - h * x + penalty(x, fam, lam, a)
    g = (np.sqrt(5) - 1) / 2
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        c_new = hi - g * (hi - lo)
        d_new = lo + g * (hi - lo)
        c, d = c_new, d_new
        fc, fd = f(c), f(d)
    x = 0.5 * (lo + hi)
    return np.where(f(x) <= f(np.zeros_like(x)), x, 0.0)


def replica(fam, lam, a, alpha, sigma2=1.0, damping=0.5, tol=1e-11, max_iter=20000):
    z = np.linspace(-12.0, 12.0, 240001)
    w = np.exp(-0.5 * z**2) / np.sqrt(2 * np.pi)
    dz = z[1] - z[0]
    integ = lambda f: np.sum((f[1:] * w[1:] + f[:-1] * w[:-1]) * 0.5) * dz
    Q, chi = 0.0, 0.0
    for it in range(max_iter):
        qhat = 1.0 / (1.0 + chi)
        chat = (Q + sigma2) * qhat**2
        x = scalar_argmin(np.sqrt(chat) * z, qhat, fam, lam, a)
        Q_new = integ(x**2) / alpha
        chi_new = integ(x * z) / (alpha * np.sqrt(chat))
        res = max(abs(Q_new - Q), abs(chi_new - chi))
        Q = (1 - damping) * Q_new + damping * Q
        chi = (1 - damping) * chi_new + damping * chi
        if res < tol:
            break
    qhat = 1.0 / (1.0 + chi)
    chat = (Q + sigma2) * qhat**2
    nonzero = integ((np.abs(scalar_argmin(np.sqrt(chat) * z, qhat, fam, lam, a)) > 0).astype(float))
    return dict(Q=Q, chi=chi, df=chi / (1 + chi), rho_over_alpha=nonzero / alpha, iters=it)


if __name__ == "__main__":
    cases = [("l1", 1.0), ("scad", 1.5), ("scad", 2.0), ("mcp", 1.5), ("mcp", 2.0)]
    if len(sys.argv) == 3:
        cases = [(sys.argv[1], float(sys.argv[2]))]
    for w_, s2, fam, lam, a in [(2, 1, "l1", 1, 3.7), (3, 1, "scad", 1, 3.7), (2, 1, "mcp", 1, 3),
                                (5, 1, "mcp", 1, 3), (1.7, 1.5, "scad", 0.8, 3.7), (-2.2, 0.7, "mcp", 1.1, 2.5)]:
        # prox(w, sigma2) minimizes (theta - w)^2 / (2 sigma2) + J(theta): qhat = 1/sigma2, field = w/sigma2
        print(f"prox {fam} w={w_} s2={s2} lam={lam} a={a}: {scalar_argmin(np.array([w_ / s2]), 1 / s2, fam, lam, a)[0]:.12f}")
    for fam, lam in cases:
        r = replica(fam, lam, 3.7, 0.5)
        print(f"replica {fam} lam={lam}: " + " ".join(f"{k}={v:.10f}" if isinstance(v, float) else f"{k}={v}" for k, v in r.items()))
        sys.stdout.flush()
