"""Independent reference values for the C++ tests, frozen into tests/data/frozen.json.

Run from the repository root:  python3 tests/oracles/freeze.py
"""
import json
import math

import mpmath as mp
import numpy as np
import scipy.optimize as so
import scipy.sparse as sp
import scipy.sparse.linalg as spl

mp.mp.dps = 40


def b2(k1, k2, m1, m2):
    """Isotropic three-material compliance bound with a void third phase."""
    k1, k2, m1, m2 = map(mp.mpf, (k1, k2, m1, m2))
    g = mp.sqrt(m2) - m2
    m11 = 2 * k1 * g / (k1 + k2)
    m12 = k1 * g / k2
    if m1 >= m11:
        return -k1 + 1 / (m1 / (2 * k1) + m2 / (k1 + k2)), 1
    if m1 >= m12 and m1 > 0:
        return k2 + 2 * k1 * (1 - mp.sqrt(m2)) ** 2 / m1, 2
    return -k2 + 1 / (m1 / (2 * k1) + m2 / (2 * k2)), 3


def hs(kappa, m):
    k1 = mp.mpf(kappa[0])
    s = sum(mp.mpf(mi) / (mp.mpf(ki) + k1) for ki, mi in zip(kappa, m) if ki != math.inf)
    return -k1 + 1 / s


def wiener(kappa, m):
    return 1 / sum(mp.mpf(mi) / mp.mpf(ki) for ki, mi in zip(kappa, m) if ki != math.inf)


def envelope_brute(s, k1, k2, g):
    """min over the simplex of 1/2 b2(m) s^2 + m1 + g m2, by dense scan plus local polish."""
    if s == 0.0:
        return 0.0, (0.0, 0.0)

    def f(x):
        m1, m2 = x
        if m1 < 0 or m2 < 0 or m1 + m2 > 1 + 1e-15 or (m1 == 0 and m2 == 0):
            return math.inf
        return float(0.5 * b2(k1, k2, m1, m2)[0] * s * s + m1 + g * m2)

    n = 200
    best = []
    for i in range(n + 1):
        for j in range(n + 1 - i):
            m1, m2 = i / n, j / n
            if m1 == 0 and m2 == 0:
                continue
            best.append((f((m1, m2)), m1, m2))
    best.sort()
    cands = []
    for v, m1, m2 in best[:6]:
        r = so.minimize(f, [m1, m2], method="Nelder-Mead",
                        options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 20000})
        cands.append((r.fun, tuple(r.x)))
        # edges of the simplex
    for edge in ("m2=0", "m1=0", "sum=1"):
        def h(t, edge=edge):
            x = {"m2=0": (t, 0.0), "m1=0": (0.0, t), "sum=1": (t, 1.0 - t)}[edge]
            return f(x)
        r = so.minimize_scalar(h, bounds=(1e-12, 1.0), method="bounded", options={"xatol": 1e-14})
        x = {"m2=0": (r.x, 0.0), "m1=0": (0.0, r.x), "sum=1": (r.x, 1.0 - r.x)}[edge]
        cands.append((r.fun, x))
        cands.append((h(1.0), {"m2=0": (1.0, 0.0), "m1=0": (0.0, 1.0), "sum=1": (1.0, 0.0)}[edge]))
    v, x = min(cands, key=lambda c: c[0])
    return v, x


def cantilever_uniform(nx, ny, height, kappa, force, floor):
    """Q4 plane problem, left edge clamped, downward force at the right mid-edge; returns f.u."""
    h = height / ny
    c = 1.0 / kappa + floor  # Mandel stiffness c*I
    D = np.diag([c, c, 0.5 * c])  # Voigt
    g = 1 / math.sqrt(3)
    ke = np.zeros((8, 8))
    sx = [-1, 1, 1, -1]
    sy = [-1, -1, 1, 1]
    for xi, eta in [(-g, -g), (g, -g), (g, g), (-g, g)]:
        B = np.zeros((3, 8))
        for a in range(4):
            dx = 0.25 * sx[a] * (1 + sy[a] * eta) * 2 / h
            dy = 0.25 * sy[a] * (1 + sx[a] * xi) * 2 / h
            B[0, 2 * a] = dx
            B[1, 2 * a + 1] = dy
            B[2, 2 * a] = dy
            B[2, 2 * a + 1] = dx
        ke += B.T @ D @ B * (h * h / 4)
    node = lambda i, j: j * (nx + 1) + i
    ndof = 2 * (nx + 1) * (ny + 1)
    rows, cols, vals = [], [], []
    for j in range(ny):
        for i in range(nx):
            ns = [node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)]
            dofs = [d for n in ns for d in (2 * n, 2 * n + 1)]
            for a in range(8):
                for b in range(8):
                    rows.append(dofs[a]); cols.append(dofs[b]); vals.append(ke[a, b])
    K = sp.csr_matrix((vals, (rows, cols)), shape=(ndof, ndof))
    f = np.zeros(ndof)
    f[2 * node(nx, ny // 2) + 1] = -force
    free = np.array([d for j in range(ny + 1) for i in range(1, nx + 1) for d in (2 * node(i, j), 2 * node(i, j) + 1)])
    u = np.zeros(ndof)
    u[free] = spl.spsolve(K[free][:, free].tocsc(), f[free])
    return float(f @ u)


def main():
    out = {}
    # bounds
    out["bound_k12inf_m005_03"] = {
        "b2": float(b2(1, 2, 0.05, 0.3)[0]), "branch": b2(1, 2, 0.05, 0.3)[1],
        "hs": float(hs([1, 2, math.inf], [0.05, 0.3, 0.65])),
        "wiener": float(wiener([1, 2, math.inf], [0.05, 0.3, 0.65])),
    }
    pts = []
    for m1, m2 in [(0.6, 0.2), (0.3, 0.5), (0.14, 0.2), (0.1, 0.25), (0.05, 0.3), (0.02, 0.5), (0.5, 0.5)]:
        v, br = b2(1, 2, m1, m2)
        pts.append({"m1": m1, "m2": m2, "value": float(v), "branch": br})
    out["b2_points"] = pts
    out["hs_paradox"] = [
        {"k1": k1, "value": float(hs([k1, 2, math.inf], [0.0, 0.3, 0.7]))} for k1 in (0.5, 1.0)
    ]
    # envelope by brute force
    env = []
    for k1, k2, g in [(1, 2, 0.6), (1, 5, 0.25), (0.5, 3, 0.2), (2, 3, 0.75)]:
        ga, gb = k1 / k2, 2 * k1 / (k1 + k2)
        assert ga < g < gb
        r1 = g / math.sqrt(k1)
        r3 = math.sqrt((1 - g) * (k1 + k2) / (k1 * (k2 - k1)))
        for frac in (0.2, 0.6, 0.95, 1.05, 1.3, 1.6, 2.0):
            s = frac * r1 if frac < 1 else r1 + (frac - 1.0) * (r3 - r1)
            v, x = envelope_brute(s, k1, k2, g)
            env.append({"k1": k1, "k2": k2, "gamma": g, "s": s, "value": v, "m1": x[0], "m2": x[1]})
    out["envelope"] = env
    # laminate closed forms: kappa (1, 3), f = 0.5
    ka, kb, f = 1.0, 3.0, 0.5
    # normal stress and shear are continuous across layers; tangential strain is continuous
    out["layered_13"] = {"nn": f * ka + (1 - f) * kb, "nt": f * ka + (1 - f) * kb,
                         "tt": 1 / (f / ka + (1 - f) / kb)}
    # cantilever baselines on a small grid
    base = {}
    for nx, ny in [(40, 20)]:
        for name, kappa in [("kappa1", 1.0), ("kappa2", 2.0), ("half", float(hs([1, 2], [0.5, 0.5])))]:
            base[name] = cantilever_uniform(nx, ny, 4.0, kappa, 1.0, 1e-6)
    out["cantilever_40x20_compliance"] = base
    with open("tests/data/frozen.json", "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
