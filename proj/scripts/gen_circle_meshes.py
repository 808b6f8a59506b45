#!/usr/bin/env python3
"""Quasi-uniform triangulations of the disk of radius pi (DistMesh iteration).

Writes data/meshes/circle_<M>.msh in the solver's text format:
"nv ne", nv lines "x y", ne lines "i0 i1 i2" (0-based, CCW).
"""

import argparse
import pathlib

import numpy as np
from scipy.spatial import Delaunay

RADIUS = np.pi


def distmesh_disk(h, radius=RADIUS, iters=400, seed=0):
    rng = np.random.default_rng(seed)
    nb = max(6, int(round(2 * np.pi * radius / h)))
    ang = 2 * np.pi * np.arange(nb) / nb
    fixed = radius * np.column_stack([np.cos(ang), np.sin(ang)])

    # Hexagonal lattice start, rejected outside the disk.
    xs = np.arange(-radius, radius + h, h)
    ys = np.arange(-radius, radius + h, h * np.sqrt(3) / 2)
    gx, gy = np.meshgrid(xs, ys)
    gx[1::2, :] += h / 2
    p = np.column_stack([gx.ravel(), gy.ravel()])
    p = p[np.hypot(p[:, 0], p[:, 1]) < radius - 0.5 * h]
    p += 1e-3 * h * rng.standard_normal(p.shape)
    nf = len(fixed)
    p = np.vstack([fixed, p])

    dt = 0.2
    for _ in range(iters):
        tri = Delaunay(p).simplices
        c = p[tri].mean(axis=1)
        tri = tri[np.hypot(c[:, 0], c[:, 1]) < radius - 1e-3 * h]
        bars = np.vstack([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [0, 2]]])
        bars = np.unique(np.sort(bars, axis=1), axis=0)
        vec = p[bars[:, 0]] - p[bars[:, 1]]
        length = np.hypot(vec[:, 0], vec[:, 1])
        l0 = 1.2 * h * np.sqrt((length**2).sum() / (len(bars) * h * h))
        f = np.maximum(l0 - length, 0.0)
        fv = (f / length)[:, None] * vec
        force = np.zeros_like(p)
        np.add.at(force, bars[:, 0], fv)
        np.add.at(force, bars[:, 1], -fv)
        force[:nf] = 0.0
        p = p + dt * force
        r = np.hypot(p[:, 0], p[:, 1])
        out = r > radius
        p[out] *= (radius / r[out])[:, None]

    tri = Delaunay(p).simplices
    c = p[tri].mean(axis=1)
    tri = tri[np.hypot(c[:, 0], c[:, 1]) < radius - 1e-3 * h]
    a = p[tri[:, 1]] - p[tri[:, 0]]
    b = p[tri[:, 2]] - p[tri[:, 0]]
    cw = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0] < 0
    tri[cw] = tri[cw][:, [0, 2, 1]]
    used = np.unique(tri)
    remap = -np.ones(len(p), dtype=int)
    remap[used] = np.arange(len(used))
    return p[used], remap[tri]


def write_msh(path, p, t):
    with open(path, "w") as fh:
        fh.write(f"{len(p)} {len(t)}\n")
        for x, y in p:
            fh.write(f"{x:.17g} {y:.17g}\n")
        for i, j, k in t:
            fh.write(f"{i} {j} {k}\n")


def mesh_with_count(target, tol=0.03):
    """Bisects on h until the element count lands within tol of target."""
    lo, hi = 0.05, 2.0
    best = None
    for _ in range(30):
        h = np.sqrt(lo * hi)
        p, t = distmesh_disk(h)
        if best is None or abs(len(t) - target) < abs(len(best[1]) - target):
            best = (p, t)
        if abs(len(t) - target) <= tol * target:
            break
        if len(t) > target:
            lo = h
        else:
            hi = h
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "meshes"))
    ap.add_argument("--targets", default="160,522,1884,7432")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for target in (int(s) for s in args.targets.split(",")):
        p, t = mesh_with_count(target)
        write_msh(out / f"circle_{len(t)}.msh", p, t)
        print(f"target {target}: {len(t)} elements, {len(p)} vertices")


if __name__ == "__main__":
    main()
