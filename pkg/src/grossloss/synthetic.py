"""Synthetic data for demos and tests.

:func:`make_rings` draws schema-valid ring records whose gross loss (2-10 %)
depends mostly on surface-to-volume ratio, setting work and decoration, plus
noise.  :func:`make_affine` draws a plain affine regression problem.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .schema_io import Dataset, Metal, MetalSpec, RingRecord

# g/cm^3; gold alloys keyed by karat
_GOLD_DENSITY = {9: 11.2, 10: 11.6, 14: 13.1, 18: 15.6}
_DENSITY = {Metal.SV: 10.4, Metal.PT: 21.4, Metal.PD: 12.0}
_METAL_LOSS = {
    Metal.WG: 0.35,
    Metal.YG: 0.0,
    Metal.PG: 0.2,
    Metal.SV: 0.6,
    Metal.PT: -0.3,
    Metal.PD: 0.1,
}


def _metal(rng):
    metal = list(Metal)[rng.choice(6, p=[0.3, 0.3, 0.15, 0.1, 0.08, 0.07])]
    if metal in (Metal.WG, Metal.YG, Metal.PG):
        karat = int(rng.choice([9, 10, 14, 18]))
        density = _GOLD_DENSITY[karat]
    else:
        # fineness expressed in karat: sterling 925 ~ 22k, Pt/Pd 950 ~ 23k
        karat = 22 if metal is Metal.SV else 23
        density = _DENSITY[metal]
    return MetalSpec(karat, metal), density


def make_ring(rng, noise=0.3):
    spec, density = _metal(rng)
    volume = rng.uniform(120.0, 900.0)
    surface_area = 6.0 * volume ** (2.0 / 3.0) * rng.uniform(1.2, 2.2)
    weight = volume * density / 1000.0
    qty = int(rng.integers(10, 201))
    min_thk = rng.uniform(1.1, 2.0)
    max_thk = min_thk + rng.uniform(0.0, 1.5)
    inner = rng.uniform(15.0, 22.0)
    min_w = rng.uniform(1.5, 4.0)
    max_w = min_w + rng.uniform(0.0, 4.0)
    total_h = rng.uniform(4.0, 15.0)
    top_h = total_h * rng.uniform(0.2, 0.8)
    components = int(rng.integers(1, 7))
    n_rings = int(rng.integers(1, 4))
    tone = int(rng.integers(1, 4))
    true_miracle = bool(rng.random() < 0.3)
    n_miracle = int(rng.integers(1, 9)) if true_miracle else 0
    diamonds = int(rng.integers(0, 61))
    filigree = bool(rng.random() < 0.25)
    j_back = bool(rng.random() < 0.3)
    gallery = bool(rng.random() < 0.4)
    beads = int(rng.integers(0, 31))
    plating = bool(rng.random() < 0.35)

    loss = (
        2.6
        + 0.9 * (surface_area / volume - 0.9)
        + 0.035 * diamonds
        + 0.25 * (tone - 1)
        + 0.15 * (components - 1)
        + 0.7 * filigree
        + 0.4 * gallery
        + 0.25 * j_back
        + 0.02 * beads
        + 0.3 * n_miracle / 4
        + 0.2 * plating
        + _METAL_LOSS[spec.metal]
        + rng.normal(0.0, noise)
    )
    return RingRecord(
        volume=round(volume, 3),
        surface_area=round(surface_area, 3),
        metal=spec,
        weight_per_piece=round(weight, 4),
        total_lot_quantity=qty,
        total_weight_of_lot=round(weight * qty, 3),
        inner_diameter=round(inner, 3),
        outer_diameter=round(inner + 2 * max_thk, 3),
        min_shank_thickness=round(min_thk, 3),
        max_shank_thickness=round(max_thk, 3),
        min_shank_width=round(min_w, 3),
        max_shank_width=round(max_w, 3),
        total_height=round(total_h, 3),
        top_height=round(top_h, 3),
        num_components=components,
        num_rings=n_rings,
        tone=tone,
        true_miracle=true_miracle,
        num_true_miracle=n_miracle,
        diamonds_set=diamonds,
        filigree=filigree,
        j_back=j_back,
        gallery=gallery,
        fake_beads=beads,
        plating=plating,
        gross_loss=round(float(np.clip(loss, 2.0, 10.0)), 3),
    )


def make_rings(n=26, seed=0, noise=0.3, labelled=True) -> Dataset:
    """``n`` random schema-valid ring records (26 by default, like the original study)."""
    rng = np.random.default_rng(seed)
    records = [make_ring(rng, noise) for _ in range(n)]
    if not labelled:
        records = [replace(r, gross_loss=None) for r in records]
    return Dataset(tuple(records), source_name=f"synthetic-rings(n={n}, seed={seed})")


def make_affine(n=200, p=10, seed=0, noise=0.0):
    """Features ``N(0, 1)`` and ``y = b + X @ w + N(0, noise^2)``.

    Returns ``(X, y, intercept, weights)``.
    """
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p))
    w = rng.uniform(-3.0, 3.0, size=p)
    b = float(rng.uniform(-5.0, 5.0))
    y = b + X @ w
    if noise:
        y = y + rng.normal(0.0, noise, size=n)
    return X, y, b, w
