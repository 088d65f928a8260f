"""Models every cross-cutting check runs over: toric curves, separable levels, hand-built foliations."""
from __future__ import annotations

import numpy as np

from birkhoff_sections.directions import DirectionSet
from birkhoff_sections.foliation import (MINUS, PLUS, VERTICAL, FoliatedManifold, TorusEnd,
                                         TorusFamily, figure_eight)
from birkhoff_sections.separable import (SeparableSystem, build_level_foliation, random_profile,
                                         random_regular_level, two_well_profile)
from birkhoff_sections.toric import (ellipsoid_curve, make_k_semicircle_curve, polydisk_curve,
                                     quarter_circle_curve, round_sphere_curve, toric_model)


def toric_models():
    curves = {
        "sphere": round_sphere_curve(),
        "E(1,2)": ellipsoid_curve(1, 2),
        "E(2,3)": ellipsoid_curve(2, 3),
        "P(1,2)": polydisk_curve(1, 2),
        "quarter-circle": quarter_circle_curve(),
    }
    for k in range(1, 4):
        curves[f"semicircle-{k}"] = make_k_semicircle_curve(k)
    return {name: toric_model(c) for name, c in curves.items()}


def separable_models(n_random: int = 8, seed: int = 7):
    g = two_well_profile()
    two = SeparableSystem(g, g)
    out = {f"two-well c={c}": build_level_foliation(two, c) for c in (0.1, 0.25, 0.35, 0.7)}
    rng = np.random.default_rng(seed)
    for i in range(n_random):
        sys_ = SeparableSystem(random_profile(rng), random_profile(rng))
        c = random_regular_level(rng, sys_)
        out[f"random-{i} c={c}"] = build_level_foliation(sys_, c)
    return out


def hand_models():
    quad = DirectionSet.quadrant()
    sphere = FoliatedManifold((TorusFamily("S", 0.0, 1.0, quad, TorusEnd.vertical(), TorusEnd.horizontal()),))
    # one family splits into two through a vertical figure-eight
    fe = figure_eight("B", VERTICAL, [("a", "A1"), ("b", "A2")], ("c", "C"), singles_side=MINUS)
    split = FoliatedManifold((
        TorusFamily("A1", 0.0, 1.0, quad, TorusEnd.vertical(), TorusEnd.face("B", "a")),
        TorusFamily("A2", 0.0, 1.0, quad, TorusEnd.vertical(), TorusEnd.face("B", "b")),
        TorusFamily("C", 0.0, 1.0, quad, TorusEnd.face("B", "c"), TorusEnd.horizontal()),
    ), (fe,))
    # a sampled family with a constant tilted flow
    tilted = FoliatedManifold((TorusFamily("L", 0.0, 1.0, DirectionSet.constant((2.0, 1.0)),
                                           TorusEnd.vertical(), TorusEnd.horizontal()),))
    return {"quadrant-sphere": sphere, "figure-eight": split, "tilted": tilted}


def full_corpus():
    out = {}
    out.update({f"toric {k}": m for k, m in toric_models().items()})
    out.update({f"separable {k}": m for k, m in separable_models().items()})
    out.update({f"hand {k}": m for k, m in hand_models().items()})
    return out


__all__ = ["toric_models", "separable_models", "hand_models", "full_corpus", "PLUS"]
