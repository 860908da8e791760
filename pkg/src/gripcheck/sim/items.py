"""Grocery item library used by the default campaign."""

from __future__ import annotations

import math

from ..model import ItemClass, ItemSpec, Shape

ORIENTATIONS = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4)

_SF, _SN, _HF, _HN = (ItemClass.SOFT_FRAGILE, ItemClass.SOFT_NON_FRAGILE,
                      ItemClass.HARD_FRAGILE, ItemClass.HARD_NON_FRAGILE)

ITEMS: dict[ItemClass, tuple[ItemSpec, ...]] = {
    _SF: (
        ItemSpec.make("cake", _SF, Shape.CUBE, 0.060, 0.050, profile="cake"),
        ItemSpec.make("strawberry", _SF, Shape.IRREGULAR, 0.030, 0.020, profile="berry"),
        ItemSpec.make("bread_roll", _SF, Shape.CYLINDER, 0.065, 0.045, profile="cake"),
        ItemSpec.make("bayberry", _SF, Shape.SPHERE, 0.020, 0.010, profile="berry"),
    ),
    _SN: (
        ItemSpec.make("dish_sponge", _SN, Shape.CUBE, 0.050, 0.010),
        ItemSpec.make("large_sponge", _SN, Shape.CUBE, 0.076, 0.015),  # 95% of the default opening
        ItemSpec.make("foam_cone", _SN, Shape.CONE, 0.040, 0.008),
    ),
    _HF: (
        ItemSpec.make("egg", _HF, Shape.IRREGULAR, 0.045, 0.060),
        ItemSpec.make("light_bulb", _HF, Shape.SPHERE, 0.060, 0.050),
    ),
    _HN: (
        ItemSpec.make("plastic_spoon", _HN, Shape.IRREGULAR, 0.015, 0.010),
        ItemSpec.make("tin", _HN, Shape.CYLINDER, 0.070, 0.100),
        ItemSpec.make("toy_pyramid", _HN, Shape.PYRAMID, 0.050, 0.040),
    ),
}

ITEMS_BY_NAME = {item.name: item for items in ITEMS.values() for item in items}
