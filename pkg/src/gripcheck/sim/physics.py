"""Quasi-static lumped model of the two-finger fluidic gripper.

Both fingers share one chamber supply. Before contact a finger's curvature is
``curvature_gain * pressure``; once it touches the item the curvature freezes
and further pressure turns into grip force and fingertip displacement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from ..model import ItemClass
from ..units import lpm_to_m3s, psi_to_pa

CALIBRATION_PRESSURE_PA = psi_to_pa(3.5)
CALIBRATION_CURVATURE = 10.0  # 1/m, i.e. a 10 cm bend radius


@dataclass(frozen=True)
class GripperConfig:
    finger_length_m: float = 0.134
    finger_width_m: float = 0.012
    finger_thickness_m: float = 0.006
    recycled_fraction: float = 0.30
    opening_width_m: float = 0.08
    curvature_gain: float = CALIBRATION_CURVATURE / CALIBRATION_PRESSURE_PA  # (1/m)/Pa
    commanded_pressure_pa: float = CALIBRATION_PRESSURE_PA
    pressure_limits_pa: tuple[float, float] = (0.0, psi_to_pa(10.0))
    supply_flow_m3s: float = lpm_to_m3s(2.5)
    flow_limits_m3s: tuple[float, float] = (lpm_to_m3s(2.0), lpm_to_m3s(3.2))
    chamber_volume_m3: float = 2.0e-5
    fill_stiffness_pa: float = 1.0e4
    vent_time_constant_s: float = 0.25
    contact_force_gain: float = 5.0e-5  # N/Pa
    displacement_gain: float = 5.0e-8  # m/Pa
    # Per-class multipliers on the two contact gains: hard items resist
    # displacement, soft items yield.
    force_scale: dict = field(default_factory=lambda: {
        ItemClass.SOFT_FRAGILE.value: 0.6, ItemClass.SOFT_NON_FRAGILE.value: 0.6,
        ItemClass.HARD_FRAGILE.value: 1.0, ItemClass.HARD_NON_FRAGILE.value: 1.5})
    displacement_scale: dict = field(default_factory=lambda: {
        ItemClass.SOFT_FRAGILE.value: 0.6, ItemClass.SOFT_NON_FRAGILE.value: 1.0,
        ItemClass.HARD_FRAGILE.value: 0.1, ItemClass.HARD_NON_FRAGILE.value: 0.1})
    # Class stop rule fires at this fraction of an item's fragility limit.
    stop_margin: float = 0.9
    grasp_force_threshold_n: float = 0.1
    friction_coefficient: float = 0.8
    base_drop_probability: float = 0.02
    drop_size_gain: float = 1.0
    drop_margin_gain: float = 1.5
    drop_reference_ratio: float = 0.5
    drop_reference_margin_n: float = 0.5
    overpressure_pa: float = psi_to_pa(5.5)
    lift_height_m: float = 0.05
    transport_distance_m: float = 0.10
    max_velocity_mps: float = 0.025  # translation
    max_acceleration_mps2: float = 0.1
    vertical_velocity_mps: float = 0.05  # approach, lift, lower
    vertical_acceleration_mps2: float = 0.25
    fault_velocity_mps: float = 0.06
    fault_acceleration_mps2: float = 0.3
    approach_clearance_m: float = 0.05
    wrist_offset_m: float = 0.05

    def validate(self) -> None:
        for name in ("finger_length_m", "finger_width_m", "finger_thickness_m", "opening_width_m",
                     "curvature_gain", "commanded_pressure_pa", "supply_flow_m3s", "chamber_volume_m3",
                     "fill_stiffness_pa", "vent_time_constant_s", "contact_force_gain",
                     "displacement_gain", "recycled_fraction", "max_velocity_mps",
                     "max_acceleration_mps2", "vertical_velocity_mps", "vertical_acceleration_mps2",
                     "fault_velocity_mps", "fault_acceleration_mps2"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")
        lo, hi = self.pressure_limits_pa
        if not 0 <= lo < hi:
            raise ValueError("pressure_limits_pa must satisfy 0 <= lo < hi")
        if not 0 <= self.base_drop_probability <= 1:
            raise ValueError("base_drop_probability must be in [0, 1]")


@dataclass(frozen=True)
class ContactModel:
    """Item-specific contact parameters for one grasp."""

    curvature: float  # finger curvature at which the tip meets the item
    force_gain: float  # N/Pa
    displacement_gain: float  # m/Pa


@dataclass(frozen=True)
class GripperState:
    pressure_pa: float = 0.0
    curvature: tuple[float, float] = (0.0, 0.0)
    fingertip_displacement_m: float = 0.0
    contact: tuple[bool, bool] = (False, False)
    grip_force_n: float = 0.0
    flow_m3s: float = 0.0
    pump_on: bool = False
    contact_pressure_pa: Optional[float] = None


def free_curvature(config: GripperConfig, pressure_pa: float) -> float:
    return config.curvature_gain * pressure_pa


def _apply_pressure(config: GripperConfig, p: float, contact: Optional[ContactModel],
                    flow_m3s: float, pump_on: bool) -> GripperState:
    kappa = free_curvature(config, p)
    if contact is not None and kappa >= contact.curvature:
        p_c = contact.curvature / config.curvature_gain
        excess = max(0.0, p - p_c)
        return GripperState(p, (contact.curvature, contact.curvature),
                            contact.displacement_gain * excess, (True, True),
                            contact.force_gain * excess, flow_m3s, pump_on, p_c)
    return GripperState(p, (kappa, kappa), 0.0, (False, False), 0.0, flow_m3s, pump_on, None)


def step_inflation(state: GripperState, config: GripperConfig, flow_m3s: float, dt: float,
                   target_pa: Optional[float] = None,
                   contact: Optional[ContactModel] = None) -> GripperState:
    """Advance one fill step of the linear fill model.

    Pressure rises by ``flow * dt / chamber_volume * fill_stiffness`` and stops
    at ``target_pa`` (default: the commanded pressure), never leaving the
    configured pressure limits. The returned ``flow_m3s`` is the flow actually
    delivered this step: zero once the target is held.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if flow_m3s < 0:
        raise ValueError("flow must be non-negative")
    target = config.commanded_pressure_pa if target_pa is None else target_pa
    lo, hi = config.pressure_limits_pa
    target = min(max(target, lo), hi)
    p = state.pressure_pa
    delivered = 0.0
    if p < target and flow_m3s > 0:
        p = min(target, p + flow_m3s * dt / config.chamber_volume_m3 * config.fill_stiffness_pa)
        delivered = flow_m3s
    return _apply_pressure(config, p, contact, delivered, True)


def step_vent(state: GripperState, config: GripperConfig, dt: float,
              contact: Optional[ContactModel] = None) -> GripperState:
    """Exponential venting with the configured time constant."""
    p = state.pressure_pa * math.exp(-dt / config.vent_time_constant_s)
    return _apply_pressure(config, p, contact, 0.0, False)


def fill_time(config: GripperConfig, p_from: float, p_to: float, flow_m3s: float) -> float:
    """Closed-form time for the linear fill model to go from ``p_from`` to ``p_to``."""
    rate = flow_m3s / config.chamber_volume_m3 * config.fill_stiffness_pa
    return (p_to - p_from) / rate


def tip_offsets(curvature: float, length: float) -> tuple[float, float]:
    """(inward, downward) displacement of a fingertip from its base for a constant-curvature arc."""
    phi = curvature * length
    if abs(phi) < 1e-8:
        return curvature * length * length / 2.0, length
    return (1.0 - math.cos(phi)) / curvature, math.sin(phi) / curvature


def contact_curvature(config: GripperConfig, item_width_m: float) -> float:
    """Curvature at which the fingertips reach an item of the given width (bisection)."""
    gap = (config.opening_width_m - item_width_m) / 2.0
    if gap < 0:
        raise ValueError("item wider than the opening")
    if gap == 0:
        return 0.0
    L = config.finger_length_m
    lo, hi = 0.0, math.pi / L  # inward offset is monotone on [0, pi/L]
    if tip_offsets(hi, L)[0] < gap:
        raise ValueError("fingers cannot reach an item this narrow")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tip_offsets(mid, L)[0] < gap:
            lo = mid
        else:
            hi = mid
    return hi


def contact_model(config: GripperConfig, item_class: ItemClass, item_width_m: float) -> ContactModel:
    key = ItemClass(item_class).value
    return ContactModel(
        contact_curvature(config, item_width_m),
        config.contact_force_gain * config.force_scale.get(key, 1.0),
        config.displacement_gain * config.displacement_scale.get(key, 1.0),
    )


def stop_pressure(config: GripperConfig, contact: ContactModel, force_limit: Optional[float],
                  displacement_limit: Optional[float]) -> float:
    """Highest pressure the class stop rule allows for an item's fragility limits."""
    p_c = contact.curvature / config.curvature_gain
    p = math.inf
    if force_limit is not None:
        p = min(p, p_c + config.stop_margin * force_limit / contact.force_gain)
    if displacement_limit is not None:
        p = min(p, p_c + config.stop_margin * displacement_limit / contact.displacement_gain)
    return p


def drop_probability(config: GripperConfig, size_ratio: float, force_margin_n: float,
                     degradation_slope: float = 0.0, operating_hours: float = 0.0) -> float:
    """Per-trial drop probability.

    Logistic in size ratio and force margin around the base rate, plus a linear
    per-hour increment for degradation. A grip weaker than the load slips for certain.
    """
    if force_margin_n <= 0:
        return 1.0
    z = (config.drop_size_gain * (size_ratio - config.drop_reference_ratio)
         - config.drop_margin_gain * (force_margin_n - config.drop_reference_margin_n))
    p = config.base_drop_probability * 2.0 / (1.0 + math.exp(-z))
    p += degradation_slope * operating_hours
    return min(1.0, max(0.0, p))
