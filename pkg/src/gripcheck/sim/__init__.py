from .campaign import Campaign, default_campaign, iter_campaign, run_campaign
from .physics import GripperConfig
from .trial import Faults, Scenario, ScenarioError, run_trial

__all__ = ["Campaign", "Faults", "GripperConfig", "Scenario", "ScenarioError",
           "default_campaign", "iter_campaign", "run_campaign", "run_trial"]
