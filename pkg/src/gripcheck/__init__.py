"""Requirement-driven verification for a soft pneumatic grocery gripper."""

__version__ = "0.1.0"
