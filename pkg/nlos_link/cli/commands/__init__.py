"""CLI Command Modules"""
from .simulate import SimulateCommandsMixin
from .coverage import CoverageCommandsMixin
from .trilaterate import TrilaterateCommandsMixin
from .keyagree import KeyAgreementCommandsMixin

__all__ = [
    'SimulateCommandsMixin',
    'CoverageCommandsMixin',
    'TrilaterateCommandsMixin',
    'KeyAgreementCommandsMixin',
]
