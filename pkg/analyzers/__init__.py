"""Run analyzers package"""
from .waist_analyzer import WaistLineAnalyzer
from .conservation_analyzer import ConservationAnalyzer
from .uncertainty_analyzer import UncertaintyAnalyzer
from .fringe_analyzer import FringeAnalyzer
from .comparator_analyzer import ComparatorAnalyzer

__all__ = [
    'WaistLineAnalyzer',
    'ConservationAnalyzer',
    'UncertaintyAnalyzer',
    'FringeAnalyzer',
    'ComparatorAnalyzer'
]
