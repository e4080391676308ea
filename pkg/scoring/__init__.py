"""Run verdict package"""
from .run_verdict import RunVerdict

__all__ = ['RunVerdict']
