"""
CLI module
"""
from .app import NLOSLinkCLI, main

__all__ = ['NLOSLinkCLI', 'main']
