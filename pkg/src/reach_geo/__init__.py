"""
reach-geo - Geodésicas sub-riemannianas para síntese de movimentos de alcance
"""

__version__ = "0.1.0"
