"""cyq: exact-arithmetic workbench for dg preprojective algebras,
Drinfeld quotients, truncated Hochschild/cyclic homology and
Calabi-Yau trace forms."""

__version__ = "0.1.0"
