"""modchar: modular (Brauer) characters and decomposition matrices at desk scale."""

__version__ = "0.1.0"
