"""khoma: Khovanov homology, dot-sliding homotopies and the e-operator"""

__version__ = "1.0.0"
