"""topoforge: lattice TQFT models for finite groups.

Kitaev quantum-double and Levin-Wen string-net models on honeycomb tori,
the Fourier duality between their bases, and Turaev-Viro / Dijkgraaf-Witten
state sums on glued 3-complexes.
"""

__version__ = "0.1.0"
