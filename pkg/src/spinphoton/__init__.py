"""spinphoton — state-vector simulator for a cavity-mediated spin-photon interface.

Submodules:

- :mod:`spinphoton.qstate` — labeled tensor-product state vectors.
- :mod:`spinphoton.cavity` — spin-selective cavity scattering, ideal and lossy.
- :mod:`spinphoton.optics` — linear optics (polarizing/ordinary beam splitters,
  mirrors, wave plates, phase shifts).
- :mod:`spinphoton.protocols` — photon-spin CNOT, multi-photon entangler / GHZ
  source, and the spin-heralded complete Bell-state analyzer.
- :mod:`spinphoton.measurement` — outcome enumeration and seeded sampling.
- :mod:`spinphoton.dsl` — a small circuit description language (parse,
  pretty-print, compile to simulator calls).
- :mod:`spinphoton.cli` — the ``spinphoton`` command-line interface.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
