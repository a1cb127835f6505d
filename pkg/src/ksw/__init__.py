"""ksw: a workbench for finite-dimensional Krein-space spectral geometry.

Core layers:

- ``kreinlin``: adjoints and positivity over finite Krein spaces, antilinear
  operator calculus.
- ``clifford``: irreducible gamma representations, chirality, charge
  conjugation, KO sign tables.
- ``graphs``: exact-rational weighted digraphs, geodesics, cycle bases.
- ``spectral``: spectral structures (spacetime and triple flavours), axiom
  verification, time-orientation forms, reconstructibility.
- ``wick``: rotation between the antilorentzian and Euclidean pictures.
- ``canonical``: the canonical triple/spacetime of a weighted (oriented)
  graph, Connes distance, discrete Morera, stable causality.
- ``splitdirac``: discrete spinor bundles over split graphs, connection
  classification, reconstructibility and causality criteria, comparison with
  the vertex-based discretized Dirac operator.
- ``feasibility``: exact strict-inequality Fourier-Motzkin with certificates.
- ``cli`` / ``service``: command line and HTTP front ends.
"""

__version__ = "0.1.0"

__all__ = [
    "kreinlin",
    "clifford",
    "graphs",
    "spectral",
    "wick",
    "canonical",
    "feasibility",
    "splitdirac",
    "serialization",
]
