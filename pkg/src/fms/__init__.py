"""FMS: a compiler from the FML modelling language to answer set programs."""

__version__ = "0.1.0"
