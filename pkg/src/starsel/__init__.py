"""starsel: a finite model checker for classical and star selection principles."""

__version__ = "0.1.0"
