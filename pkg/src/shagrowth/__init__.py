"""Growth of Selmer and Tate-Shafarevich quotients of isogenous elliptic curves in towers."""

__version__ = "0.1.0"
