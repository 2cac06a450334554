"""Hyperidentities expanded into equational theories, with bounded derivation,
relatively free semigroups, square-free words and witness term towers."""

__version__ = "0.1.0"
