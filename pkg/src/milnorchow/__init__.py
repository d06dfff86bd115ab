"""Milnor K-theory symbols, tame symbols, norms and cubical cycles in exact arithmetic."""
