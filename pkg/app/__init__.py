"""Q-generic point sets: construction over F_p, integer lifts and exact certification."""

__all__ = ["main"]
