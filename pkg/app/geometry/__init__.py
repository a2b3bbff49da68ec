"""Exact geometry over prime fields and the integers."""
