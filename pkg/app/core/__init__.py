"""Core utilities and services."""
