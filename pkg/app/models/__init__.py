"""Domain models for the app."""
