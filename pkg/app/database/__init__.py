"""Database subpackage."""
