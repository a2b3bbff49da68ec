"""HTTP API for constructions, classifications and certificates."""
