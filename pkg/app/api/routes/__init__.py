"""API routes package."""
from . import certificates, constructions, forms
