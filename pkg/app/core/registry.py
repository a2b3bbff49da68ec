"""Registry of named quadratic-form presets."""
from fractions import Fraction
from typing import Callable, Dict

CoefficientMap = Dict[tuple[int, int], Fraction]
FormFactory = Callable[[int], CoefficientMap]


class FormRegistry:
    """Registry mapping preset names to coefficient factories."""

    def __init__(self):
        """Initialize registry."""
        self._factories: Dict[str, FormFactory] = {}

    def register(self, name: str, factory: FormFactory) -> None:
        """Register a preset.

        Args:
            name: Preset name used in form specs
            factory: Callable taking the dimension d and returning the
                coefficient map (i, j) -> lambda_ij, 1 <= i <= j <= d
        """
        self._factories[name.lower()] = factory

    def get(self, name: str) -> FormFactory | None:
        """Get a preset by name.

        Args:
            name: Preset name (case-insensitive)

        Returns:
            Factory or None
        """
        return self._factories.get(name.lower())

    def list(self) -> Dict[str, FormFactory]:
        """List all registered presets.

        Returns:
            Dictionary of factories
        """
        return self._factories.copy()

    def clear(self) -> None:
        """Clear all registered presets."""
        self._factories.clear()


def sphere(d: int) -> CoefficientMap:
    return {(i, i): Fraction(1) for i in range(1, d + 1)}


def hyperbolic(d: int) -> CoefficientMap:
    return {(1, 2): Fraction(1)}


def lorentz(d: int) -> CoefficientMap:
    coeffs = sphere(d)
    coeffs[(d, d)] = Fraction(-1)
    return coeffs


def register_builtin_forms(registry: "FormRegistry") -> None:
    """Register the built-in presets."""
    registry.register("sphere", sphere)
    registry.register("hyperbolic", hyperbolic)
    registry.register("lorentz", lorentz)


form_registry = FormRegistry()
register_builtin_forms(form_registry)
