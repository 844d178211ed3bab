"""Exception hierarchy shared across the package."""


class IsogeoError(Exception):
    """Base class for all errors raised by isogeo."""


class InputError(IsogeoError, ValueError):
    """Malformed arguments: dimension mismatch, bad index, wrong tensor type."""


class ModelLookupError(IsogeoError, KeyError):
    def __init__(self, name, available):
        self.name = name
        self.available = list(available)
        super().__init__(f"unknown model {name!r}; available: {', '.join(self.available)}")

    def __str__(self):
        return self.args[0]


class SamplingError(IsogeoError):
    pass


class FocalPointError(IsogeoError):
    """The spherical gradient of the defining polynomial (nearly) vanishes."""


class FocalTimeError(IsogeoError):
    def __init__(self, t, index, theta):
        self.t, self.index, self.theta = t, index, theta
        super().__init__(f"t={t!r} is focal: cot(t) hits principal curvature {index} (theta_{index}={theta!r})")


class ModelConsistencyError(IsogeoError):
    pass


class StencilError(IsogeoError):
    def __init__(self, location, cause):
        self.location = location
        super().__init__(f"evaluation failed at stencil point {location!r}: {cause}")


class UndefinedEntryError(IsogeoError):
    pass
