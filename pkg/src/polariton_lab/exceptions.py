"""Exception types shared across the package."""


class PolaritonError(ValueError):
    """Domain error in a physics operation (bad parameters, unstable system...)."""


class PoleError(PolaritonError):
    """A driven system was evaluated exactly at a lossless resonance."""


class SchemaError(ValueError):
    """A scenario document does not conform to the documented schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
