"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A distribution or config parameter is outside its admissible range."""


class SupportError(ValueError):
    """An operation was applied to a law whose support does not admit it."""


class TransformError(ValueError):
    """A callable handed to the transform inverter is not a valid transform."""


class ResourceError(RuntimeError):
    """A simulation request exceeds the configured memory budget."""


class DistSpecError(ValueError):
    """A distribution spec string failed to parse.

    Carries the byte offset of the failure and a short description of what
    was expected there.
    """

    def __init__(self, text, offset, expected):
        self.text = text
        self.offset = int(offset)
        self.expected = expected
        super().__init__(f"at byte {offset}: expected {expected!r} in {text!r}")
