"""Exception types raised across the package."""


class UsuryCapError(Exception):
    """Base class for all package errors."""


class InvalidTime(UsuryCapError, ValueError):
    pass


class InvalidScale(UsuryCapError, ValueError):
    pass


class InvalidRate(UsuryCapError, ValueError):
    pass


class NotAligned(UsuryCapError, ValueError):
    """A compounding factor would be irrational at the requested time."""


class ZeroPoly(UsuryCapError, ValueError):
    pass


class EndpointRoot(UsuryCapError, ValueError):
    """An interval endpoint passed to a Sturm count is a root."""


class NotPure(UsuryCapError, ValueError):
    pass


class NotInCapMinus(UsuryCapError, ValueError):
    pass


class NonExactFactor(UsuryCapError, ValueError):
    pass


class NotApplicable(UsuryCapError, ValueError):
    pass


class InvalidConfig(UsuryCapError, ValueError):
    pass
