"""Exception types raised by the package."""


class CartierError(ValueError):
    """Base class for every error raised on invalid input or broken contracts."""


class InvalidModulusError(CartierError):
    pass


class ShapeError(CartierError):
    pass


class FamilyConditionError(CartierError):
    pass


class DegreeError(CartierError):
    pass


class BasisError(CartierError):
    pass


class ContractError(CartierError):
    pass


class ConsistencyError(CartierError):
    """The image of a holomorphic differential left the adjoint span."""


class ParseError(CartierError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
