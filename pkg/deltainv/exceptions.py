class DeltaInvError(Exception):
    """Base exception for deltainv errors."""

    pass


class ExpressionError(DeltaInvError):
    """Base exception for expression parsing and evaluation problems."""

    pass


class ExpressionSyntaxError(ExpressionError):
    """Raised when an expression string does not conform to the grammar."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifierError(ExpressionError):
    """Raised when an identifier is neither a declared symbol, a parameter nor a function."""

    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"Unknown identifier '{name}' at offset {offset}")


class ArityError(ExpressionError):
    """Raised when a function is called with the wrong number of arguments."""

    def __init__(self, name: str, offset: int, got: int | None = None):
        self.name = name
        self.offset = offset
        self.got = got
        msg = f"Function '{name}' takes exactly one argument (offset {offset})"
        if got is not None:
            msg += f", got {got}"
        super().__init__(msg)


class EvaluationDomainError(ExpressionError):
    """Raised when an operation is evaluated outside its real domain."""

    def __init__(self, operation: str, value: float):
        self.operation = operation
        self.value = value
        super().__init__(f"Domain error in '{operation}' at value {value!r}")


class UnboundParameterError(ExpressionError):
    """Raised when evaluation is missing a parameter value."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Parameter '{name}' is not bound")


class SingularMetricError(DeltaInvError):
    """Raised when a sampled metric is not safely positive definite."""

    def __init__(self, point, smallest_eigenvalue: float, condition: float | None = None):
        self.point = point
        self.smallest_eigenvalue = smallest_eigenvalue
        self.condition = condition
        msg = f"Metric is singular at {list(point)}: smallest eigenvalue {smallest_eigenvalue:.3e}"
        if condition is not None:
            msg += f", condition number {condition:.3e}"
        super().__init__(msg)


class StencilError(DeltaInvError):
    """Raised when a finite-difference stencil would leave the coordinate box."""

    def __init__(self, point, step: float):
        self.point = point
        self.step = step
        super().__init__(f"Point {list(point)} is too close to the domain boundary for step {step:.3e}")


class NonOrthonormalError(DeltaInvError):
    """Raised when vectors expected to be orthonormal are not."""

    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"Vectors are not orthonormal: residual {residual:.3e} exceeds {tolerance:.1e}")


class InvalidTupleError(DeltaInvError):
    """Raised when a tuple is not a member of S(n) or does not fit the requested use."""

    def __init__(self, parts, n: int, reason: str = ""):
        self.parts = tuple(parts)
        self.n = n
        msg = f"Tuple {self.parts} is not valid for n={n}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class DimensionCapError(DeltaInvError):
    """Raised when a tuple sweep is requested above the configured dimension cap."""

    def __init__(self, dim: int, cap: int):
        self.dim = dim
        self.cap = cap
        super().__init__(f"Dimension {dim} exceeds the configured cap {cap}")


class ImmersionRankError(DeltaInvError):
    """Raised when the Jacobian of an immersion drops rank."""

    def __init__(self, point, smallest_singular_value: float):
        self.point = point
        self.smallest_singular_value = smallest_singular_value
        super().__init__(
            f"Immersion is not regular at {list(point)}: smallest singular value {smallest_singular_value:.3e}"
        )


class NotLagrangianError(DeltaInvError):
    """Raised when immersion data fails the Lagrangian condition."""

    def __init__(self, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"Symplectic residual {residual:.3e} exceeds {tolerance:.1e}")


class MissingMetadataError(DeltaInvError):
    """Raised when a manifold record lacks data a check requires."""

    def __init__(self, record: str, field: str):
        self.record = record
        self.field = field
        super().__init__(f"Record '{record}' has no '{field}'")


class SpecValidationError(DeltaInvError):
    """Raised when a spec document fails schema or structural validation."""

    def __init__(self, errors: list[str], source: str | None = None):
        self.errors = list(errors)
        self.source = source
        where = f" in {source}" if source else ""
        super().__init__(f"Invalid spec{where}: " + "; ".join(self.errors))


class UnknownManifoldError(DeltaInvError):
    """Raised when a catalog name does not resolve to a built-in manifold."""

    def __init__(self, name: str, reason: str = ""):
        self.name = name
        self.reason = reason
        msg = f"Unknown catalog entry '{name}'"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
