"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the command line
front end can map failures to exit statuses and JSON error objects.
"""


class AgendaGameError(Exception):
    code = "error"


class ValidationError(AgendaGameError, ValueError):
    code = "validation"


class OrderingError(ValidationError):
    code = "ordering"


class MonotonicityError(ValidationError):
    code = "non_monotone_ideal_policies"


class RangeError(ValidationError):
    code = "out_of_range"


class QuotaError(ValidationError):
    code = "quota_out_of_range"


class CapError(ValidationError):
    code = "reservation_exceeds_cap"


class DomainError(ValidationError):
    code = "domain"


class PreconditionError(ValidationError):
    code = "precondition"


class RegimeError(AgendaGameError):
    code = "regime"


class ConvergenceError(AgendaGameError):
    code = "non_convergence"

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class ConfigError(AgendaGameError):
    code = "config"
