"""
Exception hierarchy shared by every posetlab module.

exit_code follows the CLI contract: 2 for validation errors, 3 for guard
refusals (inputs the size caps decline to process).
"""


class PosetLabError(Exception):
    exit_code = 2


class CycleError(PosetLabError):
    """Transitive closure of the input relation makes some element < itself."""


class PosetIndexError(PosetLabError, IndexError):
    pass


class BadParam(PosetLabError, ValueError):
    pass


class NotMonotoneTree(PosetLabError):
    pass


class DisconnectedPoset(PosetLabError):
    pass


class EmptyFamily(PosetLabError):
    pass


class BadTree(PosetLabError):
    pass


class ConditionFailed(PosetLabError):
    """A layered witness violates condition i, ii or iii."""

    def __init__(self, condition: str, witness=None, message: str = ""):
        self.condition = condition
        self.witness = witness
        super().__init__(message or f"condition {condition} failed (witness: {witness})")


class NotVeeFree(PosetLabError):
    def __init__(self, bottom: int, antichain):
        self.bottom = bottom
        self.antichain = list(antichain)
        super().__init__(
            f"family contains an induced vee: bottom {bottom}, tops {self.antichain}"
        )


class InvariantViolation(PosetLabError):
    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)


class TooLarge(PosetLabError):
    exit_code = 3

    def __init__(self, limit: str, value, bound):
        self.limit = limit
        self.value = value
        self.bound = bound
        super().__init__(f"{limit}: {value} exceeds the guard {bound}")


class GroundTooLarge(TooLarge):
    pass
