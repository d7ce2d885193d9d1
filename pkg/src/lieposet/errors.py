"""Exception hierarchy. Everything raised on purpose derives from LiePosetError."""


class LiePosetError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""


class CycleError(LiePosetError):
    """Transitive closure would violate antisymmetry."""


class SizeError(LiePosetError):
    """Input exceeds a documented size bound, or is below a required minimum."""


class ParamError(LiePosetError):
    """Catalog family parameter out of range."""


class FormError(LiePosetError):
    """Functional does not have the required all-ones form."""


class NotSmallError(LiePosetError):
    """Support graph is not a spanning tree of the comparability graph."""


class NotFrobeniusError(LiePosetError):
    """Functional has a nonzero kernel, so no principal element exists."""


class ConditionError(LiePosetError):
    """A hypothesis of the closed-form principal-element theorem fails."""


class RuleError(LiePosetError):
    """A gluing-rule precondition is violated; message names the precondition."""


class FunctionalUndefined(LiePosetError):
    """The assembled functional is undefined for sequences using index-raising rules."""


class FunctionalSearchExhausted(LiePosetError):
    """No functional of full rank was found within the attempt budget."""


class PosetLoadError(LiePosetError):
    """Malformed poset or functional file."""


class SequenceParseError(LiePosetError):
    """Construction-sequence text could not be parsed; message carries line and token."""
