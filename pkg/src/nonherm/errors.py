"""Exception hierarchy shared across the library and the CLI."""


class NonhermError(Exception):
    """Base class for all library errors."""


class NotHermitian(NonhermError):
    """Matrix fails the Hermitian symmetry tolerance."""


class NoConvergence(NonhermError):
    """Iterative eigensolver exceeded its sweep budget."""


class NotPSD(NonhermError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class BadWire(NonhermError):
    """Qubit index outside the register."""


class SameWire(NonhermError):
    """Control and target of a two-qubit gate coincide."""


class BadWireSet(NonhermError):
    """Partial-trace keep set is empty or not a strict subset."""


class ZeroProbability(NonhermError):
    """Postselection outcome has (numerically) vanishing probability."""


class VanishingNorm(NonhermError):
    """Propagated state has vanishing norm and cannot be renormalized."""


class VanishingTrace(NonhermError):
    """Propagated density matrix has vanishing trace."""


class Diverged(NonhermError):
    """Training cost became non-finite."""


class ConfigError(NonhermError):
    """Experiment configuration is missing, malformed, or inconsistent."""
