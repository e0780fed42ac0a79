"""Exception hierarchy shared by every module.

Each class carries the process exit code used by the command line front end.
"""


class GalcountError(Exception):
    exit_code = 1
    code = "error"


class InputError(GalcountError, ValueError):
    """Malformed input: bad permutation, unparsable file, unknown name."""

    exit_code = 2
    code = "input"


class DomainError(GalcountError, ValueError):
    """Input is well formed but outside the operation's domain."""

    exit_code = 2
    code = "domain"


class ResourceError(GalcountError):
    """A configured cap (enumeration size, sieve bound, depth) was exceeded."""

    exit_code = 3
    code = "resource"


class RuleNotApplicable(GalcountError):
    """A bound rule's hypotheses fail; the engine falls back to other rules."""

    exit_code = 2
    code = "rule"


class VerificationError(GalcountError):
    exit_code = 4
    code = "verification"
