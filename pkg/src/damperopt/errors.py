"""Exception types shared across the package."""


class DegenerateSystemError(RuntimeError):
    """The phase matrix is not Hurwitz (or numerically indistinguishable from it).

    Raised by the dense Lyapunov solver when the vectorized operator is
    singular or its condition estimate exceeds the trust threshold, which
    happens exactly when some mode receives (almost) no damping.
    """


class UnstableIntegrationError(RuntimeError):
    """Time integration produced a non-finite state."""


class NoAdmissiblePositionError(RuntimeError):
    """Every position in a sweep leaves at least one weighted mode undamped."""
