"""Exception types shared by the numerical modules."""


class HypothesisError(ValueError):
    """An input violates a hypothesis of the construction.

    ``certificate`` names the check that failed so reports can point at it.
    """

    def __init__(self, certificate, message):
        super().__init__(f"{certificate}: {message}")
        self.certificate = certificate


class CertificateError(AssertionError):
    """A computed object failed one of its post-condition certificates."""

    def __init__(self, certificate, message):
        super().__init__(f"{certificate}: {message}")
        self.certificate = certificate
