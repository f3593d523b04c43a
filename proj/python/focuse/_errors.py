class FocuseError(Exception):
    """Raised by library operations; ``kind`` names the error category."""

    def __init__(self, message, kind="error"):
        super().__init__(message)
        self.kind = kind


class ParseError(FocuseError):
    """Raised when text does not parse; ``diagnostics`` holds one dict per finding."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message, "parse")
        self.diagnostics = list(diagnostics)
