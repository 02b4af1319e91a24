"""Exception type shared by every module of the package."""


class XformError(ValueError):
    """Failure with a stable machine-readable ``code``.

    The code strings (``"grid-too-small"``, ``"reality-violated"``, ...) are
    part of the public contract; the message is free text.
    """

    def __init__(self, code, message=""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)
