# errors.py


class ZXError(Exception):
    """Base class for zxft errors."""


class IntegrityError(ZXError, ValueError):
    """A reference to a spider, edge, port or outcome variable that does not exist."""


class ParseError(ZXError, ValueError):

    def __init__(self, message: str, field: str = None, line: int = None):
        """
        Args:
            message (str): description of the problem
            field (str): offending field name, if known
            line (int): offending line of the input text, if known
        """
        if line is not None:
            message = '{} (line {})'.format(message, line)
        super().__init__(message)
        self.field = field
        self.line = line


class RuleNotApplicable(ZXError, ValueError):
    """A rewrite rule was applied outside its precondition."""


class UnsupportedPhase(ZXError, ValueError):

    def __init__(self, spider: int, phase: int):
        super().__init__(
            'spider {} has phase {}*pi/2; only 0 and pi are supported'.format(spider, phase))
        self.spider = spider
        self.phase = phase


class ContractViolation(ZXError, ValueError):
    """A web or map handed to an operation does not satisfy its contract."""


class SizeError(ZXError, ValueError):
    """A dense computation would exceed the configured size limit."""
