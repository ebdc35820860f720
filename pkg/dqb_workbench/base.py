import logging
import time
from abc import ABC, abstractmethod
from typing import Callable, Iterable

from dqb_workbench.schemas import CheckRecord, Report, Witness


class WorkbenchError(Exception):
    """Base workbench error ({})."""


class ShapeError(WorkbenchError):
    """Operands have incompatible shapes or bases ({})."""


class FieldError(WorkbenchError):
    """Value is not an element of the active field ({})."""


class NotInvertible(WorkbenchError):
    """The functional has no convolution inverse ({})."""


class PreconditionError(WorkbenchError):
    """An operation precondition is not satisfied ({})."""

    def __init__(self, message: str, report: Report | None = None):
        super().__init__(message)
        self.report = report


class NonHomogeneous(WorkbenchError):
    """The coaction is not group homogeneous on basis vector '{}'."""

    def __init__(self, label: str):
        super().__init__(
            f"Coaction of basis vector '{label}' is not of the form g⊗v.")
        self.label = label


class ParseError(WorkbenchError):
    """Malformed structure-constants file ({})."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None):
        location = '' if line is None else f'line {line}, column {column}: '
        super().__init__(f'{location}{message}')
        self.line = line
        self.column = column


class NotFound(WorkbenchError):
    """The requested object was not found ({})."""


Check = Callable[[], Witness | None]


class BaseChecker(ABC):
    """
    Evaluates a sequence of named axioms and collects a Report.

    Each check is a callable returning None when the axiom holds and a
    Witness otherwise.
    """
    severity = 'input'

    @abstractmethod
    def __init__(self):
        pass

    @property
    @abstractmethod
    def subject(self) -> str:
        pass

    @abstractmethod
    def checks(self) -> Iterable[tuple[str, Check]]:
        pass

    def run(self) -> Report:
        records = [self._run_check(name, check)
                   for name, check in self.checks()]
        report = Report(subject=self.subject, records=records)
        if report.passed:
            self.logger.debug(f"All checks passed for {self.subject}.")
        else:
            self.logger.debug(
                f"Checks failing for {self.subject}: "
                f"{[r.name for r in report.failed]}")
        return report

    def _run_check(self, name: str, check: Check) -> CheckRecord:
        start = time.perf_counter()
        try:
            witness = check()

        except PreconditionError as err:
            self.logger.error(f"Precondition of {name} not met: {err}")
            return CheckRecord(name=name,
                               status='precondition',
                               severity=self.severity,
                               witness=Witness(message=str(err)),
                               elapsed=time.perf_counter() - start)

        except WorkbenchError as err:
            self.logger.error(f"Check {name} raised: {err}")
            return CheckRecord(name=name,
                               status='error',
                               severity=self.severity,
                               witness=Witness(message=str(err)),
                               elapsed=time.perf_counter() - start)

        except Exception as err:
            self.logger.exception(
                f"Unexpected error during check {name} "
                f"of {self.subject}: {err}")
            raise

        status = 'pass' if witness is None else 'fail'
        if witness is not None:
            self.logger.debug(f"{name} fails at {witness.at}")
        return CheckRecord(name=name,
                           status=status,
                           severity=self.severity,
                           witness=witness,
                           elapsed=time.perf_counter() - start)


class CheckSuite(BaseChecker):
    """
    A checker assembled from a fixed list of named checks.
    """

    def __init__(self, subject: str, checks: Iterable[tuple[str, Check]],
                 severity: str = 'input'):
        self.logger = logging.getLogger(__name__)
        self._subject = subject
        self._checks = list(checks)
        self.severity = severity

    @property
    def subject(self) -> str:
        return self._subject

    def checks(self):
        return iter(self._checks)
