from typing import Literal

from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from rich.pretty import pretty_repr


class Model(BaseModel):
    def __str__(self):
        return pretty_repr(self)

    def __repr__(self):
        return self.__str__()

    model_config = ConfigDict(
        arbitrary_types_allowed=True)


class Witness(Model):
    at: list[str] = []
    lhs: str | None = None
    rhs: str | None = None
    message: str | None = None

    @field_validator('at', mode='before')
    @classmethod
    def validate_at(cls, value: tuple | list | str | None):
        if value is None:
            return []
        if isinstance(value, str):
            return [value]
        return [str(v) for v in value]


class CheckRecord(Model):
    name: str
    status: Literal['pass', 'fail', 'error', 'precondition', 'skipped']
    severity: Literal['input', 'internal'] = 'input'
    witness: Witness | None = None
    elapsed: float = 0.0

    @model_validator(mode='after')
    def failure_has_witness(self):
        if self.status == 'fail' and self.witness is None:
            raise ValueError(f'Failing check {self.name} needs a witness.')
        return self

    @property
    def passed(self) -> bool:
        return self.status in ('pass', 'skipped')


class Report(Model):
    subject: str
    command: str | None = None
    records: list[CheckRecord] = []

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def status(self) -> str:
        return 'pass' if self.passed else 'fail'

    @property
    def failed(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.records]

    def __getitem__(self, name: str) -> CheckRecord:
        for record in self.records:
            if record.name == name:
                return record
        raise KeyError(f'No check named "{name}" in report on '
                       f'{self.subject}.')

    def __add__(self, other: 'Report') -> 'Report':
        return Report(subject=self.subject,
                      command=self.command or other.command,
                      records=self.records + other.records)

    @property
    def first_failure(self) -> CheckRecord | None:
        return next(iter(self.failed), None)

    def as_records(self, timings: bool = False) -> list[dict]:
        """
        Flat rows, one per check, for the machine-readable report.

        Args:
            timings: Include the elapsed time column.

        Returns:
            List of dictionaries in declaration order.
        """
        rows = []
        for record in self.records:
            witness = record.witness or Witness()
            row = {'subject': self.subject,
                   'check': record.name,
                   'status': record.status,
                   'severity': record.severity,
                   'at': ' '.join(witness.at),
                   'lhs': witness.lhs or '',
                   'rhs': witness.rhs or '',
                   'message': witness.message or ''}
            if timings:
                row['elapsed'] = record.elapsed
            rows.append(row)
        return rows
