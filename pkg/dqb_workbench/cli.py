"""
The ``dqb`` command line.

Objects are referenced as ``file.qk#name``; without a name every object of
the requested kind in the file is used. Exit status is 0 when all checks
pass, 1 when a check fails or a construction is impossible and 2 on usage
or input errors.
"""
import argparse
import io
import logging
import sys
from typing import Sequence

import pandas as pd
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from dqb_workbench.base import (NotFound, ParseError, PreconditionError,
                                WorkbenchError)
from dqb_workbench.bosonization import (ProjectionData, bosonize,
                                        check_projection, check_splitting,
                                        split)
from dqb_workbench.crossed import crossed_to_yd, yd_to_crossed
from dqb_workbench.dqb import check_dqb, from_group_cocycle
from dqb_workbench.exact import Field
from dqb_workbench.graded import coradical_filtration, gr_projection
from dqb_workbench.preantipode import check_preantipode, solve_preantipode
from dqb_workbench.qkformat import LinearMap, Workspace, dump, load, validate
from dqb_workbench.schemas import CheckRecord, Report, Witness
from dqb_workbench.yd import check_braided_bialgebra

logger = logging.getLogger(__name__)

CHECK_KINDS = {
    'coalgebra': ('coalgebra',),
    'dqb': ('dqb',),
    'yd': ('yd', 'comodule'),
    'trimodule': ('trimodule',),
    'braided': ('braided',),
    'crossed': ('crossed',),
}


class Session:
    """
    Loaded files, each read once so that references into the same file
    share their objects.
    """

    def __init__(self, field: Field | None = None, check: bool = True):
        self.field = field
        self.check = check
        self._files: dict[str, Workspace] = {}

    def workspace(self, path: str) -> Workspace:
        if path not in self._files:
            logger.info(f'Reading {path}.')
            self._files[path] = load(path, self.field, self.check)
        return self._files[path]

    def resolve(self, ref: str, *kinds: str) -> list[tuple[str, Workspace]]:
        """
        All objects a reference names, as ``(name, workspace)`` pairs.

        Raises:
            NotFound: Nothing of the requested kinds is referenced.
        """
        path, _, name = ref.partition('#')
        ws = self.workspace(path)
        if name:
            ws.get(name, kinds or None)
            return [(name, ws)]
        names = ws.of_kind(*kinds) if kinds else ws.names
        if not names:
            raise NotFound(f'No {" or ".join(kinds)} in {path}.')
        return [(n, ws) for n in names]

    def one(self, ref: str, *kinds: str) -> tuple[str, Workspace]:
        found = self.resolve(ref, *kinds)
        if len(found) > 1:
            raise NotFound(f'{ref} is ambiguous, name one of '
                           f'{[n for n, _ in found]}.')
        return found[0]


def merge(command: str, reports: Sequence[Report]) -> Report:
    """
    One report for a command, check names prefixed by their subject when
    several subjects are involved.
    """
    if len(reports) == 1:
        return Report(subject=reports[0].subject, command=command,
                      records=reports[0].records)
    records = [record.model_copy(
        update={'name': f'{report.subject}: {record.name}'})
        for report in reports for record in report.records]
    return Report(subject=command, command=command, records=records)


def _failure(subject: str, name: str, message: str) -> Report:
    return Report(subject=subject, records=[CheckRecord(
        name=name, status='fail', witness=Witness(message=message))])


def _named_map(ws: Workspace, name: str, f, source: str,
               target: str) -> None:
    ws.add(name, LinearMap(source=source, target=target, matrix=f.matrix))


def _write(ws: Workspace, out: str | None) -> None:
    if out:
        dump(ws, out)
        logger.info(f'Wrote {out}.')


def cmd_check(args, session: Session) -> Report:
    reports = []
    for name, ws in session.resolve(args.ref, *CHECK_KINDS[args.kind]):
        report = validate(ws, name)
        reports.append(report)
    return merge(args.command_line, reports)


def cmd_solve(args, session: Session) -> Report:
    name, ws = session.one(args.ref, 'dqb')
    H = ws.get(name)
    solution = solve_preantipode(H)
    if solution is None:
        return _failure(name, 'preantipode exists',
                        'no preantipode (system inconsistent)')
    logger.info(f'Preantipode of {name} found, solution space of '
                f'dimension {solution.freedom}.')
    report = check_preantipode(H, solution.S)
    out = Workspace(field=ws.field)
    out.add(name, H)
    out.add(args.name or f'S_{name}', solution.S, over=name,
            kind='preantipode')
    _write(out, args.out)
    return report


def cmd_bosonize(args, session: Session) -> Report:
    h_name, h_ws = session.one(args.H, 'dqb')
    r_name, r_ws = session.one(args.R, 'braided')
    H, R = h_ws.get(h_name), r_ws.get(r_name)
    if R.H is not H:
        raise PreconditionError(f'{r_name} is not built over {h_name}.')
    b = bosonize(H, R)
    out = Workspace(field=h_ws.field)
    out.add(h_name, H)
    out.add(r_name, R, over=h_name)
    out.add(args.name, b.B, provenance=(h_name, r_name))
    _named_map(out, f'{args.name}_sigma', b.sigma, h_name, args.name)
    _named_map(out, f'{args.name}_pi', b.pi, args.name, h_name)
    _write(out, args.out)
    return check_dqb(b.B, args.name)


def cmd_split(args, session: Session) -> Report:
    a_name, ws = session.one(args.A, 'dqb')
    h_name, h_ws = session.one(args.H, 'dqb')
    sigma_name, sigma_ws = session.one(args.sigma, 'map')
    pi_name, pi_ws = session.one(args.pi, 'map')
    try:
        p = ProjectionData(A=ws.get(a_name), H=h_ws.get(h_name),
                           sigma=sigma_ws.morphism(sigma_name),
                           pi=pi_ws.morphism(pi_name))
    except ValidationError as err:
        raise PreconditionError(f'Not a projection: {err}') from err
    if args.preantipode:
        s_name, s_ws = session.one(args.preantipode, 'preantipode')
        S = s_ws.get(s_name)
    else:
        solution = solve_preantipode(p.H)
        if solution is None:
            return _failure(h_name, 'preantipode exists',
                            'no preantipode (system inconsistent)')
        S = solution.S
    s = split(p, S)
    out = Workspace(field=ws.field)
    out.add(h_name, p.H)
    out.add(args.name, s.R, over=h_name)
    _write(out, args.out)
    return merge(args.command_line, [check_projection(p),
                                     check_splitting(p, s),
                                     check_braided_bialgebra(s.R)])


def cmd_gr(args, session: Session) -> Report:
    name, ws = session.one(args.A, 'dqb')
    A = ws.get(name)
    grouplikes = None
    if args.grouplikes:
        grouplikes = [{A.index(label): A.field.one}
                      for label in args.grouplikes.split(',')]
    F = coradical_filtration(A, grouplikes)
    p = gr_projection(A, F)
    gr, base = f'gr_{name}', f'{name}_0'
    out = Workspace(field=ws.field)
    out.add(gr, p.A)
    out.add(base, p.H)
    _named_map(out, f'{gr}_sigma', p.sigma, base, gr)
    _named_map(out, f'{gr}_pi', p.pi, gr, base)
    _write(out, args.out)
    return merge(args.command_line, [check_dqb(p.A, gr),
                                     check_projection(p)])


def cmd_from_group(args, session: Session) -> Report:
    name, ws = session.one(args.ref, 'group')
    H = from_group_cocycle(ws.get(name))
    out = Workspace(field=ws.field)
    out.add(name, ws.get(name))
    out.add(args.name or f'k{name}', H)
    _write(out, args.out)
    return check_dqb(H, args.name or f'k{name}')


def cmd_convert(args, session: Session) -> Report:
    if args.direction == 'crossed2yd':
        name, ws = session.one(args.ref, 'crossed')
        V = ws.get(name)
        group = ws.bases[name]
        W = crossed_to_yd(V)
        out = Workspace(field=ws.field)
        out.add(group, V.group)
        out.add(f'k{group}', W.H)
        out.add(args.name or f'{name}_yd', W)
        report = validate(out, args.name or f'{name}_yd')
    else:
        if not args.group:
            raise PreconditionError('yd2crossed needs --group.')
        name, ws = session.one(args.ref, 'yd')
        group_name, group_ws = session.one(args.group, 'group')
        V = yd_to_crossed(ws.get(name), group_ws.get(group_name))
        out = Workspace(field=ws.field)
        out.add(group_name, V.group)
        out.add(args.name or f'{name}_crossed', V, over=group_name)
        report = validate(out, args.name or f'{name}_crossed')
    _write(out, args.out)
    return report


def cmd_suite(args, session: Session) -> Report:
    ws = session.workspace(args.file)
    reports = [r for r in (validate(ws, name) for name in ws.names)
               if r is not None]
    for name in ws.of_kind('dqb'):
        solution = solve_preantipode(ws.get(name))
        if solution is None:
            reports.append(_failure(name, 'preantipode exists',
                                    'no preantipode (system inconsistent)'))
        else:
            reports.append(check_preantipode(ws.get(name), solution.S))
    return merge(args.command_line, reports)


def add_common_options(parser: argparse.ArgumentParser,
                       suppress: bool = False) -> None:
    """
    Options accepted before and after the command name.
    """
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument('--field', type=Field.parse, default=default(None),
                        help='Read all scalars in this field (Q or F<p>).')
    parser.add_argument('--out', default=default(None),
                        help='Write constructed objects to this .qk file.')
    parser.add_argument('--format', choices=['text', 'records'],
                        default=default('text'), help='Report format.')
    parser.add_argument('--verbose', '-v', action='count',
                        default=default(0),
                        help='More log output; repeat for debug output.')
    parser.add_argument('--timings', action='store_true',
                        default=default(False),
                        help='Report the time spent in each check.')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dqb',
        description='Exact checks and constructions for finite dimensional '
                    'dual quasi-bialgebras.')
    add_common_options(parser)
    common = argparse.ArgumentParser(add_help=False)
    add_common_options(common, suppress=True)
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser(
        'check', parents=[common], help='Run the axioms of an object.')
    check.add_argument('kind', choices=sorted(CHECK_KINDS))
    check.add_argument('ref')
    check.set_defaults(run=cmd_check, load_checked=False)

    solve = commands.add_parser(
        'solve', parents=[common], help='Solve for a preantipode.')
    solve.add_argument('what', choices=['preantipode'])
    solve.add_argument('ref')
    solve.add_argument('--name', default=None)
    solve.set_defaults(run=cmd_solve)

    boson = commands.add_parser(
        'bosonize', parents=[common], help='Build R#H.')
    boson.add_argument('H')
    boson.add_argument('R')
    boson.add_argument('--name', default='B')
    boson.set_defaults(run=cmd_bosonize)

    splitting = commands.add_parser(
        'split', parents=[common], help='Recover R from a projection A → H.')
    splitting.add_argument('A')
    splitting.add_argument('H')
    splitting.add_argument('sigma')
    splitting.add_argument('pi')
    how = splitting.add_mutually_exclusive_group()
    how.add_argument('--preantipode', default=None)
    how.add_argument('--solve', action='store_true',
                     help='Solve for a preantipode of H (default).')
    splitting.add_argument('--name', default='R')
    splitting.set_defaults(run=cmd_split)

    graded = commands.add_parser(
        'gr', parents=[common],
        help='Associated graded of the coradical filtration.')
    graded.add_argument('A')
    graded.add_argument('--grouplikes', default=None,
                        help='Comma separated basis labels of the '
                             'grouplikes.')
    graded.set_defaults(run=cmd_gr)

    group = commands.add_parser(
        'from-group', parents=[common], help='Build k^θG.')
    group.add_argument('ref')
    group.add_argument('--name', default=None)
    group.set_defaults(run=cmd_from_group)

    convert = commands.add_parser(
        'convert', parents=[common],
        help='Crossed modules and Yetter-Drinfeld modules.')
    convert.add_argument('direction', choices=['yd2crossed', 'crossed2yd'])
    convert.add_argument('ref')
    convert.add_argument('--group', default=None)
    convert.add_argument('--name', default=None)
    convert.set_defaults(run=cmd_convert)

    suite = commands.add_parser(
        'suite', parents=[common], help='Check every object in a file.')
    suite.add_argument('file')
    suite.set_defaults(run=cmd_suite, load_checked=False)
    return parser


def render(report: Report, fmt: str = 'text', timings: bool = False) -> str:
    """
    Human readable table or CSV records of a report.
    """
    if fmt == 'records':
        buffer = io.StringIO()
        pd.DataFrame(report.as_records(timings)).to_csv(buffer, index=False)
        return buffer.getvalue()
    table = Table(title=report.command or report.subject)
    columns = ['check', 'status', 'at', 'lhs', 'rhs', 'message']
    if timings:
        columns.append('elapsed')
    for column in columns:
        table.add_column(column)
    for row in report.as_records(timings):
        if timings:
            row['elapsed'] = f'{row["elapsed"]:.3f}s'
        table.add_row(*(str(row[c]) for c in columns))
    console = Console(file=io.StringIO(), width=120)
    console.print(table)
    console.print(f'overall: {report.status}')
    return console.file.getvalue()


def configure_logging(verbose: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(message)s',
                        handlers=[RichHandler(
                            console=Console(stderr=True))], force=True)


def execute(args: argparse.Namespace) -> tuple[Report, int]:
    """
    Run a parsed command.

    Returns:
        The report and the exit status.
    """
    session = Session(args.field, getattr(args, 'load_checked', True))
    try:
        report = args.run(args, session)
    except (ParseError, NotFound, OSError) as err:
        logger.error(str(err))
        return _failure(args.command_line, 'input', str(err)), 2
    except PreconditionError as err:
        logger.error(str(err))
        report = err.report or _failure(args.command_line, 'precondition',
                                        str(err))
        return merge(args.command_line, [report]), 1
    except WorkbenchError as err:
        logger.error(str(err))
        return _failure(args.command_line, 'construction', str(err)), 1
    report = Report(subject=report.subject, command=args.command_line,
                    records=report.records)
    return report, 0 if report.passed else 1


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.command_line = ' '.join(argv)
    return args


def run(argv: Sequence[str] | None = None) -> tuple[Report, int]:
    """
    Execute one command line; usage errors exit with status 2.
    """
    return execute(parse_args(argv))


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    configure_logging(args.verbose)
    report, status = execute(args)
    sys.stdout.write(render(report, args.format, args.timings))
    return status
