"""
Command-line interface for qmachine.

Subcommands print probability tables, run seeded Monte Carlo checks of
the machine and the rod model, and audit state property spaces against
the lattice axioms. Numeric output is CSV with 17 significant digits, a
header row and a trailing ``# seed=..., version=...`` comment; axiom
reports are JSON.

Exit status: 0 on success, 1 when a check or invariant fails, 2 on bad
input.

Example:
    $ qmachine probe --grid 181 --out probe.csv
    $ qmachine bell --trials 1000000 --seed 7 --chsh
    $ qmachine coproduct --builtin mo2 mo2 --out mo2_coproduct.json
    $ qmachine lattice --in mo2_coproduct.json
"""
import argparse
import csv
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import IO, Iterator, List, Optional, Sequence, Tuple

from . import __version__
from .compound import chsh_value, estimate_correlation, quantum_correlation
from .constants import (CHSH_TOLERANCE_FACTOR, CORRELATION_TOLERANCE_FACTOR, CSV_FLOAT_FORMAT,
                        DEFAULT_BELL_GRID, DEFAULT_EPSILON_GRID, DEFAULT_EPSILONS,
                        DEFAULT_PROBE_GRID, DEFAULT_SEED, DEFAULT_TRIALS, EXIT_INPUT,
                        EXIT_INVARIANT, EXIT_OK, FREQUENCY_TOLERANCE_FACTOR, LOG_FORMAT,
                        PROBE_AZIMUTH, UNIT_TOLERANCE)
from .exceptions import (CapExceededError, DomainError, InvariantViolationError,
                         PreconditionError, QMachineError, SpsFormatError)
from .geometry import Direction, Vec3
from .hilbert import (born_probability, density_from_ball_point, projector_for, spin_state,
                      trace_probability)
from .lattice import (boolean_complement, boolean_lattice, hexagon, hexagon_ortho, mo_lattice,
                      mo_ortho)
from .machine import (BallPoint, MachineExperiment, epsilon_probability, run_trials,
                      transition_probability)
from .sampling import derive_seed, validate_seed
from .spa import FiniteStatePropertySpace, axiom_report, build_spin_sps, coproduct, \
    sps_from_lattice
from .sps_format import SpsDocument

logger = logging.getLogger(__name__)

COMMANDS = ("probe", "simulate", "epsilon", "bell", "lattice", "coproduct")
BUILTINS = ("spin4", "boolean3", "hexagon", "mo2", "mo3", "mo4")
DEFAULT_GAMMAS = (0.0, math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi)
CHSH_ANGLES = (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    out: Optional[str] = None
    grid: Optional[int] = None
    epsilons: Tuple[float, ...] = DEFAULT_EPSILONS
    gammas: Tuple[float, ...] = DEFAULT_GAMMAS
    inputs: Tuple[str, ...] = ()
    builtins: Tuple[str, ...] = ()
    chsh: bool = False
    tolerance: Optional[float] = None
    workers: Optional[int] = None
    report: Optional[str] = None
    verbose: bool = False

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise DomainError("Unknown command", argument="command", value=self.command)
        if self.trials < 1:
            raise DomainError("Number of trials must be positive", argument="--trials",
                              value=self.trials, expected="n >= 1")
        validate_seed(self.seed)
        if self.grid is not None and self.grid < 2:
            raise DomainError("Grid needs at least two points", argument="--grid",
                              value=self.grid, expected=">= 2")
        if self.tolerance is not None and not self.tolerance > 0:
            raise DomainError("Tolerance must be positive", argument="--tolerance",
                              value=self.tolerance)
        if self.workers is not None and self.workers < 1:
            raise DomainError("Worker count must be positive", argument="--workers",
                              value=self.workers)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            seed=args.seed,
            trials=args.trials,
            out=args.out,
            grid=getattr(args, "grid", None),
            epsilons=tuple(getattr(args, "epsilon", None) or DEFAULT_EPSILONS),
            gammas=tuple(getattr(args, "gamma", None) or DEFAULT_GAMMAS),
            inputs=tuple(getattr(args, "inputs", None) or ()),
            builtins=tuple(getattr(args, "builtin", None) or ()),
            chsh=getattr(args, "chsh", False),
            tolerance=args.tolerance,
            workers=args.workers,
            report=getattr(args, "report", None),
            verbose=args.verbose
        )

    def band(self, factor: float) -> float:
        """Monte Carlo acceptance band: --tolerance, or factor / sqrt(trials)."""
        if self.tolerance is not None:
            return self.tolerance
        return factor / math.sqrt(self.trials)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true', help='Enable verbose logging')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED,
                        help='Master seed, an unsigned 64-bit integer (default: {})'.format(DEFAULT_SEED))
    common.add_argument('--trials', type=int, default=DEFAULT_TRIALS,
                        help='Monte Carlo trials per data point (default: {})'.format(DEFAULT_TRIALS))
    common.add_argument('--out', type=str, help='Output file (default: stdout)')
    common.add_argument('--workers', type=int, help='Sampling threads (default: CPU count)')
    common.add_argument('--tolerance', type=float,
                        help='Monte Carlo acceptance band (default: a multiple of 1/sqrt(trials))')

    parser = argparse.ArgumentParser(
        description='qmachine - hidden-measurement model of spin one-half and its quantum axiomatics')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', help='Command to run')

    probe = subparsers.add_parser('probe', parents=[common],
                                  help='Compare machine, Born and trace-rule probabilities')
    probe.add_argument('--grid', type=int, default=DEFAULT_PROBE_GRID,
                       help='Number of angles in [0, pi] (default: {})'.format(DEFAULT_PROBE_GRID))

    simulate = subparsers.add_parser('simulate', parents=[common],
                                     help='Monte Carlo runs of the quantum machine')
    simulate.add_argument('--gamma', type=float, nargs='+',
                          help='Angles between state and experiment, in radians')

    epsilon = subparsers.add_parser('epsilon', parents=[common],
                                    help='Sweep the elastic width epsilon')
    epsilon.add_argument('--epsilon', type=float, nargs='+', help='Elastic widths in (0, 1]')
    epsilon.add_argument('--grid', type=int, default=DEFAULT_EPSILON_GRID,
                         help='Number of projections x in [-1, 1] (default: {})'.format(DEFAULT_EPSILON_GRID))

    bell = subparsers.add_parser('bell', parents=[common], help='Rod-model correlations and CHSH')
    bell.add_argument('--grid', type=int, default=DEFAULT_BELL_GRID,
                      help='Number of coplanar angles per side (default: {})'.format(DEFAULT_BELL_GRID))
    bell.add_argument('--chsh', action='store_true', help='Also estimate the CHSH value S')

    lattice = subparsers.add_parser('lattice', parents=[common],
                                    help='Axiom report for a state property space')
    source = lattice.add_mutually_exclusive_group(required=True)
    source.add_argument('--in', dest='inputs', nargs=1, metavar='PATH', help='SPS document')
    source.add_argument('--builtin', nargs=1, choices=BUILTINS, help='Built-in system')

    compound = subparsers.add_parser('coproduct', parents=[common],
                                     help='Build and audit the coproduct of two systems')
    source = compound.add_mutually_exclusive_group(required=True)
    source.add_argument('--in', dest='inputs', nargs=2, metavar='PATH', help='Two SPS documents')
    source.add_argument('--builtin', nargs=2, choices=BUILTINS, help='Two built-in systems')
    compound.add_argument('--report', type=str, help='Axiom report destination (default: stdout)')

    return parser.parse_args(argv)


def builtin_system(name: str) -> FiniteStatePropertySpace:
    """Named example systems used by the lattice and coproduct commands."""
    if name == "spin4":
        dirs = [Direction(Vec3(1.0, 0.0, 0.0)), Direction(Vec3(-1.0, 0.0, 0.0)),
                Direction(Vec3(0.0, 0.0, 1.0)), Direction(Vec3(0.0, 0.0, -1.0))]
        return build_spin_sps(dirs, interior=[BallPoint.center()], require_negation_closed=True)
    if name == "boolean3":
        lattice = boolean_lattice(3)
        return sps_from_lattice(lattice, boolean_complement(lattice))
    if name == "hexagon":
        lattice = hexagon()
        return sps_from_lattice(lattice, hexagon_ortho(lattice))
    if name in ("mo2", "mo3", "mo4"):
        n = int(name[2:])
        lattice = mo_lattice(n)
        return sps_from_lattice(lattice, mo_ortho(lattice) if n % 2 == 0 else None)
    raise DomainError("Unknown built-in system", argument="--builtin", value=name,
                      expected=", ".join(BUILTINS))


def _systems(config: RunConfig) -> List[FiniteStatePropertySpace]:
    if config.inputs:
        return [SpsDocument.read(path) for path in config.inputs]
    return [builtin_system(name) for name in config.builtins]


@contextmanager
def _output(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _fmt(x: float) -> str:
    return format(x, CSV_FLOAT_FORMAT)


def _write_csv(config: RunConfig, header: Sequence[str], rows: Sequence[Sequence],
               notes: Sequence[str] = ()) -> None:
    with _output(config.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) if isinstance(x, float) else x for x in row])
        for note in notes:
            fh.write(f"# {note}\n")
        fh.write(f"# seed={config.seed}, version={__version__}\n")


def _z_experiment() -> Direction:
    return Direction.from_angles(0.0, 0.0)


def run_probe(config: RunConfig) -> int:
    u = _z_experiment()
    pu = projector_for(u)
    grid = config.grid or DEFAULT_PROBE_GRID
    rows, worst = [], 0.0
    for k in range(grid):
        gamma = math.pi * k / (grid - 1)
        v = Direction.from_angles(gamma, PROBE_AZIMUTH)
        w = BallPoint.surface(v)
        machine, _ = transition_probability(u, w)
        born = born_probability(spin_state(gamma, PROBE_AZIMUTH), pu)
        trace = trace_probability(density_from_ball_point(w), pu)
        analytic = math.cos(gamma / 2.0) ** 2
        diff = max(abs(x - y) for x in (machine, born, trace, analytic)
                   for y in (machine, born, trace, analytic))
        worst = max(worst, diff)
        rows.append((gamma, machine, born, trace, diff))
    _write_csv(config, ("gamma", "mu1_machine", "mu1_born", "mu1_trace", "max_abs_diff"), rows)
    if worst > UNIT_TOLERANCE:
        raise InvariantViolationError("Machine and Hilbert probabilities disagree",
                                      invariant="machine-hilbert equivalence",
                                      observed=worst, bound=UNIT_TOLERANCE)
    return EXIT_OK


def run_simulate(config: RunConfig) -> int:
    e = MachineExperiment(_z_experiment())
    band = config.band(FREQUENCY_TOLERANCE_FACTOR)
    rows, failed = [], []
    for k, gamma in enumerate(config.gammas):
        if not 0.0 <= gamma <= math.pi:
            raise DomainError("Angle out of range", argument="--gamma", value=gamma,
                              expected="[0, pi]")
        w = BallPoint.surface(Direction.from_angles(gamma, PROBE_AZIMUTH))
        report = run_trials(e, w, config.trials, derive_seed(config.seed, k), config.workers)
        diff = abs(report.freq_o1 - report.analytic_o1)
        if diff > band:
            failed.append(gamma)
        rows.append((gamma, report.n_trials, report.count_o1, report.count_o2,
                     report.freq_o1, report.analytic_o1, diff))
    _write_csv(config, ("gamma", "n_trials", "count_o1", "count_o2", "freq_o1", "analytic_o1",
                        "abs_diff"), rows)
    if failed:
        logger.error(f"Empirical frequency outside +/-{band:.3g} at gamma={failed}")
        return EXIT_INVARIANT
    return EXIT_OK


def run_epsilon(config: RunConfig) -> int:
    u = _z_experiment()
    band = config.band(FREQUENCY_TOLERANCE_FACTOR)
    grid = config.grid or DEFAULT_EPSILON_GRID
    rows, failed = [], []
    for i, eps in enumerate(config.epsilons):
        e = MachineExperiment(u, eps)
        for k in range(grid):
            x = -1.0 + 2.0 * k / (grid - 1)
            w = BallPoint(u.v * x)
            analytic, _ = epsilon_probability(e, w)
            quantum, _ = transition_probability(u, w)
            if eps == 1.0 and abs(analytic - quantum) > UNIT_TOLERANCE:
                raise InvariantViolationError("Quantum elastic differs from the Born rule",
                                              invariant="epsilon = 1 limit",
                                              observed=abs(analytic - quantum),
                                              bound=UNIT_TOLERANCE)
            report = run_trials(e, w, config.trials, derive_seed(config.seed, i, k),
                                config.workers)
            if abs(report.freq_o1 - analytic) > band:
                failed.append((eps, x))
            rows.append((eps, x, analytic, quantum, report.freq_o1))
    _write_csv(config, ("epsilon", "x", "mu1_analytic", "mu1_quantum", "freq_o1"), rows)
    if failed:
        logger.error(f"Empirical frequency outside +/-{band:.3g} at (epsilon, x)={failed}")
        return EXIT_INVARIANT
    return EXIT_OK


def _coplanar(theta: float) -> Direction:
    return Direction.from_angles(theta, 0.0)


def run_bell(config: RunConfig) -> int:
    band = config.band(CORRELATION_TOLERANCE_FACTOR)
    grid = config.grid or DEFAULT_BELL_GRID
    angles = [math.pi * k / (grid - 1) for k in range(grid)]
    rows, failed = [], []
    for i, alpha in enumerate(angles):
        for j, beta in enumerate(angles):
            a, b = _coplanar(alpha), _coplanar(beta)
            report = estimate_correlation(a, b, config.trials, derive_seed(config.seed, i, j),
                                          config.workers)
            expected = quantum_correlation(a, b)
            diff = abs(report.E - expected)
            if diff > band:
                failed.append((alpha, beta))
            rows.append((alpha, beta, report.E, expected, diff))
    notes = []
    if config.chsh:
        a, a2, b, b2 = (_coplanar(t) for t in CHSH_ANGLES)
        s = chsh_value(a, a2, b, b2, config.trials, derive_seed(config.seed, grid, grid),
                       config.workers)
        notes.append(f"S = {s:.6f}")
        # stdout carries the CSV when no --out is given
        print(f"S = {s:.6f}", file=sys.stdout if config.out else sys.stderr)
        chsh_band = config.band(CHSH_TOLERANCE_FACTOR)
        if abs(s - 2.0 * math.sqrt(2.0)) > chsh_band:
            logger.error(f"CHSH value {s:.6f} outside 2 sqrt(2) +/- {chsh_band:.3g}")
            failed.append("chsh")
    _write_csv(config, ("alpha", "beta", "E_rod", "E_qm", "abs_diff"), rows, notes)
    if failed:
        logger.error(f"Rod-model correlation outside +/-{band:.3g} at {failed}")
        return EXIT_INVARIANT
    return EXIT_OK


def _emit_report(text: str, path: Optional[str]) -> None:
    with _output(path) as fh:
        fh.write(text)


def _report_status(report) -> int:
    if report.violations:
        logger.error(f"Structural invariants violated: {report.violations}")
        return EXIT_INVARIANT
    if report.inconclusive:
        logger.error("Axiom report is inconclusive: a search exceeded its cap")
        return EXIT_INVARIANT
    if report.capped:
        capped = [name for name, v in {**report.axioms, **report.invariants}.items()
                  if v.holds and v.capped]
        logger.warning(f"{capped} hold on the capped family search only")
    return EXIT_OK


def run_lattice(config: RunConfig) -> int:
    (sps,) = _systems(config)
    report = axiom_report(sps)
    _emit_report(SpsDocument.pack_report(report), config.out)
    return _report_status(report)


def run_coproduct(config: RunConfig) -> int:
    first, second = _systems(config)
    sps = coproduct(first, second)
    if config.out is not None:
        SpsDocument.write(sps, config.out)
    report = axiom_report(sps)
    _emit_report(SpsDocument.pack_report(report), config.report)
    return _report_status(report)


HANDLERS = {
    "probe": run_probe,
    "simulate": run_simulate,
    "epsilon": run_epsilon,
    "bell": run_bell,
    "lattice": run_lattice,
    "coproduct": run_coproduct,
}


def dispatch(config: RunConfig) -> int:
    logger.debug(f"Running {config}")
    return HANDLERS[config.command](config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the CLI."""
    args = parse_args(argv)
    if args.command is None:
        print("No command specified. Use --help for usage.", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format=LOG_FORMAT)
    try:
        return dispatch(RunConfig.from_args(args))
    except (DomainError, SpsFormatError, PreconditionError) as e:
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolationError, CapExceededError) as e:
        print(f"Check failed: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except QMachineError as e:
        print(f"Fatal error: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == '__main__':
    sys.exit(main())
