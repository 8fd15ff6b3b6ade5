import argparse
import os.path as osp
import sys

import mmcv

from wcgkit import __version__
from wcgkit.apis import (Scenario, get_root_logger, run_scenario,
                         set_random_seed)
from wcgkit.core import (InfeasibleError, NonConvergenceError, ScenarioError,
                         UnboundedError, build_eps_lp, build_lp, ds_indices,
                         initial_marginal, initial_states,
                         print_index_summary, print_lp_summary,
                         print_sweep_summary, print_validation_report,
                         solve_eps_lp, solve_lp, validate_instance)
from wcgkit.instances import build_instance

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        prog='wcg', description='Weakly coupled gang toolkit')
    parser.add_argument(
        '--version', action='version', version='wcg {}'.format(__version__))
    parser.add_argument(
        '--log-level', default='INFO', help='root logger level')
    subparsers = parser.add_subparsers(dest='command')

    validate = subparsers.add_parser(
        'validate', help='check an instance file or a scenario')
    validate.add_argument('file', help='instance JSON or scenario config')

    indices = subparsers.add_parser(
        'indices', help='MP indices of every class by the DS algorithm')
    indices.add_argument('file', help='instance JSON or generator config')
    indices.add_argument('--out-dir', help='dir to dump the index tables')

    lp = subparsers.add_parser('lp', help='solve the occupancy LP')
    lp.add_argument('file', help='instance JSON or generator config')
    lp.add_argument(
        '--eps',
        type=float,
        default=None,
        help='solve the robust LP with this box budget around the model')
    lp.add_argument(
        '--horizon',
        type=int,
        default=None,
        help='LP horizon T, the instance horizon by default')
    lp.add_argument(
        '--exact', action='store_true', help='rational arithmetic simplex')
    lp.add_argument('--out-dir', help='dir to dump the LP and its solution')

    for name, help_text in [('run', 'one seed per sweep cell'),
                            ('sweep', 'the full replication sweep')]:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument('scenario', help='scenario config file')
        sub.add_argument(
            '--seed',
            type=int,
            default=None,
            help='master seed; offsets the seed grid of a sweep')
        sub.add_argument('--out-dir', help='dir to save metrics')
        sub.add_argument(
            '--threads', type=int, default=1, help='worker processes')
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        parser.exit(EXIT_INVALID)
    return args


def _print_diagnostics(err):
    print('error: {}'.format(err), file=sys.stderr)
    for line in err.diagnostics:
        print('  {}'.format(line), file=sys.stderr)


def validate(args, logger):
    if args.file.endswith('.py'):
        scenario = Scenario.fromfile(args.file)
        logger.info('scenario %s is valid (hash %s)', scenario.name,
                    scenario.hash)
        return EXIT_OK
    inst = build_instance(args.file)
    report = validate_instance(inst, check_ergodicity=True)
    print_validation_report(report)
    return EXIT_OK if report.is_valid else EXIT_INVALID


def indices(args, logger):
    inst = build_instance(args.file)
    tables = ds_indices(inst)
    print_index_summary(tables)
    if args.out_dir:
        mmcv.mkdir_or_exist(args.out_dir)
        filename = osp.join(args.out_dir, 'indices.json')
        mmcv.dump([t.to_dict() for t in tables], filename, indent=2)
        logger.info('index tables saved to %s', filename)
    return EXIT_OK


def lp(args, logger):
    inst = build_instance(args.file)
    horizon = args.horizon if args.horizon is not None else inst.horizon
    if horizon is None:
        raise ScenarioError('the instance has no horizon, pass --horizon')
    x0 = initial_marginal(inst, states=initial_states(inst))
    if args.eps is None:
        problem = build_lp(inst, x0, horizon, initial='state')
        solution = solve_lp(problem, exact=args.exact)
    else:
        problem = build_eps_lp(
            inst, [c.kernels for c in inst.classes],
            [c.rewards for c in inst.classes],
            args.eps,
            x0,
            horizon,
            initial='state')
        solution = solve_eps_lp(problem, exact=args.exact)
    print_lp_summary(solution, scale=inst.scale)
    if args.out_dir:
        mmcv.mkdir_or_exist(args.out_dir)
        solution.dump(osp.join(args.out_dir, 'solution.json'))
        if args.eps is None:
            problem.dump_text(osp.join(args.out_dir, 'problem.lp'))
        logger.info('LP results saved to %s', args.out_dir)
    solution.check()
    return EXIT_OK


def run(args, logger):
    scenario = Scenario.fromfile(args.scenario)
    if args.command == 'run':
        seeds = [args.seed if args.seed is not None else scenario.seeds[0]]
    else:
        offset = args.seed or 0
        seeds = [offset + seed for seed in scenario.seeds]
    out_dir = args.out_dir or scenario.work_dir
    mmcv.mkdir_or_exist(out_dir)
    logger = get_root_logger(
        scenario.cfg.get('log_level', args.log_level),
        log_file=osp.join(out_dir, '{}.log'.format(args.command)))
    set_random_seed(seeds[0])
    logger.info('%s %s: %d seeds, scales %s, horizons %s', args.command,
                scenario.name, len(seeds), scenario.scales, scenario.horizons)
    frame = run_scenario(scenario, seeds=seeds, nproc=args.threads)
    csv_file, json_file = frame.dump(out_dir)
    print_sweep_summary(frame.aggregate())
    logger.info('metrics saved to %s and %s', csv_file, json_file)
    return EXIT_OK


COMMANDS = dict(
    validate=validate, indices=indices, lp=lp, run=run, sweep=run)


def main(argv=None):
    args = parse_args(argv)
    logger = get_root_logger(args.log_level)
    try:
        return COMMANDS[args.command](args, logger)
    except ScenarioError as err:
        _print_diagnostics(err)
        return EXIT_INVALID
    except (InfeasibleError, UnboundedError, NonConvergenceError) as err:
        print('solver failure: {}'.format(err), file=sys.stderr)
        return EXIT_SOLVER
    except (IOError, ValueError, KeyError, TypeError) as err:
        print('error: {}'.format(err), file=sys.stderr)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
