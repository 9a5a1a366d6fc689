import argparse
import os
import sys


def init_cli():
    # init argument parsing
    # for all command line parameters we set the default to an environment variable,
    # so they can also be specified that way
    parser = argparse.ArgumentParser(description='Data-driven synthesis of safe polynomial controllers.')
    parser.add_argument('command', type=str, choices=['simulate', 'overapprox', 'synth', 'verify', 'demo-platoon'])

    # config and output
    parser.add_argument('--config', type=str, help='Configuration file', default=os.environ.get('PYSAFESET_CONFIG'))
    parser.add_argument('--out', type=str, help='Output directory', default=os.environ.get('PYSAFESET_OUT'))

    # overrides
    parser.add_argument('--solver-tol', type=float, help='Feasibility tolerance of SDP solver')
    parser.add_argument('--max-iter', type=int, help='Maximum number of outer iterations')

    # logging
    parser.add_argument('--log-level', type=str, choices=['critical', 'error', 'warning', 'info', 'debug'],
                        default=os.environ.get('PYSAFESET_LOG_LEVEL', 'info'))
    parser.add_argument('-l', '--log-file', type=str, help='file to write log into',
                        default=os.environ.get('PYSAFESET_LOG_FILE'))
    parser.add_argument('--log-rotate', action='store_true', help='rotate logs automatically',
                        default=os.environ.get('PYSAFESET_LOG_ROTATE') in ['yes', 'true'])

    # return it
    return parser


def parse_cli(parser: argparse.ArgumentParser, args=None):
    # parse args
    args = parser.parse_args(args)

    # get full path of config
    if args.config:
        args.config = os.path.abspath(args.config)

    # finished
    return vars(args)


def run(command: str, config: str = None, out: str = None, solver_tol: float = None, max_iter: int = None,
        log_file: str = None, log_level: str = 'info', log_rotate: bool = False) -> int:
    """Run a pysafeset stage with the given options.

    Returns:
        Exit code.
    """
    from pysafeset.application import Application

    # create app and run it
    app = Application(log_file, log_level, log_rotate)
    return app.run(command, config, out, solver_tol, max_iter)


def main(args=None) -> int:
    return run(**parse_cli(init_cli(), args))


if __name__ == '__main__':
    sys.exit(main())
