import logging

from .exceptions import ConfigError, InfeasibleError, RankDeficientError
from .pipeline import PipelineConfig, cmd_simulate, cmd_overapprox, cmd_synth, cmd_verify, cmd_demo_platoon
from .utils.logger import setup_logger

log = None

# stages by subcommand
COMMANDS = {
    'simulate': cmd_simulate,
    'overapprox': cmd_overapprox,
    'synth': cmd_synth,
    'verify': cmd_verify
}

# exit codes
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2


class Application:
    """Class for running a pipeline stage from the command line."""

    def __init__(self, log_file: str = None, log_level: str = 'info', log_rotate: bool = False):
        """Initializes a pysafeset application.

        Args:
            log_file: Name of log file, if any.
            log_level: Logging level.
            log_rotate: Whether to rotate the log files.
        """
        setup_logger(log_file, log_level, log_rotate)

        # set logger
        global log
        log = logging.getLogger(__name__)

    def run(self, command: str, config: str = None, out: str = None, solver_tol: float = None,
            max_iter: int = None) -> int:
        """Actually run a stage.

        Args:
            command: Name of stage, one of simulate, overapprox, synth, verify or demo-platoon.
            config: Name of config file, optional for demo-platoon.
            out: Output directory (overrides the one in config).
            solver_tol: Feasibility tolerance of the SDP solver (overrides the one in config).
            max_iter: Maximum number of outer iterations (overrides the one in config).

        Returns:
            Exit code, 0 on success, 2 if a problem was infeasible, the data insufficient or a check failed,
            and 1 on any other error.
        """

        # everything in a try/except/finally, so that we always report
        try:
            if command == 'demo-platoon':
                cfg = PipelineConfig.from_file(config) if config else None
                passed = cmd_demo_platoon(out if out is not None else 'out', solver_tol, max_iter, cfg)

            elif command in COMMANDS:
                if not config:
                    raise ConfigError(['config: no configuration file given'])
                cfg = PipelineConfig.from_file(config).validate().with_overrides(solver_tol, max_iter)
                log.info('Running stage %s...', command)
                passed = COMMANDS[command](cfg, cfg.output(out))

            else:
                raise ValueError('Unknown command "%s".' % command)

            # finished
            if not passed:
                log.error('Checks failed.')
                return EXIT_FAILED
            log.info('Finished successfully.')
            return EXIT_OK

        except ConfigError as e:
            log.error(str(e))
            return EXIT_ERROR

        except (InfeasibleError, RankDeficientError) as e:
            log.error('%s', e)
            if isinstance(e, InfeasibleError) and e.diagnostic:
                log.error('Diagnostic: %s', e.diagnostic)
            return EXIT_FAILED

        except:
            # some exception was thrown
            log.exception('Something went wrong.')
            return EXIT_ERROR

        finally:
            log.info('Shutting down...')


__all__ = ['Application', 'EXIT_OK', 'EXIT_ERROR', 'EXIT_FAILED']
