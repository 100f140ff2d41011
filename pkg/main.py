"""Main entry point for the sensor-array design toolkit."""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from src import __version__
from src.cli import RunConfig, cmd_bounds, cmd_design, cmd_mc, cmd_verify
from src.core.errors import ArrayDesignError
from src.utils.config import Config
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the design, bounds, mc and verify subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help='YAML run configuration (defaults to the built-in experiment)')
    common.add_argument('--out', type=Path, help='Output directory (overrides output_dir)')
    common.add_argument('--seed', type=int, help='Random seed (overrides seed)')
    common.add_argument('--threads', type=int, help='Worker threads; affects speed only')

    parser = argparse.ArgumentParser(
        description='Design sensor arrays by greedy mutual-information maximization'
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('design', parents=[common], help='Compute designs for every configured SNR')

    bounds = sub.add_parser('bounds', parents=[common], help='Evaluate bounds for a design file')
    bounds.add_argument('design_file', type=Path)

    mc = sub.add_parser('mc', parents=[common], help='Monte-Carlo MSE of design files')
    mc.add_argument('design_files', type=Path, nargs='+')

    verify = sub.add_parser('verify', parents=[common], help='Run the property suites')
    verify.add_argument('--trials', type=int, help='Random triples per objective suite')
    verify.add_argument('--instances', type=int, help='Small instances per oracle suite')

    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Read the run configuration and apply command-line overrides."""
    config = RunConfig.from_yaml(args.config) if args.config else RunConfig()
    return config.with_overrides(seed=args.seed)


def run(argv: Optional[List[str]] = None) -> int:
    """
    Execute one subcommand.

    Returns:
        Process exit code (0 ok, 1 config error, 2 numerical failure, 3 verification failure)
    """
    args = build_parser().parse_args(argv)

    try:
        Config.validate()
        if args.threads is not None and args.threads < 1:
            raise ValueError("--threads must be at least 1")
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        return 1

    try:
        config = load_config(args)

        if args.command == 'design':
            for path in cmd_design(config, args.out):
                print(path)
        elif args.command == 'bounds':
            print(cmd_bounds(config, args.design_file, args.out))
        elif args.command == 'mc':
            print(cmd_mc(config, args.design_files, args.out, threads=args.threads))
        elif args.command == 'verify':
            report = cmd_verify(config, args.out, trials=args.trials, instances=args.instances)
            for name, result in report['suites'].items():
                print(f"{name},{'pass' if result['passed'] else 'fail'},{result['checks']},{result['worst_margin']!r}")

    except ArrayDesignError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        return 2

    return 0


if __name__ == "__main__":
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)
