"""
Shared base for the sampler's management commands.

Usage errors exit with status 1 like every other failure, instead of
argparse's status 2.
"""

import sys

from django.core.management import CommandError
from django.core.management.base import BaseCommand


class SamplerCommand(BaseCommand):
    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # CommandParser raises CommandError instead of exiting when this is unset
        parser.called_from_command_line = False
        return parser

    def run_from_argv(self, argv):
        # Django parses argv outside its own CommandError handler
        try:
            super().run_from_argv(argv)
        except CommandError as e:
            if "--traceback" in argv:
                raise
            self.stderr.write(f"{self.create_parser(argv[0], argv[1]).format_usage()}")
            self.stderr.write(f"CommandError: {e}")
            sys.exit(e.returncode)
