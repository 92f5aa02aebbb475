try:
    from ..models import Command
    from .base import BaseCommand, CommandResult
    from .bisector import BisectorCommand, InnerCommand
    from .constants import CBCommand, CSCommand, DConstCommand, InnerProductCommand, SearchCommand
    from .figure import FigureCommand
    from .norm_info import NormInfoCommand
    from .orthogonality import OrthoCommand, SineCommand
    from .runs import RunsCommand
except ImportError:
    # Fallback for direct execution
    from app.models import Command
    from app.commands.base import BaseCommand, CommandResult
    from app.commands.bisector import BisectorCommand, InnerCommand
    from app.commands.constants import CBCommand, CSCommand, DConstCommand, InnerProductCommand, SearchCommand
    from app.commands.figure import FigureCommand
    from app.commands.norm_info import NormInfoCommand
    from app.commands.orthogonality import OrthoCommand, SineCommand
    from app.commands.runs import RunsCommand

COMMANDS = {
    Command.NORM_INFO: NormInfoCommand,
    Command.SINE: SineCommand,
    Command.ORTHO: OrthoCommand,
    Command.BISECTOR: BisectorCommand,
    Command.INNER: InnerCommand,
    Command.CB: CBCommand,
    Command.CS: CSCommand,
    Command.DCONST: DConstCommand,
    Command.IPQ: InnerProductCommand,
    Command.SEARCH: SearchCommand,
    Command.FIGURE: FigureCommand,
    Command.RUNS: RunsCommand,
}

__all__ = ["BaseCommand", "CommandResult", "COMMANDS"]
