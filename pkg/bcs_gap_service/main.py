import sys
from collections.abc import Callable
from dataclasses import dataclass

import click

from bcs_gap_service.src.core.config import Settings
from bcs_gap_service.src.core.constants import SUCCESS_EXIT_CODE, VERIFICATION_FAILED_EXIT_CODE
from bcs_gap_service.src.core.exceptions import GapSolverException
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.schemas.config import RunConfig, load_run_config
from bcs_gap_service.src.infrastructure.kernel_factory import KernelFactory
from bcs_gap_service.src.infrastructure.storage.result_writer import FileResultWriter
from bcs_gap_service.src.services.expansion_service import ExpansionService
from bcs_gap_service.src.services.gap_operator_service import GapOperatorService
from bcs_gap_service.src.services.model_service import ModelService
from bcs_gap_service.src.services.pipeline_service import PipelineService
from bcs_gap_service.src.services.simple_gap_service import SimpleGapService
from bcs_gap_service.src.services.surface_service import SurfaceService
from bcs_gap_service.src.services.thermo_service import ThermoService
from bcs_gap_service.src.services.verification_service import VerificationService


@dataclass
class AppContext:
    settings: Settings
    logger: Logger
    pipeline: PipelineService
    verification: VerificationService


def create_context(settings: Settings, logger: Logger) -> AppContext:
    """Wire the services together."""
    simple_gap_service = SimpleGapService(logger)
    operator_service = GapOperatorService(simple_gap_service, logger)
    pipeline = PipelineService(
        model_service=ModelService(KernelFactory(), logger),
        simple_gap_service=simple_gap_service,
        operator_service=operator_service,
        surface_service=SurfaceService(operator_service, simple_gap_service, settings, logger),
        expansion_service=ExpansionService(logger),
        thermo_service=ThermoService(simple_gap_service, logger),
        settings=settings,
        logger=logger
    )
    return AppContext(
        settings=settings,
        logger=logger,
        pipeline=pipeline,
        verification=VerificationService(pipeline, settings, logger)
    )


def run_command(ctx: click.Context, command: str, action: Callable[[AppContext, RunConfig, FileResultWriter], int]):
    app: AppContext = ctx.obj
    options = ctx.params
    try:
        config = load_run_config(options["config_path"] or app.settings.default_config_path)
        out_dir = options["out"] or config.outputs.dir
        writer = FileResultWriter(out_dir, config.outputs.formats, app.logger)
        app.logger.info(f"Running {command}", extra={"out_dir": out_dir})
        code = action(app, config, writer)
    except GapSolverException as e:
        app.logger.error(f"{command} failed: {e.message}", extra={"error": type(e).__name__})
        click.echo(f"error: {type(e).__name__}: {e.message}", err=True)
        sys.exit(e.exit_code)
    except Exception as e:
        app.logger.exception(f"Unexpected error in {command}: {e}")
        click.echo(f"error: {e}", err=True)
        sys.exit(VERIFICATION_FAILED_EXIT_CODE)
    sys.exit(code)


def common_options(function: Callable) -> Callable:
    function = click.option("--quiet", is_flag=True, help="Log warnings and errors only.")(function)
    function = click.option("--out", type=click.Path(file_okay=False), default=None,
                            help="Output directory, overrides outputs.dir.")(function)
    return click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                        help="JSON run configuration.")(function)


@click.group()
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Gap equation solver for the BCS-Bogoliubov model with a cutoff."""
    settings = Settings()
    logger = Logger(level=settings.log_level, log_dir=settings.log_dir)
    ctx.obj = create_context(settings, logger)


def _apply_quiet(ctx: click.Context) -> None:
    if ctx.params.get("quiet"):
        ctx.obj.logger.set_level("WARNING")


@cli.command()
@common_options
@click.pass_context
def simple(ctx: click.Context, config_path: str | None, out: str | None, quiet: bool) -> None:
    """Gap curves of the two constant couplings."""
    _apply_quiet(ctx)

    def action(app: AppContext, config: RunConfig, writer: FileResultWriter) -> int:
        app.pipeline.run_simple(config, writer)
        return SUCCESS_EXIT_CODE

    run_command(ctx, "simple", action)


@cli.command()
@common_options
@click.option("--uncertified", is_flag=True, help="Fall back to an uncertified window start.")
@click.pass_context
def solve(ctx: click.Context, config_path: str | None, out: str | None, quiet: bool, uncertified: bool) -> None:
    """Transition temperature, gap surface and critical expansion."""
    _apply_quiet(ctx)

    def action(app: AppContext, config: RunConfig, writer: FileResultWriter) -> int:
        app.pipeline.run_solve(config, writer, uncertified)
        return SUCCESS_EXIT_CODE

    run_command(ctx, "solve", action)


@cli.command()
@common_options
@click.option("--uncertified", is_flag=True, help="Fall back to an uncertified window start.")
@click.pass_context
def thermo(ctx: click.Context, config_path: str | None, out: str | None, quiet: bool, uncertified: bool) -> None:
    """Potential difference curve and specific-heat jump."""
    _apply_quiet(ctx)

    def action(app: AppContext, config: RunConfig, writer: FileResultWriter) -> int:
        app.pipeline.run_thermo(config, writer, uncertified)
        return SUCCESS_EXIT_CODE

    run_command(ctx, "thermo", action)


@cli.command()
@common_options
@click.pass_context
def verify(ctx: click.Context, config_path: str | None, out: str | None, quiet: bool) -> None:
    """Run every invariant check and write verify_report.json."""
    _apply_quiet(ctx)

    def action(app: AppContext, config: RunConfig, writer: FileResultWriter) -> int:
        report = app.verification.run_verify(config, writer)
        for check in report.failed:
            click.echo(f"FAIL {check.id}: {check.claim} (measured {check.measured})", err=True)
        return VERIFICATION_FAILED_EXIT_CODE if report.failed else SUCCESS_EXIT_CODE

    run_command(ctx, "verify", action)


if __name__ == "__main__":
    cli()
