import logging
from pathlib import Path

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.pretty import pprint

from magicbullet.config import envConfig
from magicbullet.errors import MagicBulletError
from magicbullet.export import artifact_version
from magicbullet.runner import parse_config, run
from magicbullet.types import Command

cli = typer.Typer(no_args_is_help=True)

SEED_HELP = "Seed for every random draw of the run."
OUTPUT_HELP = "Output file; defaults to the command name in MAGICBULLET_OUTPUT_DIR."
ORACLE_HELP = "Cross-check closed forms against the Fock oracle."
CONFIG_HELP = "Flat key = value file; flags override its values."
SHOW_CONFIG_HELP = "Print the parsed run configuration and exit."
GAMMA_HELP = "OPA linewidth Γ in Hz; adds absolute frequency columns."
LOG_LEVEL_HELP = "Logging level, e.g. DEBUG or INFO."


def setup_logging(level: str | None) -> None:
    level = (level or envConfig.MAGICBULLET_LOG_LEVEL).upper()
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def execute(
    command: Command,
    params: dict,
    seed: int | None,
    output: Path | None,
    with_oracle: bool | None,
    config: Path | None,
    show_config: bool | None,
    gamma_hz: float | None,
    log_level: str | None,
) -> None:
    setup_logging(log_level)
    options = {
        **params,
        "seed": seed,
        "output": output,
        # an absent flag must not override a config file value
        "with_oracle": with_oracle or None,
        "gamma_hz": gamma_hz,
    }
    try:
        run_config = parse_config(command, options, config)
    except MagicBulletError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(e.exit_code)
    if show_config:
        pprint(run_config)
        raise typer.Exit(0)
    raise typer.Exit(run(run_config))


@cli.callback(invoke_without_command=True)
def main(
    version: bool = typer.Option(None, "--version", "-v"),
):
    if version:
        typer.echo(f"magicbullet v{artifact_version()}")
        raise typer.Exit(0)


@cli.command()
def spectra(
    g2: float = typer.Option(None, "--g2", help="Pump power normalized to threshold."),
    x_min: float = typer.Option(None, "--x-min"),
    x_max: float = typer.Option(None, "--x-max"),
    points: int = typer.Option(None, "--points"),
    seed: int = typer.Option(None, "--seed", help=SEED_HELP),
    output: Path = typer.Option(None, "--output", "-o", help=OUTPUT_HELP),
    with_oracle: bool = typer.Option(None, "--with-oracle", help=ORACLE_HELP),
    config: Path = typer.Option(None, "--config", help=CONFIG_HELP),
    show_config: bool = typer.Option(None, "--show-config", help=SHOW_CONFIG_HELP),
    gamma_hz: float = typer.Option(None, "--gamma-hz", help=GAMMA_HELP),
    log_level: str = typer.Option(None, "--log-level", help=LOG_LEVEL_HELP),
):
    """Fluorescence and phase-sensitive spectra on a detuning grid."""
    params = {"g2": g2, "x_min": x_min, "x_max": x_max, "points": points}
    execute(
        Command.SPECTRA,
        params,
        seed,
        output,
        with_oracle,
        config,
        show_config,
        gamma_hz,
        log_level,
    )


@cli.command()
def quadrature(
    nbar: float = typer.Option(None, "--nbar", help="Mean photon number per mode."),
    trials: int = typer.Option(None, "--trials"),
    seed: int = typer.Option(None, "--seed", help=SEED_HELP),
    output: Path = typer.Option(None, "--output", "-o", help=OUTPUT_HELP),
    with_oracle: bool = typer.Option(None, "--with-oracle", help=ORACLE_HELP),
    config: Path = typer.Option(None, "--config", help=CONFIG_HELP),
    show_config: bool = typer.Option(None, "--show-config", help=SHOW_CONFIG_HELP),
    gamma_hz: float = typer.Option(None, "--gamma-hz", help=GAMMA_HELP),
    log_level: str = typer.Option(None, "--log-level", help=LOG_LEVEL_HELP),
):
    """Sample homodyne outcome pairs of a two-mode squeezed state."""
    params = {"nbar": nbar, "trials": trials}
    execute(
        Command.QUADRATURE,
        params,
        seed,
        output,
        with_oracle,
        config,
        show_config,
        gamma_hz,
        log_level,
    )


@cli.command()
def pairs(
    g2: float = typer.Option(None, "--g2", help="Pump power normalized to threshold."),
    gamma_t: float = typer.Option(None, "--gamma-t", help="Counting window ΓT."),
    modes: int = typer.Option(None, "--modes"),
    phi_center: float = typer.Option(None, "--phi-center"),
    phi_width: float = typer.Option(None, "--phi-width"),
    seed: int = typer.Option(None, "--seed", help=SEED_HELP),
    output: Path = typer.Option(None, "--output", "-o", help=OUTPUT_HELP),
    with_oracle: bool = typer.Option(None, "--with-oracle", help=ORACLE_HELP),
    config: Path = typer.Option(None, "--config", help=CONFIG_HELP),
    show_config: bool = typer.Option(None, "--show-config", help=SHOW_CONFIG_HELP),
    gamma_hz: float = typer.Option(None, "--gamma-hz", help=GAMMA_HELP),
    log_level: str = typer.Option(None, "--log-level", help=LOG_LEVEL_HELP),
):
    """Project the signal photon of a pair onto a Gaussian wavepacket."""
    params = {
        "g2": g2,
        "gamma_t": gamma_t,
        "modes": modes,
        "phi_center": phi_center,
        "phi_width": phi_width,
    }
    execute(
        Command.PAIRS,
        params,
        seed,
        output,
        with_oracle,
        config,
        show_config,
        gamma_hz,
        log_level,
    )


@cli.command()
def fig3(
    g2: float = typer.Option(None, "--g2", help="Pump power normalized to threshold."),
    dx: str = typer.Option(None, "--dx", help="Comma separated detunings, e.g. 0,1,2."),
    gc_grid: str = typer.Option(None, "--gc-grid", help="start:stop:count in Γc/Γ."),
    seed: int = typer.Option(None, "--seed", help=SEED_HELP),
    output: Path = typer.Option(None, "--output", "-o", help=OUTPUT_HELP),
    with_oracle: bool = typer.Option(None, "--with-oracle", help=ORACLE_HELP),
    config: Path = typer.Option(None, "--config", help=CONFIG_HELP),
    show_config: bool = typer.Option(None, "--show-config", help=SHOW_CONFIG_HELP),
    gamma_hz: float = typer.Option(None, "--gamma-hz", help=GAMMA_HELP),
    log_level: str = typer.Option(None, "--log-level", help=LOG_LEVEL_HELP),
):
    """Count-difference variance behind detuned measurement cavities."""
    params = {"g2": g2, "dx": dx, "gc_grid": gc_grid}
    execute(
        Command.FIG3,
        params,
        seed,
        output,
        with_oracle,
        config,
        show_config,
        gamma_hz,
        log_level,
    )


@cli.command()
def filters(
    g2: float = typer.Option(None, "--g2", help="Pump power normalized to threshold."),
    k: str = typer.Option(None, "--k", help="Comma separated orders, e.g. 1,2,4,8."),
    wc_over_g: float = typer.Option(None, "--wc-over-g", help="Cutoff ω_c/Γ."),
    dx: float = typer.Option(None, "--dx", help="Filter detuning Δω/Γ."),
    seed: int = typer.Option(None, "--seed", help=SEED_HELP),
    output: Path = typer.Option(None, "--output", "-o", help=OUTPUT_HELP),
    with_oracle: bool = typer.Option(None, "--with-oracle", help=ORACLE_HELP),
    config: Path = typer.Option(None, "--config", help=CONFIG_HELP),
    show_config: bool = typer.Option(None, "--show-config", help=SHOW_CONFIG_HELP),
    gamma_hz: float = typer.Option(None, "--gamma-hz", help=GAMMA_HELP),
    log_level: str = typer.Option(None, "--log-level", help=LOG_LEVEL_HELP),
):
    """Count-difference variance behind matched Butterworth filters."""
    params = {"g2": g2, "k": k, "wc_over_g": wc_over_g, "dx": dx}
    execute(
        Command.FILTERS,
        params,
        seed,
        output,
        with_oracle,
        config,
        show_config,
        gamma_hz,
        log_level,
    )


@cli.command("epr-demo")
def epr_demo(
    d: int = typer.Option(None, "--d", help="Dimension of each particle."),
    trials: int = typer.Option(None, "--trials"),
    seed: int = typer.Option(None, "--seed", help=SEED_HELP),
    output: Path = typer.Option(None, "--output", "-o", help=OUTPUT_HELP),
    with_oracle: bool = typer.Option(None, "--with-oracle", help=ORACLE_HELP),
    config: Path = typer.Option(None, "--config", help=CONFIG_HELP),
    show_config: bool = typer.Option(None, "--show-config", help=SHOW_CONFIG_HELP),
    gamma_hz: float = typer.Option(None, "--gamma-hz", help=GAMMA_HELP),
    log_level: str = typer.Option(None, "--log-level", help=LOG_LEVEL_HELP),
):
    """Scatter both halves of an EPR pair and measure conjugate bases."""
    params = {"d": d, "trials": trials}
    execute(
        Command.EPR_DEMO,
        params,
        seed,
        output,
        with_oracle,
        config,
        show_config,
        gamma_hz,
        log_level,
    )


if __name__ == "__main__":
    cli()
