"""
Command-line interface for sparsefactor.
"""

import json
import logging
import os
import sys
from functools import wraps
from typing import Any, Dict, List, Optional, Tuple

import click
import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .attention import (
    TASKS,
    PsfAttnModel,
    as_grid,
    attention_map,
    attention_row,
    evaluate,
    load_model,
    save_metrics,
    save_model,
    train,
)
from .attention.tasks import TASK_ALIASES
from .chord import build_pattern, nnz_accounting, structural_density
from .config import (
    ACTIVATIONS,
    PATTERN_MODES,
    ModelConfig,
    SfConfig,
    TrainConfig,
    default_factor_count,
    load_config,
    resolve_log_level,
    resolve_threads,
)
from .data import LOADERS, SYNTH_KINDS, MatrixSource, generate, load_matrix, read_dataset, synth_matrix, write_dataset
from .data.matrices import POST_TRANSFORMS
from .errors import (
    ConfigurationError,
    InputError,
    InvalidDimensionError,
    LengthMismatchError,
    NumericFaultError,
    SparseFactorError,
)
from .factorization import fit, save_chain, save_report, save_tsvd
from .report import benchmark_row, compare_matrix, summarize, tsvd_for_budget
from .utils import write_json

# Progress and errors go to stderr; stdout carries JSON/CSV only
console = Console(stderr=True)
logger = logging.getLogger("sparsefactor")

ERROR_LABELS = {
    ConfigurationError: ("Configuration Error", "Please check your flags and config file and try again."),
    InputError: ("Input Error", "Please check the input path and file format."),
    InvalidDimensionError: ("Dimension Error", "Please check sizes, ranks and indices."),
    NumericFaultError: ("Numeric Error", "Try a smaller learning rate or fewer factors."),
    LengthMismatchError: ("Length Error", "All sequences must have the model's length N."),
}

EXTENSION_KINDS = {
    '.mtx': 'matrix_market',
    '.mm': 'matrix_market',
    '.csv': 'dense_csv',
    '.pgm': 'pgm_image',
    '.net': 'pajek_net',
}


def handle_errors(func):
    """Decorator to report errors in CLI commands and exit with their code."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SparseFactorError as e:
            label, hint = ERROR_LABELS.get(type(e), ("Error", "See the message above."))
            console.print(f"\n[red]{label}:[/] {escape(str(e))}")
            console.print(f"[yellow]{hint}[/]")
            sys.exit(e.exit_code)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except Exception as e:
            logger.debug("Unexpected failure", exc_info=True)
            console.print(f"\n[red]Unexpected Error:[/] {escape(str(e))}")
            console.print("[yellow]Please report this issue with the command you ran.[/]")
            sys.exit(1)
    return wrapper


def setup_logging(level: str) -> None:
    try:
        logging.basicConfig(
            level=level,
            format="%(message)s",
            datefmt="[%X]",
            handlers=[RichHandler(console=console, show_path=False)],
            force=True,
        )
    except ValueError:
        raise ConfigurationError(f"Unknown log level '{level}'")


def emit(payload: Any, out: Optional[str]) -> None:
    """JSON to --out, or to stdout."""
    if out:
        write_json(out, payload)
        console.print(f"[green]✓[/] Wrote {out}")
    else:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))


def emit_text(text: str, out: Optional[str]) -> None:
    if out:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, 'w') as f:
            f.write(text)
        console.print(f"[green]✓[/] Wrote {out}")
    else:
        click.echo(text, nl=False)


def infer_kind(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    if ext not in EXTENSION_KINDS:
        raise ConfigurationError(f"Cannot tell the format of '{path}'; pass --kind")
    return EXTENSION_KINDS[ext]


def parse_source(text: str) -> MatrixSource:
    """'kind:path' or a bare path whose extension names the kind."""
    kind, sep, path = text.partition(':')
    if sep and kind in LOADERS:
        return MatrixSource(kind=kind, path=path)
    return MatrixSource(kind=infer_kind(text), path=text)


def resolve_matrix(input_path: Optional[str], kind: Optional[str], post: str, synth: Optional[str],
                   size: int, synth_rank: int, mode: str, seed: int) -> Tuple[np.ndarray, str]:
    if bool(input_path) == bool(synth):
        raise ConfigurationError("Give exactly one of --input or --synth")
    if input_path:
        src = MatrixSource(kind=kind or infer_kind(input_path), path=input_path, post=post)
        return load_matrix(src), src.name
    x = synth_matrix(synth, size, seed=seed, rank=synth_rank, mode=mode)
    return x, f"{synth}-{size}-s{seed}"


def sf_config(ctx: click.Context, **flags: Any) -> SfConfig:
    return SfConfig.from_mapping(ctx.obj["config"].get("sf"), **flags)


def matrix_options(func):
    options = [
        click.option('--input', '-i', 'input_path', type=click.Path(dir_okay=False),
                     help='Square matrix file to approximate'),
        click.option('--kind', '-k', type=click.Choice(list(LOADERS)),
                     help='Input format (inferred from the extension when omitted)'),
        click.option('--post', type=click.Choice(POST_TRANSFORMS), default='none', show_default=True,
                     help='Transform applied after loading'),
        click.option('--synth', type=click.Choice(list(SYNTH_KINDS)),
                     help='Use a generated matrix instead of a file'),
        click.option('--size', '-n', type=int, default=64, show_default=True,
                     help='Size of a generated matrix'),
        click.option('--synth-rank', type=int, default=3, show_default=True,
                     help='Rank of a generated low_rank matrix'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def sf_options(func):
    options = [
        click.option('--mode', '-m', type=click.Choice(PATTERN_MODES), default='full_coverage',
                     show_default=True, help='Chord pattern variant'),
        click.option('--m-factors', type=int, help='Number of factors (default log2 N)'),
        click.option('--max-iters', type=int, help='Solver iteration cap'),
        click.option('--lr', type=float, help='Adam learning rate'),
        click.option('--seed', '-s', type=int, help='Random seed'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.version_option(__version__, prog_name="sparsefactor")
@click.option('--config', '-c', 'config_path', type=click.Path(dir_okay=False),
              help='YAML file with sf / model / train sections')
@click.option('--threads', '-t', type=int, help='Worker threads for evaluation (SF_THREADS wins)')
@click.option('--verbose', '-v', is_flag=True, help='Show debug logging')
@click.option('--quiet', '-q', is_flag=True, help='Only show warnings and errors')
@click.pass_context
@handle_errors
def cli(ctx: click.Context, config_path: Optional[str], threads: Optional[int], verbose: bool, quiet: bool):
    """sparsefactor - Chord sparse factorization and PSF-Attn

    Approximate square matrices by products of Chord-structured sparse factors,
    compare them with truncated SVD at an equal non-zero budget, and train the
    sparse-factorization attention block on synthetic long-sequence tasks.

    Examples:
        sparsefactor pattern 16 --hops 4            Show a Chord pattern and its reach
        sparsefactor compare --synth planted_chain  SF vs TSVD on a planted matrix
        sparsefactor synth adding 128 1000 --out data/adding
        sparsefactor train --data data/adding --out ckpt
    """
    setup_logging(resolve_log_level(verbose, quiet))
    ctx.obj = {"config": load_config(config_path), "threads": resolve_threads(threads)}


def pattern_command():
    @click.command(name='pattern')
    @click.argument('n', type=int)
    @click.option('--mode', '-m', type=click.Choice(PATTERN_MODES), default='full_coverage', show_default=True)
    @click.option('--m-factors', type=int, help='Factor count for the non-zero account (default log2 N)')
    @click.option('--hops', type=int, help='Report the structural density of this many factors')
    @click.option('--out', '-o', type=click.Path(dir_okay=False), help='Write JSON here instead of stdout')
    @handle_errors
    def pattern(n: int, mode: str, m_factors: Optional[int], hops: Optional[int], out: Optional[str]):
        """Print the Chord sparsity pattern of an N x N factor."""
        p = build_pattern(n, mode)
        m = m_factors or default_factor_count(n)
        account = nnz_accounting(p, m)
        payload: Dict[str, Any] = {
            "pattern": p.to_json(),
            "degree": p.degree,
            "m_factors": m,
            "nnz_per_factor": account.per_factor,
            "nnz_total": account.total,
        }
        if hops:
            payload["hops"] = hops
            payload["density"] = structural_density(p, hops)

        table = Table(title=f"Chord pattern N={n} ({mode})")
        table.add_column("Property", style="cyan")
        table.add_column("Value")
        table.add_row("Offsets", ", ".join(str(o) for o in p.offsets))
        table.add_row("Row degree", str(p.degree))
        table.add_row(f"Non-zeros (M={m})", f"{account.total} ({account.per_factor} per factor)")
        if hops:
            table.add_row(f"Density after {hops} hops", f"{payload['density']:.6f}")
        console.print(table)
        emit(payload, out)

    return pattern


def _report_table(title: str, rows: List[Tuple[str, str]]) -> Table:
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Value")
    for k, v in rows:
        table.add_row(k, v)
    return table


def compare_command():
    @click.command(name='compare')
    @matrix_options
    @sf_options
    @click.option('--save-dir', type=click.Path(file_okay=False), help='Also save the chain and TSVD factors')
    @click.option('--out', '-o', type=click.Path(dir_okay=False), help='Write the report here instead of stdout')
    @click.pass_context
    @handle_errors
    def compare(ctx, input_path, kind, post, synth, size, synth_rank, mode, m_factors, max_iters, lr, seed,
                save_dir, out):
        """Fit SF and a TSVD with at least as many non-zeros; report the winner."""
        cfg = sf_config(ctx, m_factors=m_factors, max_iters=max_iters, learning_rate=lr, seed=seed)
        x, name = resolve_matrix(input_path, kind, post, synth, size, synth_rank, mode, cfg.seed)
        try:
            with console.status(f"[bold blue]Comparing on {name}..."):
                report, chain, _, baseline = compare_matrix(x, mode, cfg, name=name)
        except NumericFaultError as e:
            _save_last_chain(e, save_dir)
            raise

        if save_dir:
            save_chain(chain, os.path.join(save_dir, "chain"))
            save_tsvd(baseline, os.path.join(save_dir, "tsvd"))
        console.print(_report_table(f"SF vs TSVD on {name}", [
            ("Non-zeros SF / TSVD", f"{report.nnz_sf} / {report.nnz_tsvd} (r={report.rank_r})"),
            ("F-error SF", f"{report.fro_err_sf:.6e}"),
            ("F-error TSVD", f"{report.fro_err_tsvd:.6e}"),
            ("Winner", report.winner),
        ]))
        emit(report.to_json(), out)

    return compare


def _save_last_chain(error: NumericFaultError, save_dir: Optional[str]) -> None:
    if save_dir and error.last_valid is not None:
        path = os.path.join(save_dir, "last_valid")
        save_chain(error.last_valid, path)
        console.print(f"[yellow]Saved the last finite chain to {path}[/]")


def tsvd_command():
    @click.command(name='tsvd')
    @matrix_options
    @click.option('--rank', '-r', type=int, help='Truncation rank')
    @click.option('--budget', '-b', type=int, help='Non-zero budget; the rank follows the equal-budget rule')
    @click.option('--seed', '-s', type=int, default=0, show_default=True)
    @click.option('--save-dir', type=click.Path(file_okay=False), help='Write u/s/v factors here')
    @click.option('--out', '-o', type=click.Path(dir_okay=False))
    @handle_errors
    def tsvd_cmd(input_path, kind, post, synth, size, synth_rank, rank, budget, seed, save_dir, out):
        """Truncated SVD of a square matrix."""
        if (rank is None) == (budget is None):
            raise ConfigurationError("Give exactly one of --rank or --budget")
        x, name = resolve_matrix(input_path, kind, post, synth, size, synth_rank, 'full_coverage', seed)
        result, err = tsvd_for_budget(x, budget=budget, rank=rank, seed=seed)
        if save_dir:
            save_tsvd(result, save_dir)
        emit({
            "name": name,
            "n": result.n,
            "r": result.r,
            "nnz": result.nnz,
            "fro_err": err,
            "singular_values": result.singular_values.tolist(),
        }, out)

    return tsvd_cmd


def sf_command():
    @click.command(name='sf')
    @matrix_options
    @sf_options
    @click.option('--save-dir', type=click.Path(file_okay=False), help='Write the fitted chain here')
    @click.option('--history/--no-history', default=True, show_default=True, help='Include the loss history')
    @click.option('--out', '-o', type=click.Path(dir_okay=False))
    @click.pass_context
    @handle_errors
    def sf(ctx, input_path, kind, post, synth, size, synth_rank, mode, m_factors, max_iters, lr, seed,
           save_dir, history, out):
        """Fit a Chord factor chain to a square matrix."""
        cfg = sf_config(ctx, m_factors=m_factors, max_iters=max_iters, learning_rate=lr, seed=seed)
        x, name = resolve_matrix(input_path, kind, post, synth, size, synth_rank, mode, cfg.seed)
        pattern = build_pattern(x.shape[0], mode)
        try:
            with console.status(f"[bold blue]Fitting {cfg.factors_for(pattern.n)} factors to {name}..."):
                chain, report = fit(x, pattern, cfg)
        except NumericFaultError as e:
            _save_last_chain(e, save_dir)
            raise
        if save_dir:
            save_chain(chain, save_dir)
            save_report(report, os.path.join(save_dir, "report.json"))
        payload = report.to_json()
        payload.update({"name": name, "mode": mode, "m_factors": chain.m})
        if not history:
            payload.pop("loss_history")
        emit(payload, out)

    return sf


def synth_command():
    @click.command(name='synth')
    @click.argument('task', type=click.Choice(list(TASKS) + list(TASK_ALIASES)))
    @click.argument('n', type=int)
    @click.argument('count', type=int)
    @click.option('--seed', '-s', type=int, default=0, show_default=True)
    @click.option('--out', '-o', required=True, type=click.Path(dir_okay=False),
                  help='Output prefix; writes <out>.csv and <out>.json')
    @handle_errors
    def synth(task: str, n: int, count: int, seed: int, out: str):
        """Generate an Adding or Temporal Order dataset."""
        task = TASK_ALIASES.get(task, task)
        dataset = generate(task, n, count, seed)
        path = write_dataset(dataset, out)
        console.print(Panel.fit(
            f"[bold blue]{count} {task} sequences of length {n}[/]\n{path}",
            title="sparsefactor synth",
        ))

    return synth


def train_command():
    @click.command(name='train')
    @click.option('--data', '-d', required=True, type=click.Path(dir_okay=False), help='Training dataset prefix')
    @click.option('--eval-data', '-e', type=click.Path(dir_okay=False), help='Evaluation dataset prefix')
    @click.option('--out', '-o', required=True, type=click.Path(file_okay=False), help='Checkpoint directory')
    @click.option('--metrics', type=click.Path(dir_okay=False), help='Metrics JSON (default <out>/metrics.json)')
    @click.option('--epochs', type=int)
    @click.option('--batch-size', type=int)
    @click.option('--lr', type=float)
    @click.option('--seed', '-s', type=int)
    @click.option('--repeats', type=int, help='Train this many seeds and report mean and std')
    @click.option('--d', 'd_model', type=int, help='Embedding width')
    @click.option('--hidden', type=int, help='Hidden width of every MLP')
    @click.option('--activation', type=click.Choice(ACTIVATIONS))
    @click.option('--mode', '-m', type=click.Choice(PATTERN_MODES))
    @click.option('--m-factors', type=int)
    @click.option('--residual/--no-residual', default=None)
    @click.option('--positional/--no-positional', default=None)
    @click.pass_context
    @handle_errors
    def train_cmd(ctx, data, eval_data, out, metrics, epochs, batch_size, lr, seed, repeats, d_model, hidden,
                  activation, mode, m_factors, residual, positional):
        """Train PSF-Attn on a synthetic dataset and save a checkpoint."""
        sections = ctx.obj["config"]
        train_cfg = TrainConfig.from_mapping(
            sections.get("train"), epochs=epochs, batch_size=batch_size, learning_rate=lr, seed=seed,
            repeats=repeats, threads=ctx.obj["threads"],
        )
        model_cfg = ModelConfig.from_mapping(
            sections.get("model"), d=d_model, hidden=hidden, activation=activation, mode=mode,
            m_factors=m_factors, residual=residual, positional=positional,
        )
        dataset = read_dataset(data)
        eval_dataset = read_dataset(eval_data) if eval_data else None
        try:
            model, summary = train(dataset.task, dataset, train_cfg, model_cfg, eval_dataset)
        except NumericFaultError as e:
            if isinstance(e.last_valid, PsfAttnModel):
                save_model(e.last_valid, out)
                console.print(f"[yellow]Saved the last checkpoint to {out}[/]")
            raise

        save_model(model, out)
        metrics_path = metrics or os.path.join(out, "metrics.json")
        save_metrics(summary, metrics_path)

        table = Table(title=f"PSF-Attn on {dataset.task} (N={dataset.n})")
        table.add_column("Seed", style="cyan")
        table.add_column("Epochs")
        table.add_column("Final loss")
        table.add_column("Accuracy", style="green")
        for run in summary.runs:
            last = run.epochs[-1]
            table.add_row(str(run.seed), str(last.epoch), f"{last.train_loss:.6f}", f"{last.eval_accuracy:.4f}")
        console.print(table)
        payload = summary.to_json()
        payload.update({"checkpoint": out, "metrics": metrics_path})
        emit(payload, None)

    return train_cmd


def eval_command():
    @click.command(name='eval')
    @click.option('--checkpoint', '-k', required=True, type=click.Path(file_okay=False))
    @click.option('--data', '-d', required=True, type=click.Path(dir_okay=False))
    @click.option('--out', '-o', type=click.Path(dir_okay=False))
    @click.pass_context
    @handle_errors
    def eval_cmd(ctx, checkpoint: str, data: str, out: Optional[str]):
        """Accuracy of a checkpoint on a dataset."""
        model = load_model(checkpoint)
        dataset = read_dataset(data)
        accuracy = evaluate(model, dataset, ctx.obj["threads"])
        console.print(f"[bold]Accuracy:[/] [green]{accuracy:.4f}[/] on {len(dataset)} sequences")
        emit({"task": model.task.name, "count": len(dataset), "accuracy": accuracy}, out)

    return eval_cmd


def _sequence_embedding(checkpoint: str, data: str, instance: int) -> Tuple[PsfAttnModel, np.ndarray]:
    model = load_model(checkpoint)
    dataset = read_dataset(data)
    if not 0 <= instance < len(dataset):
        raise InvalidDimensionError(f"Instance {instance} out of range for {len(dataset)} sequences")
    if dataset.n != model.n:
        raise LengthMismatchError(f"Dataset sequences have length {dataset.n}, model expects {model.n}")
    return model, model.embed(dataset.features(instance))


def _csv_line(values) -> str:
    return ",".join(f"{v:.17g}" for v in values)


def attn_row_command():
    @click.command(name='attn-row')
    @click.option('--checkpoint', '-k', required=True, type=click.Path(file_okay=False))
    @click.option('--data', '-d', required=True, type=click.Path(dir_okay=False))
    @click.option('--instance', type=int, default=0, show_default=True, help='Sequence within the dataset')
    @click.option('--row', '-r', 'rows', type=int, multiple=True, required=True, help='Attention row index')
    @click.option('--out', '-o', type=click.Path(dir_okay=False), help='CSV file (default stdout)')
    @handle_errors
    def attn_row(checkpoint: str, data: str, instance: int, rows, out: Optional[str]):
        """Rows of the attention matrix as CSV lines: index, N values."""
        model, e = _sequence_embedding(checkpoint, data, instance)
        lines = [f"{i}," + _csv_line(attention_row(model, e, i)) for i in rows]
        emit_text("\n".join(lines) + "\n", out)

    return attn_row


def attn_map_command():
    @click.command(name='attn-map')
    @click.option('--checkpoint', '-k', required=True, type=click.Path(file_okay=False))
    @click.option('--data', '-d', required=True, type=click.Path(dir_okay=False))
    @click.option('--instance', type=int, default=0, show_default=True)
    @click.option('--rows', '-r', required=True, help='Comma-separated row indices to sum')
    @click.option('--out', '-o', type=click.Path(dir_okay=False), help='CSV file (default stdout)')
    @handle_errors
    def attn_map(checkpoint: str, data: str, instance: int, rows: str, out: Optional[str]):
        """Summed |attention| of several rows, as a square grid when N is a square."""
        try:
            indices = [int(r) for r in rows.split(",") if r.strip()]
        except ValueError:
            raise ConfigurationError(f"--rows must be comma-separated integers, got '{rows}'")
        model, e = _sequence_embedding(checkpoint, data, instance)
        grid = as_grid(attention_map(model, e, indices))
        emit_text("".join(_csv_line(line) + "\n" for line in grid), out)

    return attn_map


def benchmark_command():
    @click.command(name='benchmark')
    @click.option('--input', '-i', 'inputs', multiple=True, help="Matrix file as 'kind:path' or a bare path")
    @click.option('--synth', 'synth_kinds', multiple=True, type=click.Choice(list(SYNTH_KINDS)),
                  help='Generated matrix family (repeatable)')
    @click.option('--size', '-n', type=int, default=64, show_default=True)
    @click.option('--repeats', type=int, default=1, show_default=True, help='Seeds per generated family')
    @click.option('--synth-rank', type=int, default=3, show_default=True)
    @sf_options
    @click.option('--out', '-o', type=click.Path(dir_okay=False), help='.csv or .json (default JSON to stdout)')
    @click.pass_context
    @handle_errors
    def benchmark(ctx, inputs, synth_kinds, size, repeats, synth_rank, mode, m_factors, max_iters, lr, seed, out):
        """SF vs TSVD over many matrices at matched non-zeros."""
        if not inputs and not synth_kinds:
            raise ConfigurationError("Give at least one --input or --synth")
        base = sf_config(ctx, m_factors=m_factors, max_iters=max_iters, learning_rate=lr, seed=seed)

        jobs = [(load_matrix(src), src.name, base.seed) for src in map(parse_source, inputs)]
        for kind in synth_kinds:
            for r in range(repeats):
                s = base.seed + r
                jobs.append((synth_matrix(kind, size, seed=s, rank=synth_rank, mode=mode), f"{kind}-{size}-s{s}", s))

        rows = []
        for x, name, s in jobs:
            cfg = SfConfig.from_mapping(base.to_dict(), seed=s)
            with console.status(f"[bold blue]{name}..."):
                report, *_ = compare_matrix(x, mode, cfg, command="benchmark", name=name)
            rows.append(benchmark_row(report))

        table = Table(title="SF vs TSVD")
        for column in ("name", "n", "nnz_sf", "nnz_tsvd", "fro_err_sf", "fro_err_tsvd", "winner"):
            table.add_column(column)
        for row in rows:
            table.add_row(row["name"], str(row["n"]), str(row["nnz_sf"]), str(row["nnz_tsvd"]),
                          f"{row['fro_err_sf']:.4e}", f"{row['fro_err_tsvd']:.4e}", row["winner"])
        console.print(table)
        console.print(f"Wins: {summarize(rows)}")

        if out and out.endswith(".csv"):
            header = "name,n,nnz_sf,nnz_tsvd,fro_err_tsvd,fro_err_sf,winner\n"
            body = "".join(
                f"{r['name']},{r['n']},{r['nnz_sf']},{r['nnz_tsvd']},"
                f"{r['fro_err_tsvd']:.17g},{r['fro_err_sf']:.17g},{r['winner']}\n" for r in rows
            )
            emit_text(header + body, out)
        else:
            emit({"rows": rows, "wins": summarize(rows)}, out)

    return benchmark


COMMAND_FACTORIES = [
    pattern_command,
    compare_command,
    tsvd_command,
    sf_command,
    synth_command,
    train_command,
    eval_command,
    attn_row_command,
    attn_map_command,
    benchmark_command,
]


def register_commands() -> click.Group:
    if not cli.commands:
        for factory in COMMAND_FACTORIES:
            cli.add_command(factory())
    return cli


def main():
    """Main entry point for the CLI."""
    register_commands()
    try:
        cli()
    except KeyboardInterrupt:
        console.print("\n[yellow]Operation cancelled by user[/]")
        return 1
    return 0


if __name__ == "__main__":
    main()
