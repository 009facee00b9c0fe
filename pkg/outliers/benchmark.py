"""
Monte-Carlo benchmark harness.

For every grid cell and replication r a dataset is simulated with a seed
derived from (master_seed, cell, r), a detector is run, and the zero-one
loss against the ground truth is recorded. Per-cell averages (AVE) and
standard deviations form the report.

External comparators are supported through files: ``export_dir`` writes
every replication's dataset, and ``comparators`` points at directories of
prediction files with matching names.
"""

import csv
import io
import itertools
import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .datasets import LABEL_COLUMN, PathLike, format_float, parse_label, write_dataset
from .detection import detect
from .exceptions import (
    ConfigurationError,
    DataFormatError,
    DomainError,
    OutlierDetectionError,
)
from .mcd import McdConfig
from .parallel import process_map
from .rssl import RsslConfig
from .simulation import ContaminationConfig, sample_dataset
from .streams import derive_seed

logger = logging.getLogger(__name__)

METHODS = {
    'rssl-ld': 'ld',
    'rssl-hd': 'hd',
    'mcd': 'mcd',
}

REPORT_FORMATS = ('csv', 'markdown')

REPORT_COLUMNS = (
    'p', 'epsilon', 'eta', 'gamma', 'rho', 'n', 'method',
    'mean_ave', 'sd', 'mean_runtime_s', 'failures',
)

DATASET_KEY = 0
METHOD_KEY = 1


@dataclass(frozen=True)
class Cell:
    """One point of the parameter grid."""

    p: int
    epsilon: float
    eta: float
    gamma: float
    rho: float

    @property
    def stem(self) -> str:
        return f"p{self.p}_eps{self.epsilon:g}_eta{self.eta:g}_gamma{self.gamma:g}_rho{self.rho:g}"


@dataclass(frozen=True)
class ParameterGrid:
    """
    Values swept by a benchmark.

    With pair_eta_gamma the eta and gamma lists are zipped (eta = gamma
    settings) instead of crossed.
    """

    p: Tuple[int, ...]
    epsilon: Tuple[float, ...]
    eta: Tuple[float, ...]
    gamma: Tuple[float, ...]
    rho: Tuple[float, ...] = (0.1,)
    pair_eta_gamma: bool = False

    def __post_init__(self):
        for name in ('p', 'epsilon', 'eta', 'gamma', 'rho'):
            values = tuple(getattr(self, name))
            if not values:
                raise ConfigurationError(f"Grid axis '{name}' is empty")
            object.__setattr__(self, name, values)
        if self.pair_eta_gamma and len(self.eta) != len(self.gamma):
            raise ConfigurationError("Paired eta/gamma lists must have equal length")

    def cells(self) -> List[Cell]:
        if self.pair_eta_gamma:
            shifts = list(zip(self.eta, self.gamma))
        else:
            shifts = list(itertools.product(self.eta, self.gamma))
        return [
            Cell(p=int(p), epsilon=float(eps), eta=float(eta), gamma=float(gamma), rho=float(rho))
            for p, eps, (eta, gamma), rho in itertools.product(self.p, self.epsilon, shifts, self.rho)
        ]


@dataclass(frozen=True)
class BenchmarkSpec:
    """
    A benchmark run.

    Attributes:
        grid: Parameter grid
        n: Sample size of every dataset
        method: 'rssl-ld', 'rssl-hd' or 'mcd'
        R: Replications per cell
        rssl: Ensemble template (its seed is replaced per replication)
        mcd: MCD template (its seed is replaced per replication)
        master_seed: Seed every dataset and method seed is derived from
        output_path: Where run_benchmark writes the report, if set
        report_format: 'csv' or 'markdown'
        comparators: (name, directory) pairs of external prediction files
        export_dir: Directory receiving every replication's dataset CSV
        record_timing: Record wall-clock time per replication
    """

    grid: ParameterGrid
    n: int
    method: str = 'rssl-ld'
    R: int = 20
    rssl: RsslConfig = field(default_factory=RsslConfig)
    mcd: McdConfig = field(default_factory=McdConfig)
    master_seed: int = 0
    output_path: Optional[str] = None
    report_format: str = 'csv'
    comparators: Tuple[Tuple[str, str], ...] = ()
    export_dir: Optional[str] = None
    record_timing: bool = False

    def __post_init__(self):
        if self.R < 1:
            raise ConfigurationError(f"R must be >= 1, got {self.R}")
        if self.method not in METHODS:
            raise ConfigurationError(f"Unknown method '{self.method}', expected one of {sorted(METHODS)}")
        if self.report_format not in REPORT_FORMATS:
            raise ConfigurationError(f"Unknown report format '{self.report_format}'")
        object.__setattr__(self, 'comparators', tuple((str(a), str(b)) for a, b in self.comparators))
        for cell in self.grid.cells():
            if self.method == 'rssl-hd' and not self.n < cell.p:
                raise ConfigurationError(f"rssl-hd requires n < p, got n={self.n}, p={cell.p}")
            if self.method == 'rssl-ld' and not 2 * cell.p < self.n:
                raise ConfigurationError(f"rssl-ld requires p < n/2, got n={self.n}, p={cell.p}")


@dataclass(frozen=True)
class BenchmarkRow:
    """Aggregated result of one (cell, method) pair."""

    p: int
    epsilon: float
    eta: float
    gamma: float
    rho: float
    n: int
    method: str
    mean_ave: float
    sd: float
    mean_runtime_s: float
    failures: int

    @property
    def sort_key(self):
        return (self.p, self.epsilon, self.eta, self.gamma, self.rho, self.method)


@dataclass(frozen=True)
class BenchmarkReport:
    rows: Tuple[BenchmarkRow, ...] = ()


@dataclass(frozen=True)
class ReplicationTask:
    cell_index: int
    cell: Cell
    r: int
    spec: BenchmarkSpec


@dataclass(frozen=True)
class ReplicationOutcome:
    cell_index: int
    r: int
    losses: Dict[str, Optional[float]]
    runtime_s: float


def zero_one_loss(y: Sequence[int], yhat: Sequence[int]) -> float:
    """
    Share of positions where the labels disagree.

    Raises:
        DomainError: If the lengths differ or the vectors are empty
    """
    y = np.asarray(y)
    yhat = np.asarray(yhat)
    if y.shape != yhat.shape or y.ndim != 1:
        raise DomainError(f"Label vectors differ in shape: {y.shape} vs {yhat.shape}")
    if y.size == 0:
        raise DomainError("Label vectors are empty")
    return float(np.mean(y != yhat))


def ingest_predictions(path: PathLike, n: int) -> np.ndarray:
    """
    Read n 0/1 labels produced by an external detector.

    The file holds either one label per line, or a CSV with a ``label``
    column in its header.

    Raises:
        DataFormatError: On a wrong count or a non-binary value (with line number)
        OSError: If the file cannot be read
    """
    with open(path, newline='') as handle:
        lines = handle.read().splitlines()
    while lines and not lines[-1].strip():
        lines.pop()

    labels = []
    if lines and LABEL_COLUMN in [name.strip() for name in lines[0].split(',')]:
        reader = csv.reader(lines)
        header = [name.strip() for name in next(reader)]
        label_at = header.index(LABEL_COLUMN)
        for line, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise DataFormatError(f"expected {len(header)} fields, got {len(record)}", line=line)
            labels.append(parse_label(record[label_at], line))
        first_line = 2
    else:
        for line, text in enumerate(lines, start=1):
            labels.append(parse_label(text, line))
        first_line = 1

    if len(labels) < n:
        raise DataFormatError(
            f"expected {n} labels, got {len(labels)} (short by {n - len(labels)})",
            line=first_line + len(labels),
        )
    if len(labels) > n:
        raise DataFormatError(
            f"expected {n} labels, got {len(labels)} ({len(labels) - n} extra)",
            line=first_line + n,
        )
    return np.array(labels, dtype=np.int64)


def _run_replication(task: ReplicationTask) -> ReplicationOutcome:
    spec = task.spec
    cell = task.cell
    dataset = sample_dataset(ContaminationConfig(
        n=spec.n,
        p=cell.p,
        epsilon=cell.epsilon,
        eta=cell.eta,
        gamma=cell.gamma,
        rho=cell.rho,
        seed=derive_seed(spec.master_seed, task.cell_index, task.r, DATASET_KEY),
    ))
    stem = f"{cell.stem}_r{task.r}"
    if spec.export_dir:
        write_dataset(Path(spec.export_dir) / f"{stem}.csv", dataset.data, dataset.labels)

    method_seed = derive_seed(spec.master_seed, task.cell_index, task.r, METHOD_KEY)
    losses: Dict[str, Optional[float]] = {}
    started = time.perf_counter()
    try:
        result = detect(
            dataset.data,
            mode=METHODS[spec.method],
            rssl=replace(spec.rssl, seed=method_seed),
            mcd=replace(spec.mcd, seed=method_seed),
        )
        losses[spec.method] = zero_one_loss(dataset.labels, result.labels)
    except OutlierDetectionError as e:
        logger.warning(f"Replication failed: {spec.method} {stem}: {e}")
        losses[spec.method] = None
    runtime = time.perf_counter() - started if spec.record_timing else 0.0

    for name, directory in spec.comparators:
        try:
            predictions = ingest_predictions(Path(directory) / f"{stem}.csv", spec.n)
            losses[name] = zero_one_loss(dataset.labels, predictions)
        except (OutlierDetectionError, OSError) as e:
            logger.warning(f"Comparator '{name}' unusable for {stem}: {e}")
            losses[name] = None

    return ReplicationOutcome(cell_index=task.cell_index, r=task.r, losses=losses, runtime_s=runtime)


def _aggregate(spec: BenchmarkSpec, cells: List[Cell], outcomes: List[ReplicationOutcome]) -> BenchmarkReport:
    keyed = {(o.cell_index, o.r): o for o in outcomes}
    methods = [spec.method] + [name for name, _ in spec.comparators]
    rows = []
    for cell_index, cell in enumerate(cells):
        replications = [keyed[(cell_index, r)] for r in range(spec.R)]
        for method in methods:
            losses = [o.losses[method] for o in replications if o.losses.get(method) is not None]
            failures = spec.R - len(losses)
            if losses:
                mean = float(np.mean(losses))
                sd = float(np.std(losses, ddof=1)) if len(losses) > 1 else 0.0
            else:
                mean = sd = math.nan
            if method == spec.method:
                timed = [o.runtime_s for o in replications if o.losses.get(method) is not None]
                runtime = float(np.mean(timed)) if timed else 0.0
            else:
                runtime = 0.0
            rows.append(BenchmarkRow(
                p=cell.p, epsilon=cell.epsilon, eta=cell.eta, gamma=cell.gamma, rho=cell.rho,
                n=spec.n, method=method, mean_ave=mean, sd=sd,
                mean_runtime_s=runtime, failures=failures,
            ))
            if failures:
                logger.warning(f"{failures} of {spec.R} replications failed for {method} {cell.stem}")
        logger.info(f"Benchmark cell {cell.stem} complete")
    return BenchmarkReport(rows=tuple(sorted(rows, key=lambda row: row.sort_key)))


def run_benchmark(spec: BenchmarkSpec, workers: int = 1) -> BenchmarkReport:
    """
    Run every (cell, replication) of a benchmark and aggregate the losses.

    Args:
        spec: Benchmark definition
        workers: Processes running replications; numbers do not depend on it

    Returns:
        BenchmarkReport: rows sorted by (p, epsilon, eta, gamma, rho, method);
            also written to spec.output_path when set
    """
    cells = spec.grid.cells()
    if spec.export_dir:
        Path(spec.export_dir).mkdir(parents=True, exist_ok=True)
    tasks = [
        ReplicationTask(cell_index=c, cell=cell, r=r, spec=spec)
        for c, cell in enumerate(cells)
        for r in range(spec.R)
    ]
    logger.info(f"Running benchmark: {len(cells)} cells x {spec.R} replications, method={spec.method}")
    outcomes = process_map(_run_replication, tasks, workers)
    report = _aggregate(spec, cells, outcomes)
    if spec.output_path:
        write_report(report, spec.output_path, spec.report_format)
    return report


def _format_row(row: BenchmarkRow) -> List[str]:
    return [
        str(row.p),
        format_float(row.epsilon),
        format_float(row.eta),
        format_float(row.gamma),
        format_float(row.rho),
        str(row.n),
        row.method,
        f"{row.mean_ave:.6g}",
        f"{row.sd:.6g}",
        f"{row.mean_runtime_s:.6g}",
        str(row.failures),
    ]


def emit_report(report: BenchmarkReport, format: str = 'csv') -> str:
    """
    Serialize a report.

    Args:
        report: Benchmark report
        format: 'csv' (columns in REPORT_COLUMNS order) or 'markdown'

    Returns:
        str: Serialized text; numbers carry 6 significant digits
    """
    if format not in REPORT_FORMATS:
        raise DomainError(f"Unknown report format '{format}'")
    records = [_format_row(row) for row in report.rows]
    if format == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(REPORT_COLUMNS)
        writer.writerows(records)
        return buffer.getvalue()

    lines = [
        '| ' + ' | '.join(REPORT_COLUMNS) + ' |',
        '|' + '|'.join('---' for _ in REPORT_COLUMNS) + '|',
    ]
    lines.extend('| ' + ' | '.join(record) + ' |' for record in records)
    return '\n'.join(lines) + '\n'


def parse_report(text: str, format: str = 'csv') -> BenchmarkReport:
    """
    Read back a report written by emit_report.

    Raises:
        DataFormatError: If the header or a row does not match the report layout
    """
    if format not in REPORT_FORMATS:
        raise DomainError(f"Unknown report format '{format}'")
    if format == 'csv':
        records = list(csv.reader(io.StringIO(text)))
    else:
        records = [
            [cell.strip() for cell in line.strip().strip('|').split('|')]
            for line in text.splitlines() if line.strip()
        ]
        if len(records) >= 2:
            del records[1]

    if not records or tuple(records[0]) != REPORT_COLUMNS:
        raise DataFormatError("report header does not match the expected columns", line=1)

    rows = []
    for line, record in enumerate(records[1:], start=2):
        if len(record) != len(REPORT_COLUMNS):
            raise DataFormatError(f"expected {len(REPORT_COLUMNS)} fields, got {len(record)}", line=line)
        values = dict(zip(REPORT_COLUMNS, record))
        try:
            rows.append(BenchmarkRow(
                p=int(values['p']),
                epsilon=float(values['epsilon']),
                eta=float(values['eta']),
                gamma=float(values['gamma']),
                rho=float(values['rho']),
                n=int(values['n']),
                method=values['method'],
                mean_ave=float(values['mean_ave']),
                sd=float(values['sd']),
                mean_runtime_s=float(values['mean_runtime_s']),
                failures=int(values['failures']),
            ))
        except ValueError as e:
            raise DataFormatError(f"unparseable report value ({e})", line=line) from e
    return BenchmarkReport(rows=tuple(rows))


def write_report(report: BenchmarkReport, path: PathLike, format: str = 'csv') -> None:
    """
    Write a serialized report to path.

    Raises:
        OSError: If the destination cannot be written
    """
    text = emit_report(report, format)
    with open(path, 'w', newline='') as handle:
        handle.write(text)
    logger.info(f"Wrote {len(report.rows)} report rows to {path}")


def _preset_spec(method: str, p: Tuple[int, ...], n: int, B: int, R: int) -> BenchmarkSpec:
    return BenchmarkSpec(
        grid=ParameterGrid(
            p=p,
            epsilon=(0.05, 0.1, 0.15),
            eta=(2.0, 5.0),
            gamma=(2.0, 5.0),
            rho=(0.1,),
            pair_eta_gamma=True,
        ),
        n=n,
        method=method,
        R=R,
        rssl=RsslConfig(B=B),
    )


PRESETS = {
    'desk-ld': lambda: _preset_spec('rssl-ld', (30,), n=1500, B=100, R=20),
    'desk-hd': lambda: _preset_spec('rssl-hd', (1000,), n=100, B=450, R=20),
    'full-ld': lambda: _preset_spec('rssl-ld', (30, 40, 50, 60, 70), n=1500, B=450, R=200),
    'full-hd': lambda: _preset_spec('rssl-hd', (1000, 2000, 3000, 4000, 5000), n=100, B=450, R=200),
}


def preset(name: str) -> BenchmarkSpec:
    """
    Built-in benchmark definitions.

    ``desk-*`` presets keep runtime short (R=20); ``full-*`` presets sweep
    the full dimension ranges with R=200 and B=450.
    """
    if name not in PRESETS:
        raise ConfigurationError(f"Unknown preset '{name}', expected one of {sorted(PRESETS)}")
    return PRESETS[name]()
