from __future__ import annotations
import logging
from pathlib import Path
from typing import TYPE_CHECKING

from algorithms.gaps import check_users
from errors import ConfigError, EgalBanditError
from models.results import SweepRow
from models.traces import TraceSpec
from services.simulation_service import aggregate_runs, fit_loglog_slope

if TYPE_CHECKING:
    from models.config import ExperimentConfig
    from models.instances import EgalMabInstance
    from repositories.result_repository import ResultRepository
    from services.bound_service import BoundService
    from services.ingest_service import IngestService
    from services.instance_service import InstanceService
    from services.simulation_service import SimulationService

logger = logging.getLogger(__name__)


class ExperimentService:
    """
    Runs one configured command end to end and writes its CSV outputs.
    """

    def __init__(
        self,
        instance_service: InstanceService,
        simulation_service: SimulationService,
        bound_service: BoundService,
        ingest_service: IngestService,
        result_repo: ResultRepository,
    ):
        """
        Initializes the ExperimentService.

        Args:
            instance_service (InstanceService): Builds and loads instances.
            simulation_service (SimulationService): Runs replicated episodes.
            bound_service (BoundService): Evaluates regret bounds.
            ingest_service (IngestService): Builds instances from traces.
            result_repo (ResultRepository): Writes result files transactionally.
        """
        self.instance_service = instance_service
        self.simulation_service = simulation_service
        self.bound_service = bound_service
        self.ingest_service = ingest_service
        self.result_repo = result_repo

    def run(self, config: ExperimentConfig) -> tuple[bool, str]:
        """
        Executes `config.mode`. Files written by a failed command are removed.

        Args:
            config (ExperimentConfig): The validated configuration.

        Returns:
            tuple[bool, str]: Success flag and either the text to print
                (bounds rows, summaries, written files) or a one-line diagnostic.
        """
        transaction_committed = False
        try:
            self.result_repo.begin()
            match config.mode:
                case "bounds":
                    message = self._bounds(config)
                case "ingest-run":
                    message = self._ingest_run(config)
                case _:
                    message = self._simulate(config, self._fixed_instance(config))
            written = self.result_repo.commit()
            transaction_committed = True
            logger.info("[ExperimentService] %s wrote %d files to %s", config.mode, len(written), config.out)
            return (True, message)
        except EgalBanditError as e:
            logger.error("[ExperimentService ERROR] %s failed: %s", config.mode, e)
            if not transaction_committed:
                self.result_repo.rollback()
            return (False, str(e))
        except Exception as e:
            logger.exception("[ExperimentService ERROR] %s failed", config.mode)
            if not transaction_committed:
                self.result_repo.rollback()
            return (False, f"{type(e).__name__}: {e}")

    def _fixed_instance(self, config: ExperimentConfig) -> EgalMabInstance | None:
        """The instance shared by every U, or None when it is rebuilt per U."""
        if config.instance is not None:
            instance = self.instance_service.load(config.instance)
            if config.K is not None and config.K != instance.K:
                raise ConfigError(f"K={config.K} but {config.instance} has {instance.K} arms.", key="K")
            return instance
        if config.mode == "bounds" and not config.gen:
            return None
        if config.generator.depends_on_users:
            return None
        return self.instance_service.generate(config.generator, config.K, config.U[0], config.T, config.seed or 0)

    def _instance_for(self, config: ExperimentConfig, fixed: EgalMabInstance | None, U: int, T: int) -> EgalMabInstance:
        if fixed is not None:
            return fixed
        return self.instance_service.generate(config.generator, config.K, U, T, config.seed or 0)

    def _save_instance(self, config: ExperimentConfig, instance: EgalMabInstance, U: int, per_user: bool) -> None:
        if config.save_instance is None:
            return
        path = Path(config.save_instance)
        if per_user:
            path = path.with_name(f"{path.stem}_U{U}{path.suffix}")
        self.instance_service.save(path, instance)

    def _simulate(self, config: ExperimentConfig, fixed: EgalMabInstance | None) -> str:
        header = config.provenance_lines()
        out = Path(config.out)
        suffixed = config.multi_user
        rows: list[SweepRow] = []

        for U in config.U:
            T = config.horizon_for(U)
            instance = self._instance_for(config, fixed, U, T)
            check_users(instance.K, U)
            if fixed is None or U == config.U[0]:
                self._save_instance(config, instance, U, per_user=fixed is None and suffixed)

            runs = self.simulation_service.run_many(instance, U, T, config.policy, config.runs, config.seed)
            aggregate = aggregate_runs(runs, instance)
            tag = f"_U{U}" if suffixed else ""
            self.result_repo.write_runs(out / f"runs{tag}.csv", runs, header, config.record_every)
            self.result_repo.write_aggregate(out / f"aggregate{tag}.csv", aggregate, header, config.record_every)
            rows.append(SweepRow(
                policy=config.policy,
                U=U,
                T=T,
                mean_regret=float(aggregate.mean_regret[-1]),
                min_regret=float(aggregate.min_regret[-1]),
                max_regret=float(aggregate.max_regret[-1]),
                n_runs=aggregate.n_runs,
            ))
            logger.info("[ExperimentService] U=%d T=%d mean regret %.6g", U, T, rows[-1].mean_regret)

        if suffixed or config.mode == "sweep-users":
            self.result_repo.write_sweep(out / "sweep.csv", rows, header)
        if config.fit_slope:
            self._write_slope(out, rows, header)
        return f"Wrote {config.mode} results for U={','.join(map(str, config.U))} to {out}"

    def _write_slope(self, out: Path, rows: list[SweepRow], header: list[str]) -> None:
        points = [(row.U, row.mean_regret) for row in rows if row.mean_regret > 0]
        dropped = [row.U for row in rows if row.mean_regret <= 0]
        if dropped:
            logger.warning("[ExperimentService] Slope fit skips zero-regret U=%s.", ",".join(map(str, dropped)))
        slope = fit_loglog_slope(points)
        logger.info("[ExperimentService] log-log slope of mean regret against U: %.6g", slope)
        self.result_repo.write_slope(out / "slope.csv", points, slope, header)

    def _bounds(self, config: ExperimentConfig) -> str:
        fixed = self._fixed_instance(config)
        reports = []
        for U in config.U:
            if fixed is None and not config.gen:
                reports.append(self.bound_service.for_gaps(config.K, U, config.T, config.delta_min, config.delta_max))
            else:
                instance = self._instance_for(config, fixed, U, config.T)
                reports.append(self.bound_service.for_instance(instance, U, config.T))
        self.result_repo.write_bounds(Path(config.out) / "bounds.csv", reports, config.provenance_lines())
        return self.result_repo.format_bounds(reports).rstrip("\n")

    def _ingest_run(self, config: ExperimentConfig) -> str:
        spec = TraceSpec(
            path=config.trace,
            id_column=config.id_column,
            value_column=config.value_column,
            negate=config.negate,
            top_k=config.K,
            max_rows=config.max_rows,
            selection=config.selection,
        )
        instance, id_map = self.ingest_service.load_instance(spec)
        self.result_repo.write_id_map(Path(config.out) / "id_map.csv", id_map, config.provenance_lines())
        message = self._simulate(config, instance)
        if config.summary:
            summaries = [self.ingest_service.summarize(instance, U).rstrip("\n") for U in config.U]
            message = "\n".join(summaries + [message])
        return message
