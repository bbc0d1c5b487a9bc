import asyncio
from functools import partial

import numpy as np

from bcs_gap_service.src.core.config import Settings
from bcs_gap_service.src.core.exceptions import InvalidParameter, NotConverged
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.models.gap import GapSurface, SolveReport, SurfaceChecks, WindowCertificate
from bcs_gap_service.src.domain.models.model import ValidatedModel
from bcs_gap_service.src.services.gap_operator_service import GapOperatorService
from bcs_gap_service.src.services.simple_gap_service import SimpleGapService


class SurfaceService:
    """Solves the gap equation on a temperature grid, one task per temperature."""

    def __init__(
            self,
            operator_service: GapOperatorService,
            simple_gap_service: SimpleGapService,
            settings: Settings,
            logger: Logger
    ):
        self.operator_service = operator_service
        self.simple_gap_service = simple_gap_service
        self.settings = settings
        self.logger = logger

    async def solve_surface(
            self,
            t_grid: np.ndarray,
            model: ValidatedModel,
            tol: float,
            max_iter: int,
            t_c: float,
            window: WindowCertificate
    ) -> GapSurface:
        """Solve every row and validate the surface invariants; rows come back in grid order."""
        t_grid = np.asarray(t_grid, dtype=float)
        if t_grid.size == 0 or np.any(np.diff(t_grid) <= 0):
            raise InvalidParameter("Temperature grid must be non-empty and strictly increasing")

        # Created per call so it binds to the running loop
        semaphore = asyncio.Semaphore(self.settings.max_concurrent_solves)
        results = await asyncio.gather(
            *(self._solve_row(semaphore, float(t), model, tol, max_iter, t_c, window) for t in t_grid)
        )
        values = np.vstack([row for row, _ in results])
        reports = [report for _, report in results]

        checks = self.check_surface(t_grid, values, reports, model, tol, t_c)
        self.logger.info(
            f"Solved gap surface with {t_grid.size} temperatures",
            extra={
                "iterations": sum(report.iterations for report in reports),
                "sandwich_ok": checks.sandwich_ok,
                "monotone_ok": checks.monotone_ok,
                "critical_row_ok": checks.critical_row_ok
            }
        )
        return GapSurface(temps=t_grid, nodes=model.nodes, values=values, reports=reports, checks=checks)

    async def _solve_row(
            self,
            semaphore: asyncio.Semaphore,
            t: float,
            model: ValidatedModel,
            tol: float,
            max_iter: int,
            t_c: float,
            window: WindowCertificate
    ) -> tuple[np.ndarray, SolveReport]:
        async with semaphore:
            # Zero is the only nonnegative fixed point once the linearized radius is <= 1
            init = np.zeros(model.rule.size) if t >= t_c else None
            solve = partial(
                self.operator_service.picard_solve,
                t,
                model,
                tol,
                max_iter,
                init=init,
                alpha=window.alpha,
                t_c=t_c,
                certified=window.covers(t, t_c)
            )

            loop = asyncio.get_running_loop()
            try:
                return await loop.run_in_executor(None, solve)
            except NotConverged as e:
                self.logger.error(f"Row solve failed: {e.message}", extra={"temperature": t})
                raise

    def check_surface(
            self,
            temps: np.ndarray,
            values: np.ndarray,
            reports: list[SolveReport],
            model: ValidatedModel,
            tol: float,
            t_c: float
    ) -> SurfaceChecks:
        """Sandwich between the simple gaps, monotonicity in T and the zero row at T_c."""
        params, rule = model.params, model.rule
        slack = np.array([10.0 * report.tolerance for report in reports])

        lower = self.simple_gap_service.gaps(params.u1, temps, params, rule)
        upper = self.simple_gap_service.gaps(params.u2, temps, params, rule)
        below = np.max(lower[:, None] - values - slack[:, None])
        above = np.max(values - upper[:, None] - slack[:, None])
        sandwich_violation = max(float(below), float(above), 0.0)

        # Rows increase in T, so each row must not exceed the previous one
        growth = np.diff(values, axis=0) - slack[1:, None]
        monotone_violation = max(float(growth.max()), 0.0) if growth.size else 0.0

        critical_rows = np.flatnonzero(temps >= t_c)
        critical_norm = float(np.max(np.abs(values[critical_rows]))) if critical_rows.size else 0.0

        return SurfaceChecks(
            sandwich_ok=sandwich_violation == 0,
            sandwich_violation=sandwich_violation,
            monotone_ok=monotone_violation == 0,
            monotone_violation=monotone_violation,
            critical_row_ok=critical_norm < 10.0 * tol,
            critical_row_norm=critical_norm
        )
