"""Setup for signac, signac-flow for the verification battery."""
import os

import flow
import signac
from flow import aggregator


class Project(flow.FlowProject):
    """Subclass of FlowProject to provide custom methods and attributes."""

    def __init__(self):
        super().__init__()


def _is_swept(job: signac.job.Job):
    """Check if the sweep of a job has been stored."""
    return job.doc.get("sweep") is not None and job.isfile("sweep.csv")


@Project.label
def swept(job):
    """Generate label if the sweep of the job is stored."""
    return _is_swept(job)


@Project.label
def gate_passed(job):
    """Generate label if the stored sweep passed its refinement gate."""
    return bool(job.doc.get("sweep", {}).get("passed"))


@Project.operation
@Project.post(_is_swept)
@flow.with_job
def run_sweep(job):
    """Run the sweep named by the statepoint and store its report."""
    from laguerre_project.src.analysis.battery import sweep_job

    sweep_job(job)


@aggregator()
@Project.operation
@Project.pre(lambda *jobs: all(_is_swept(job) for job in jobs))
@Project.post(
    lambda *jobs: os.path.isfile(signac.get_project().fn("criterion_summary.json"))
)
def criterion(*jobs):
    """Write the consolidated criterion table and its JSON summary."""
    import pandas as pd

    from laguerre_project import __version__
    from laguerre_project.src.analysis.report import (
        REPORT_COLUMNS,
        summary_json,
    )

    rows = []
    for job in sorted(jobs, key=lambda job: job.id):
        summary = job.doc["sweep"]
        condition = job.sp.get("condition")
        # the control is expected to fail its gate
        passed = summary["passed"]
        if condition == "negative_control" and passed is not None:
            passed = not passed
        rows.append(
            {
                "operator": summary["name"],
                "condition": f"{condition}/alpha={job.sp.get('alpha')}",
                "max": summary["max"],
                "delta": summary["delta"],
                "passed": passed,
                "config_hash": job.id,
            }
        )
    table = pd.DataFrame(rows, columns=list(REPORT_COLUMNS))
    project = signac.get_project()
    table.to_csv(project.fn("criterion_report.csv"), index=False)
    with open(project.fn("criterion_summary.json"), "w") as handle:
        handle.write(summary_json(table, {"version": __version__}))


if __name__ == "__main__":
    pr = Project()
    pr.main()
