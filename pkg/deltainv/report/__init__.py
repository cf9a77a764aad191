"""Report records and their JSON / CSV emitters."""

from deltainv.report.emit import read_report, render, to_csv, to_json, write_report
from deltainv.report.model import OptimizerMeta, ReportRecord

__all__ = ["OptimizerMeta", "ReportRecord", "read_report", "render", "to_csv", "to_json", "write_report"]
