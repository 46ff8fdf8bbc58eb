"""Console output: status lines and report tables."""

from .feedback import loading_indicator, show_error, show_info, show_success, show_warning
from .reports import covers_table, data_table, print_report, report_table, stage_panel

__all__ = [
    "loading_indicator",
    "show_success",
    "show_error",
    "show_info",
    "show_warning",
    "report_table",
    "data_table",
    "stage_panel",
    "covers_table",
    "print_report",
]
