import csv
import io
import json
from typing import Iterable, List, Sequence, Tuple

from tabulate import tabulate

from ..classify import Classification
from ..measures import REPORT_FIELDS, MeasureReport

MACHINE_FORMAT = ".17g"
HUMAN_FORMAT = ".6g"
RANK_FIELDS = ["rank_A", "rank_B", "rank_C"]


class FormatStr:
    """
    Class for formatting measure reports, sweeps and classifications.
    """

    @staticmethod
    def number(value: float) -> str:
        """
        Locale-independent decimal with 17 significant digits.
        """
        return format(float(value), MACHINE_FORMAT)

    @staticmethod
    def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
        """
        Method renders a header and rows as CSV text; floats get 17 significant digits.
        :param header: Column names.
        :param rows: Row values.
        :return: CSV text ending with a newline.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(FormatStr.csv_cells(row))
        return buffer.getvalue()

    @staticmethod
    def csv_cells(row: Sequence) -> List[str]:
        return [FormatStr.number(x) if isinstance(x, float) else str(x) for x in row]

    @staticmethod
    def report_json(report: MeasureReport, ranks: Tuple[int, int, int]) -> str:
        data = {name: float(FormatStr.number(value))
                for name, value in zip(REPORT_FIELDS, report.as_row())}
        data["ranks"] = list(ranks)
        return json.dumps(data)

    @staticmethod
    def report_csv(report: MeasureReport, ranks: Tuple[int, int, int]) -> str:
        return FormatStr.csv_text(REPORT_FIELDS + RANK_FIELDS,
                                  [report.as_row() + list(ranks)])

    @staticmethod
    def report_table(report: MeasureReport, ranks: Tuple[int, int, int]) -> str:
        """
        Method shows the report as a two-column table with 6 significant digits.
        :param report: MeasureReport instance.
        :param ranks: Local ranks.
        :return: Formatted table.
        """
        rows = [[name, value] for name, value in zip(REPORT_FIELDS, report.as_row())]
        rows.append(["ranks", "({}, {}, {})".format(*ranks)])
        return tabulate(rows, headers=["Measure", "Value"], tablefmt="fancy_grid",
                        floatfmt=HUMAN_FORMAT, colalign=("left", "right"))

    @staticmethod
    def classification(result: Classification) -> str:
        """
        Method shows the class label with the thresholds and the raw numbers it was
        decided from.
        :param result: Classification instance.
        :return: Formatted string.
        """
        rows = [["label", result.label],
                ["ranks", "({}, {}, {})".format(*result.ranks)],
                ["zero threshold", format(result.zero_threshold, HUMAN_FORMAT)],
                ["nonzero threshold", format(result.nonzero_threshold, HUMAN_FORMAT)]]
        rows += [[name, format(value, HUMAN_FORMAT)]
                 for name, value in zip(REPORT_FIELDS, result.report.as_row())]
        table = tabulate(rows, tablefmt="fancy_grid", colalign=("left", "right"))
        return f"{result.label}\n{table}"
