import csv
import json
import logging
import pathlib
from typing import List, Optional, Tuple

from ..save_data.save_base import SaveBase, StateFileError
from ..state import TripartitePureState

logger = logging.getLogger(__name__)

Table = Tuple[List[str], List[List[str]]]


class SaveStateOnDisk(SaveBase):
    """
    Stores tripartite pure states as state JSON documents.
    """

    def read_info(self, path: Optional[str] = None) -> dict:
        """
        Method reads a JSON document from a file.
        :param path: Path to file, the store address by default.
        :return: Parsed document.
        """
        path = path or self.address
        try:
            text = pathlib.Path(path).read_text(encoding="utf-8")
        except OSError as err:
            raise StateFileError(f"Cannot read state file '{path}': {err}") from err
        try:
            return json.loads(text)
        except json.JSONDecodeError as err:
            raise StateFileError(f"State file '{path}' is not valid JSON: {err}") from err

    def save_info(self, path: Optional[str], data: dict) -> None:
        """
        Method saves a dictionary to a JSON file.
        :param path: Path to file, the store address by default.
        :param data: Dictionary that should be saved.
        """
        path = path or self.address
        with open(path, mode="w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
        logger.debug("saved %s", path)

    def read_state(self, path: Optional[str] = None) -> TripartitePureState:
        return TripartitePureState.from_dict(self.read_info(path))


class SaveTableOnDisk(SaveBase):
    """
    Stores a header and rows of already formatted cells as a CSV file.
    """

    def read_info(self, path: Optional[str] = None) -> Table:
        """
        Method reads a CSV file back into header and rows.
        :param path: Path to file, the store address by default.
        :return: (header, rows) with every cell as a string.
        """
        path = path or self.address
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                lines = list(csv.reader(fh))
        except OSError as err:
            raise StateFileError(f"Cannot read table '{path}': {err}") from err
        if not lines:
            raise StateFileError(f"Table '{path}' is empty")
        return lines[0], lines[1:]

    def save_info(self, path: Optional[str], data: Table) -> None:
        """
        Method writes the header row followed by the data rows.
        :param path: Path to file, the store address by default.
        :param data: (header, rows).
        """
        path = path or self.address
        header, rows = data
        with open(path, mode="w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        logger.info("wrote %d rows to %s", len(rows), path)

    def save_table(self, header: List[str], rows: List[List[str]]) -> None:
        self.save_info(self.address, (header, rows))
