from abc import ABC, abstractmethod
from typing import Any


class StateFileError(ValueError):
    """
    File is missing, unreadable or does not hold the expected document.
    """
    pass


class SaveBase(ABC):
    """
    SaveBase abstract class. The address is the default file of the store.
    """

    def __init__(self, address: str):
        self.address = address

    @abstractmethod
    def save_info(self, path: str, data: Any) -> None:
        ...

    @abstractmethod
    def read_info(self, path: str) -> Any:
        ...
