from typing import Any


class Field:
    """
    Base class that describes the logic for all validated values. Derived classes
    override 'validate', which runs on every assignment to 'value'.
    """

    def __init__(self, value: Any):
        self.value = value

    @property
    def value(self) -> Any:
        """
        Getter for the validated value.
        :return: Stored value.
        """
        return self._value

    @value.setter
    def value(self, value: Any) -> None:
        """
        Setter that validates the value before storing it.
        :param value: Raw value.
        :return: None.
        """
        self._value = self.validate(value)

    def validate(self, value: Any) -> Any:
        """
        Check and normalize a raw value.
        :param value: Raw value.
        :return: Value to store.
        """
        return value

    def __str__(self):
        return str(self._value)
