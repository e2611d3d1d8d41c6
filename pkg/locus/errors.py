from typing import Any, Dict, Optional


class LocusException(Exception): ...


class CompactLocusException(LocusException): ...


class FieldError(CompactLocusException): ...


class FieldMismatchError(FieldError):
    def __init__(self, left: Any, right: Any) -> None:
        super().__init__(f"Cannot combine elements of {left} and {right}")
        self.left = left
        self.right = right


class ParameterError(CompactLocusException):
    def __init__(self, message: str, parameter: Optional[str] = None) -> None:
        super().__init__(message)
        self.parameter = parameter
        self.message = message


class ProfileError(ParameterError):
    def __init__(self, message: str, level: Optional[int] = None) -> None:
        super().__init__(message, parameter="profile")
        self.level = level


class UnsupportedModeError(CompactLocusException): ...


class ConfigCompositionException(CompactLocusException): ...


class ConfigValidationError(ConfigCompositionException):
    def __init__(self, message: str, path: Optional[str] = None) -> None:
        super().__init__(message)
        self.path = path


class MissingConfigException(IOError, ConfigCompositionException):
    def __init__(self, message: str, missing_cfg_file: Optional[str] = None) -> None:
        super().__init__(message)
        self.missing_cfg_file = missing_cfg_file


class DescriptorError(CompactLocusException): ...


class SingularMatrixError(LocusException): ...


class ConstructionError(LocusException): ...


class SingularInformationSetError(ConstructionError):
    def __init__(self, message: str, parameters: Dict[str, Any]) -> None:
        super().__init__(message)
        self.parameters = dict(parameters)
