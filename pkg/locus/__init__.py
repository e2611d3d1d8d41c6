# Source of truth for locus's version
__version__ = "0.1.0"

from locus.core.field import FieldElement, FieldSpec, field_create, root_of_unity
from locus.errors import LocusException
from locus.types import JobKind, Outcome, Verdict

__all__ = [
    "__version__",
    "FieldElement",
    "FieldSpec",
    "JobKind",
    "LocusException",
    "Outcome",
    "Verdict",
    "field_create",
    "root_of_unity",
]
