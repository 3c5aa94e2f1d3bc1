from .project import AnnotationProject, Round
from .rules import (
    DimensionAnnotation,
    InvalidAnnotation,
    MessageType,
    Person,
    Perspective,
    derive_category,
    enumerate_valid_annotations,
)
from .store import LabelRecord, LabelStore

__all__ = [
    "AnnotationProject",
    "Round",
    "DimensionAnnotation",
    "InvalidAnnotation",
    "MessageType",
    "Person",
    "Perspective",
    "derive_category",
    "enumerate_valid_annotations",
    "LabelRecord",
    "LabelStore",
]
