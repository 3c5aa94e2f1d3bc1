"""Executable annotation scheme: coders judge dimensions, the engine
derives the category.

Dimensions: the message type, the underlying perspective (problem/suffering
vs. solution/coping, or neither for irrelevant postings), first/third
person for personal stories, a serious flag (only irrelevant postings may
be non-serious), and two content flags that drive the priority rules:
whether the posting focuses on a bereaved person's experience and whether
it mentions an actual suicide case.

Priority order: a bereaved focus wins over the case (a bereaved story
necessarily involves one); an actual case mentioned without bereaved focus
wins over everything else, including prevention content; otherwise the
message-type/perspective grid cell applies. Non-serious postings are
off-topic by definition; serious irrelevant postings with any suicide
context (a perspective toward suicide or a mentioned case) fall into the
suicide-other bucket, the rest are off-topic.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from enum import Enum

from .. import taxonomy as tax


class MessageType(str, Enum):
    PERSONAL_EXPERIENCE = "personal_experience"
    NEWS_EXPERIENCE = "news_experience"
    BEREAVED_EXPERIENCE = "bereaved_experience"
    CASE_REPORT = "case_report"
    CALL_FOR_ACTION = "call_for_action"
    IRRELEVANT = "irrelevant"


class Perspective(str, Enum):
    PROBLEM_SUFFERING = "problem_suffering"
    SOLUTION_COPING = "solution_coping"
    NEITHER = "neither"


class Person(str, Enum):
    FIRST = "first"
    THIRD = "third"
    NOT_APPLICABLE = "not_applicable"


_PERSONAL_TYPES = (MessageType.PERSONAL_EXPERIENCE, MessageType.BEREAVED_EXPERIENCE)

# message type x perspective grid (problem cell, solution cell)
_GRID = {
    MessageType.PERSONAL_EXPERIENCE: (tax.SUICIDAL, tax.COPING),
    MessageType.NEWS_EXPERIENCE: (tax.NEWS_SUICIDAL, tax.NEWS_COPING),
    MessageType.BEREAVED_EXPERIENCE: (tax.BEREAVED_NEGATIVE, tax.BEREAVED_COPING),
    MessageType.CASE_REPORT: (tax.SUICIDE_CASES, tax.LIVES_SAVED),
    MessageType.CALL_FOR_ACTION: (tax.AWARENESS, tax.PREVENTION),
}


class InvalidAnnotation(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class DimensionAnnotation:
    message_type: MessageType
    perspective: Perspective
    person: Person = Person.NOT_APPLICABLE
    serious: bool = True
    focus_on_bereaved: bool = False
    mentions_case: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("message_type", "perspective", "person"):
            d[key] = d[key].value
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "DimensionAnnotation":
        try:
            return cls(
                message_type=MessageType(data["message_type"]),
                perspective=Perspective(data["perspective"]),
                person=Person(data.get("person", "not_applicable")),
                serious=bool(data.get("serious", True)),
                focus_on_bereaved=bool(data.get("focus_on_bereaved", False)),
                mentions_case=bool(data.get("mentions_case", False)),
            )
        except KeyError as exc:
            raise InvalidAnnotation(str(exc.args[0]), "missing dimension") from None
        except ValueError as exc:
            raise InvalidAnnotation("dimensions", str(exc)) from None


def validate(dims: DimensionAnnotation) -> None:
    """Raise InvalidAnnotation naming the offending field."""
    mt = dims.message_type
    if dims.perspective is Perspective.NEITHER and mt is not MessageType.IRRELEVANT:
        raise InvalidAnnotation("perspective",
                                "'neither' is only possible for irrelevant postings")
    if not dims.serious and mt is not MessageType.IRRELEVANT:
        raise InvalidAnnotation("serious",
                                "only irrelevant postings can be marked not serious")
    if mt in _PERSONAL_TYPES:
        if dims.person is Person.NOT_APPLICABLE:
            raise InvalidAnnotation("person",
                                    "personal stories need a first/third person judgment")
    elif dims.person is not Person.NOT_APPLICABLE:
        raise InvalidAnnotation("person",
                                f"person does not apply to {mt.value} postings")
    if dims.focus_on_bereaved and not dims.mentions_case:
        raise InvalidAnnotation("focus_on_bereaved",
                                "a bereaved story necessarily refers to a suicide case")
    if mt is MessageType.BEREAVED_EXPERIENCE and not dims.focus_on_bereaved:
        raise InvalidAnnotation("focus_on_bereaved",
                                "bereaved-experience postings focus on the bereaved")
    if mt is MessageType.IRRELEVANT and dims.focus_on_bereaved:
        raise InvalidAnnotation("focus_on_bereaved",
                                "a posting focused on a bereaved person is not irrelevant")


def is_valid(dims: DimensionAnnotation) -> bool:
    try:
        validate(dims)
        return True
    except InvalidAnnotation:
        return False


def derive_category(dims: DimensionAnnotation) -> str:
    """Map a validated dimension judgment to one of the 12 fine categories."""
    validate(dims)
    mt = dims.message_type
    if mt is MessageType.IRRELEVANT:
        if not dims.serious:
            return tax.OFF_TOPIC
        if dims.perspective is not Perspective.NEITHER or dims.mentions_case:
            return tax.SUICIDE_OTHER
        return tax.OFF_TOPIC
    solution = dims.perspective is Perspective.SOLUTION_COPING
    if dims.focus_on_bereaved:
        return tax.BEREAVED_COPING if solution else tax.BEREAVED_NEGATIVE
    if dims.mentions_case:
        return tax.SUICIDE_CASES
    problem_cell, solution_cell = _GRID[mt]
    return solution_cell if solution else problem_cell


def adjudication_hints(dims: DimensionAnnotation) -> list[str]:
    """Situations the scheme's rules do not settle cleanly.

    These do not block label submission; they flag the record for review.
    """
    hints = []
    if (dims.message_type is MessageType.NEWS_EXPERIENCE and dims.focus_on_bereaved):
        hints.append("news report quoting a bereaved first-person account: "
                     "bereaved focus applied, adjudication suggested")
    if (dims.message_type is MessageType.CASE_REPORT
            and dims.perspective is Perspective.SOLUTION_COPING
            and dims.mentions_case):
        hints.append("completed case described with a solution focus: "
                     "case priority applied over lives-saved, adjudication suggested")
    return hints


def enumerate_valid_annotations() -> list[DimensionAnnotation]:
    """The full lattice of annotations that pass validation."""
    out = []
    for mt in MessageType:
        for perspective in Perspective:
            for person in Person:
                for serious in (True, False):
                    for bereaved in (True, False):
                        for case in (True, False):
                            dims = DimensionAnnotation(
                                message_type=mt, perspective=perspective,
                                person=person, serious=serious,
                                focus_on_bereaved=bereaved, mentions_case=case,
                            )
                            if is_valid(dims):
                                out.append(dims)
    return out
