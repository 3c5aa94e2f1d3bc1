"""Category taxonomy: the 12 fine annotation categories and the two
coarser levels used for model training and evaluation.

Level 12 is the full annotation scheme. Level 6 keeps the five
prevention-relevant categories with enough training data and folds
everything else into ``irrelevant``. Level 2 separates postings about
actual suicide from off-topic uses of the word.
"""

from __future__ import annotations

# Fine categories, canonical order. Grid rows: message type x perspective,
# irrelevant block last.
SUICIDAL = "suicidal_ideation_attempts"
COPING = "coping"
NEWS_SUICIDAL = "news_suicidal"
NEWS_COPING = "news_coping"
BEREAVED_NEGATIVE = "bereaved_negative"
BEREAVED_COPING = "bereaved_coping"
SUICIDE_CASES = "suicide_cases"
LIVES_SAVED = "lives_saved"
AWARENESS = "awareness"
PREVENTION = "prevention"
SUICIDE_OTHER = "suicide_other"
OFF_TOPIC = "off_topic"

FINE_CATEGORIES = (
    SUICIDAL,
    COPING,
    NEWS_SUICIDAL,
    NEWS_COPING,
    BEREAVED_NEGATIVE,
    BEREAVED_COPING,
    SUICIDE_CASES,
    LIVES_SAVED,
    AWARENESS,
    PREVENTION,
    SUICIDE_OTHER,
    OFF_TOPIC,
)

IRRELEVANT = "irrelevant"
ABOUT_SUICIDE = "about_suicide"

# Six-class level: the five main categories plus a catch-all.
TASK1_CLASSES = (SUICIDAL, COPING, AWARENESS, PREVENTION, SUICIDE_CASES, IRRELEVANT)

# Binary level: actual suicide vs. another meaning of the word.
TASK2_CLASSES = (ABOUT_SUICIDE, OFF_TOPIC)

_TASK1_KEPT = {SUICIDAL, COPING, AWARENESS, PREVENTION, SUICIDE_CASES}


def to_task1(category: str) -> str:
    """Collapse a fine category to the six-class level."""
    if category in TASK1_CLASSES:
        return category
    if category not in FINE_CATEGORIES:
        raise ValueError(f"unknown category: {category!r}")
    return category if category in _TASK1_KEPT else IRRELEVANT


def to_task2(category: str) -> str:
    """Collapse a fine or six-class category to the binary level."""
    if category in TASK2_CLASSES:
        return category
    if category not in FINE_CATEGORIES and category != IRRELEVANT:
        raise ValueError(f"unknown category: {category!r}")
    return OFF_TOPIC if category == OFF_TOPIC else ABOUT_SUICIDE


def classes_for_level(level: int) -> tuple[str, ...]:
    if level == 12:
        return FINE_CATEGORIES
    if level == 6:
        return TASK1_CLASSES
    if level == 2:
        return TASK2_CLASSES
    raise ValueError(f"taxonomy level must be 12, 6 or 2, got {level}")


def map_to_level(category: str, level: int) -> str:
    if level == 12:
        if category not in FINE_CATEGORIES:
            raise ValueError(f"unknown fine category: {category!r}")
        return category
    if level == 6:
        return to_task1(category)
    if level == 2:
        return to_task2(category)
    raise ValueError(f"taxonomy level must be 12, 6 or 2, got {level}")


def classes_for_task(task: int) -> tuple[str, ...]:
    """Class list for a classification task (1 = six classes, 2 = binary)."""
    if task == 1:
        return TASK1_CLASSES
    if task == 2:
        return TASK2_CLASSES
    raise ValueError(f"task must be 1 or 2, got {task}")


def map_to_task(category: str, task: int) -> str:
    return to_task1(category) if task == 1 else to_task2(category)


# Annotation guidance served over the taxonomy endpoint so the labeling UI
# renders definitions and sample texts without hardcoding them. Sample texts
# are fabricated illustrations, not real postings.
CATEGORY_GUIDE: dict[str, dict] = {
    SUICIDAL: {
        "title": "Suicidal ideation & attempts",
        "definition": (
            "A personal story (first or third person) about someone's suicidal "
            "thoughts, related suffering, suicidal announcements, or a suicide "
            "attempt, with no sense of hope or coping."
        ),
        "examples": [
            "I keep pretending everything is fine but the thoughts won't stop.",
            "My roommate is back in the ER after another attempt. I don't know what to do.",
        ],
    },
    COPING: {
        "title": "Coping",
        "definition": (
            "A personal story about suicidal thoughts or an attempt that carries "
            "some sense of hope, recovery, coping, or an alternative to suicide. "
            "Neutral tone counts; clearly past-tense suicidal experiences count "
            "because they imply the person survived."
        ),
        "examples": [
            "Two years ago I nearly ended it. Today I signed the lease on my own place.",
            "Therapy didn't fix everything, but I stopped wanting to die.",
        ],
    },
    NEWS_SUICIDAL: {
        "title": "News: suicidal ideation & attempts",
        "definition": (
            "A news-outlet report about suicidal experiences or behavior short of "
            "a death: ideation, attempts, announcements, someone put on suicide "
            "watch. Often about celebrities."
        ),
        "examples": [
            "Singer reveals she struggled with suicidal thoughts during the tour, reports say.",
        ],
    },
    NEWS_COPING: {
        "title": "News: coping",
        "definition": (
            "A news-outlet report about someone coping with or recovering from a "
            "suicidal crisis. First-person quotes inside a news item still count "
            "as news."
        ),
        "examples": [
            "Actor tells magazine how he rebuilt his life after a suicide attempt at 25.",
        ],
    },
    BEREAVED_NEGATIVE: {
        "title": "Bereaved: negative",
        "definition": (
            "Describes the suffering of a person who lost someone to suicide: "
            "grief, depression, loss, without any sense of coping. The posting "
            "necessarily refers to a suicide case but focuses on the bereaved "
            "person's experience."
        ),
        "examples": [
            "Five years since my brother took his life and the holidays still break me.",
        ],
    },
    BEREAVED_COPING: {
        "title": "Bereaved: coping",
        "definition": (
            "The experience of a bereaved person with a sense of hope, recovery or "
            "coping, however tentative."
        ),
        "examples": [
            "After losing my dad to suicide I started volunteering at a crisis line. It helps.",
        ],
    },
    SUICIDE_CASES: {
        "title": "Suicide cases",
        "definition": (
            "Reports an individual suicide death or a cluster of deaths, including "
            "expressions of doubt (apparent, suspected). Takes priority over other "
            "category criteria when a case is mentioned, unless the posting focuses "
            "on a bereaved person's experience."
        ),
        "examples": [
            "Local teen dies by suicide after months of bullying, school district says.",
            "Such a loss. If you are struggling please call the hotline. (still a case report)",
        ],
    },
    LIVES_SAVED: {
        "title": "Lives saved",
        "definition": (
            "A report or personal message about someone saving a person who was "
            "about to take their own life, often incidentally."
        ),
        "examples": [
            "Ferry crew pulled a man from the water last night. He's safe and getting help.",
        ],
    },
    AWARENESS: {
        "title": "Awareness",
        "definition": (
            "A general call for attention to the problem of suicide: statistics, "
            "risk factors, research findings, please-retweet chains, without "
            "hinting at any solution or action that could help."
        ),
        "examples": [
            "Suicide is now the second leading cause of death for ages 10 to 34.",
            "RT if you think nobody talks about veteran suicide enough.",
        ],
    },
    PREVENTION: {
        "title": "Prevention",
        "definition": (
            "Spreads a solution or an attempt to solve the problem: helpline "
            "numbers, being there for someone, warning signs to watch for, "
            "prevention events, barriers on bridges. Any hint at a way of dealing "
            "with the problem is enough."
        ),
        "examples": [
            "You matter. If tonight feels impossible, the lifeline is 988. Please call.",
            "Our city council just funded a bridge safety net. This saves lives.",
        ],
    },
    SUICIDE_OTHER: {
        "title": "Suicide, other",
        "definition": (
            "About actual suicide but fitting no category of interest: "
            "murder-suicides, confident statements that a death was not a suicide "
            "or that the author is not suicidal, suicides more than 40 years ago, "
            "fiction about suicide, opinions about suicide in general."
        ),
        "examples": [
            "The novel ends with the narrator's suicide and I'm still thinking about it.",
        ],
    },
    OFF_TOPIC: {
        "title": "Off-topic",
        "definition": (
            "Uses suicide-related words in another meaning or context: bombings, "
            "euthanasia, jokes, sarcasm, exaggerations, metaphors like political "
            "suicide, band or movie names, suicidal animals."
        ),
        "examples": [
            "This group project is career suicide.",
            "My cat keeps darting under cars, I swear she's suicidal.",
        ],
    },
}
