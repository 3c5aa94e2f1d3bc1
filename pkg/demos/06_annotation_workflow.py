"""Round-based double coding with the annotation rule engine.

Coders judge dimensions (message type, perspective, flags); the engine
derives the category. Two coders label the same round, the live agreement
statistic updates, disagreements queue for adjudication, and the resolved
labels export as a training-ready labeled set.
"""

from tweetsift.annotate import AnnotationProject, DimensionAnnotation
from tweetsift.annotate.rules import MessageType, Person, Perspective
from tweetsift.corpus import Tweet

pool = [
    Tweet("p1", "you matter, the lifeline number is 988"),
    Tweet("p2", "suicide rates rose again this year, says new study"),
    Tweet("p3", "two years after my attempt I finally feel like myself"),
    Tweet("p4", "I can't see a way out anymore"),
    Tweet("p5", "this math homework is making me suicidal lol"),
    Tweet("p6", "remembering my brother today, five years after we lost him"),
]

PREVENTION = DimensionAnnotation(MessageType.CALL_FOR_ACTION, Perspective.SOLUTION_COPING)
AWARENESS = DimensionAnnotation(MessageType.CALL_FOR_ACTION, Perspective.PROBLEM_SUFFERING)
COPING = DimensionAnnotation(MessageType.PERSONAL_EXPERIENCE, Perspective.SOLUTION_COPING,
                             person=Person.FIRST)
SUICIDAL = DimensionAnnotation(MessageType.PERSONAL_EXPERIENCE, Perspective.PROBLEM_SUFFERING,
                               person=Person.FIRST)
JOKE = DimensionAnnotation(MessageType.IRRELEVANT, Perspective.NEITHER, serious=False)
BEREAVED = DimensionAnnotation(MessageType.BEREAVED_EXPERIENCE, Perspective.PROBLEM_SUFFERING,
                               person=Person.FIRST, focus_on_bereaved=True,
                               mentions_case=True)

project = AnnotationProject(pool)
round_ = project.create_round("random", 6, coders=["ann", "ben"], seed=1)
print(f"round {round_.id}: {len(round_.tweet_ids)} postings, coders {round_.coders}")

judgments = {
    "p1": (PREVENTION, PREVENTION),
    "p2": (AWARENESS, AWARENESS),
    "p3": (COPING, SUICIDAL),     # the classic hard call
    "p4": (SUICIDAL, SUICIDAL),
    "p5": (JOKE, JOKE),
    "p6": (BEREAVED, BEREAVED),
}
for coder_index, coder in enumerate(("ann", "ben")):
    while (task := project.next_task(round_.id, coder)) is not None:
        dims = judgments[task.id][coder_index]
        record = project.submit_label(round_.id, coder, task.id, dims)
        print(f"  {coder} labels {task.id}: {record.category}")

print("\nagreement at each taxonomy level:")
for level in (12, 6, 2):
    result = project.live_kappa(round_.id, level=level)
    print(f"  level {level:>2}: kappa {result.kappa:+.3f} "
          f"CI [{result.ci[0]:+.3f}, {result.ci[1]:+.3f}] on n={result.n}")

disagreed = project.disagreements(round_.id, level=12)
print(f"\n{len(disagreed)} disagreement(s):")
for item in disagreed:
    print(f"  {item['tweet_id']}: {item['labels']}  -> {item['text'][:40]!r}")

# An adjudicator settles the coping-vs-suicidal call directly.
project.submit_override(round_.id, "adjudicator", disagreed[0]["tweet_id"], "coping")
labeled = project.export_labeled(resolution="adjudicated")
print("\nexported labels:")
for entry in labeled:
    print(f"  {entry.tweet.id}: {entry.label}")
