import logging

import pytest

from tweetsift import taxonomy as tax
from tweetsift.annotate.project import AnnotationProject
from tweetsift.annotate.rules import (
    DimensionAnnotation,
    InvalidAnnotation,
    MessageType,
    Person,
    Perspective,
)
from tweetsift.annotate.store import LabelStore
from tweetsift.corpus import Tweet
from tweetsift.eval import cohens_kappa


def make_pool(n=30, text=None):
    return [Tweet(id=f"t{i}", text=text(i) if text else f"posting number {i}")
            for i in range(n)]


def prevention_dims():
    return DimensionAnnotation(MessageType.CALL_FOR_ACTION, Perspective.SOLUTION_COPING)


def awareness_dims():
    return DimensionAnnotation(MessageType.CALL_FOR_ACTION, Perspective.PROBLEM_SUFFERING)


def coping_dims():
    return DimensionAnnotation(MessageType.PERSONAL_EXPERIENCE, Perspective.SOLUTION_COPING,
                               person=Person.FIRST)


def suicidal_dims():
    return DimensionAnnotation(MessageType.PERSONAL_EXPERIENCE, Perspective.PROBLEM_SUFFERING,
                               person=Person.FIRST)


def off_topic_dims():
    return DimensionAnnotation(MessageType.IRRELEVANT, Perspective.NEITHER, serious=False)


class TestCreateRound:
    def test_random_round(self):
        project = AnnotationProject(make_pool(50))
        rnd = project.create_round("random", 10, coders=["ann"], seed=1)
        assert len(rnd.tweet_ids) == 10
        assert len(set(rnd.tweet_ids)) == 10

    def test_random_round_deterministic(self):
        a = AnnotationProject(make_pool(50)).create_round("random", 10, ["ann"], seed=9)
        b = AnnotationProject(make_pool(50)).create_round("random", 10, ["ann"], seed=9)
        assert a.tweet_ids == b.tweet_ids

    def test_partial_round_warns(self, caplog):
        project = AnnotationProject(make_pool(5))
        with caplog.at_level(logging.WARNING):
            rnd = project.create_round("random", 10, coders=["ann"])
        assert len(rnd.tweet_ids) == 5
        assert any("pool exhausted" in r.message for r in caplog.records)

    def test_model_seeded_up_to_targets(self):
        project = AnnotationProject(make_pool(900))
        predictions = {f"t{i}": tax.TASK1_CLASSES[i % 5] for i in range(900)}
        targets = {c: 150 for c in tax.TASK1_CLASSES[:5]}
        rnd = project.create_round("model_seeded", targets, coders=["a", "b"],
                                   predictions=predictions, seed=0)
        assert len(rnd.tweet_ids) == 750

    def test_model_seeded_labels_hidden(self):
        project = AnnotationProject(make_pool(20))
        predictions = {f"t{i}": "coping" for i in range(20)}
        rnd = project.create_round("model_seeded", {"coping": 5}, coders=["a"],
                                   predictions=predictions)
        assert "coping" not in str(rnd.to_dict().get("tweet_ids"))
        assert "predictions" not in rnd.to_dict()

    def test_keyword_seeded_only_matching(self):
        pool = make_pool(30, text=lambda i: ("call the lifeline now" if i % 3 == 0
                                             else "something unrelated"))
        project = AnnotationProject(pool)
        rnd = project.create_round("keyword_seeded", {"prevention": 5}, coders=["a"],
                                   category_keywords={"prevention": ["lifeline"]})
        assert 0 < len(rnd.tweet_ids) <= 5
        for tid in rnd.tweet_ids:
            assert "lifeline" in project.pool[tid].text

    def test_rounds_do_not_resample_used_tweets(self):
        project = AnnotationProject(make_pool(20))
        first = project.create_round("random", 10, ["a"], seed=1)
        second = project.create_round("random", 10, ["a"], seed=1)
        assert not set(first.tweet_ids) & set(second.tweet_ids)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            AnnotationProject(make_pool(5)).create_round("clever", 3, ["a"])


class TestNextTask:
    def test_three_tasks_then_none(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann"])
        seen = []
        for _ in range(3):
            tweet = project.next_task(rnd.id, "ann")
            seen.append(tweet.id)
            project.submit_label(rnd.id, "ann", tweet.id, prevention_dims())
        assert len(set(seen)) == 3
        assert project.next_task(rnd.id, "ann") is None

    def test_two_coders_see_all_independently(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 4, coders=["ann", "ben"])
        for coder in ("ann", "ben"):
            seen = []
            while (tweet := project.next_task(rnd.id, coder)) is not None:
                seen.append(tweet.id)
                project.submit_label(rnd.id, coder, tweet.id, prevention_dims())
            assert sorted(seen) == sorted(rnd.tweet_ids)

    def test_unknown_coder(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann"])
        with pytest.raises(ValueError):
            project.next_task(rnd.id, "mallory")

    def test_unknown_round(self):
        project = AnnotationProject(make_pool(10))
        with pytest.raises(ValueError):
            project.next_task("nope", "ann")


class TestSubmitLabel:
    def test_derives_category(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann"])
        record = project.submit_label(rnd.id, "ann", rnd.tweet_ids[0], prevention_dims())
        assert record.category == tax.PREVENTION

    def test_resubmission_latest_wins_history_kept(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann"])
        tid = rnd.tweet_ids[0]
        project.submit_label(rnd.id, "ann", tid, prevention_dims())
        project.submit_label(rnd.id, "ann", tid, awareness_dims())
        history = project.store.history(rnd.id)
        assert len(history) == 2
        current = project.store.current(rnd.id)
        assert current[(rnd.id, tid, "ann")].category == tax.AWARENESS

    def test_invalid_dims_rejected_with_field(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann"])
        bad = DimensionAnnotation(MessageType.CALL_FOR_ACTION,
                                  Perspective.SOLUTION_COPING, serious=False)
        with pytest.raises(InvalidAnnotation) as err:
            project.submit_label(rnd.id, "ann", rnd.tweet_ids[0], bad)
        assert err.value.field == "serious"
        assert len(project.store) == 0

    def test_append_only(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann", "ben"])
        counts = [len(project.store)]
        project.submit_label(rnd.id, "ann", rnd.tweet_ids[0], prevention_dims())
        counts.append(len(project.store))
        project.submit_label(rnd.id, "ann", rnd.tweet_ids[0], awareness_dims())
        counts.append(len(project.store))
        project.submit_override(rnd.id, "ben", rnd.tweet_ids[0], tax.COPING)
        counts.append(len(project.store))
        assert counts == sorted(counts)

    def test_idempotency_key_prevents_duplicates(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann"])
        tid = rnd.tweet_ids[0]
        r1 = project.submit_label(rnd.id, "ann", tid, prevention_dims(), client_key="k1")
        r2 = project.submit_label(rnd.id, "ann", tid, prevention_dims(), client_key="k1")
        assert r1.seq == r2.seq
        assert len(project.store.history(rnd.id)) == 1


def _double_coded_project(assignments):
    """assignments: list of (ann_dims, ben_dims) per tweet."""
    project = AnnotationProject(make_pool(len(assignments) + 2))
    rnd = project.create_round("random", len(assignments), coders=["ann", "ben"])
    for tid, (ann_dims, ben_dims) in zip(rnd.tweet_ids, assignments):
        if ann_dims is not None:
            project.submit_label(rnd.id, "ann", tid, ann_dims)
        if ben_dims is not None:
            project.submit_label(rnd.id, "ben", tid, ben_dims)
    return project, rnd


class TestDisagreements:
    def test_agreement_everywhere_empty(self):
        project, rnd = _double_coded_project(
            [(prevention_dims(), prevention_dims())] * 3)
        assert project.disagreements(rnd.id) == []

    def test_coping_vs_suicidal_differs_at_12_and_6_not_2(self):
        project, rnd = _double_coded_project([(coping_dims(), suicidal_dims())])
        assert len(project.disagreements(rnd.id, level=12)) == 1
        assert len(project.disagreements(rnd.id, level=6)) == 1
        assert project.disagreements(rnd.id, level=2) == []

    def test_disjoint_coverage_empty_with_warning(self, caplog):
        project, rnd = _double_coded_project([
            (prevention_dims(), None), (None, awareness_dims())])
        with caplog.at_level(logging.WARNING):
            assert project.disagreements(rnd.id) == []
        assert any("overlap" in r.message for r in caplog.records)

    def test_adjudicated_rows_leave_queue(self):
        project, rnd = _double_coded_project([(coping_dims(), suicidal_dims())])
        disagreed = project.disagreements(rnd.id)
        assert len(disagreed) == 1
        project.submit_override(rnd.id, "judge", disagreed[0]["tweet_id"], tax.COPING)
        assert project.disagreements(rnd.id) == []


class TestLiveKappa:
    def test_perfect_agreement(self):
        project, rnd = _double_coded_project(
            [(prevention_dims(), prevention_dims()),
             (awareness_dims(), awareness_dims())] * 3)
        result = project.live_kappa(rnd.id, level=6)
        assert result.kappa == 1.0

    def test_matches_eval_kappa(self):
        pairs = [(prevention_dims(), prevention_dims()),
                 (awareness_dims(), prevention_dims()),
                 (coping_dims(), coping_dims()),
                 (suicidal_dims(), coping_dims()),
                 (awareness_dims(), awareness_dims())] * 2
        project, rnd = _double_coded_project(pairs)
        result = project.live_kappa(rnd.id, level=6)
        # independent recomputation from the submitted dimension pairs
        from tweetsift.annotate.rules import derive_category
        labels_a = [tax.to_task1(derive_category(x)) for x, _ in pairs]
        labels_b = [tax.to_task1(derive_category(y)) for _, y in pairs]
        expected = cohens_kappa(labels_a, labels_b, classes=tax.TASK1_CLASSES)
        assert result.kappa == pytest.approx(expected.kappa, abs=1e-12)
        assert result.ci == pytest.approx(expected.ci, abs=1e-12)

    def test_exclusion_of_class(self):
        pairs = [(prevention_dims(), prevention_dims()),
                 (off_topic_dims(), off_topic_dims()),
                 (awareness_dims(), awareness_dims()),
                 (off_topic_dims(), prevention_dims())] * 2
        project, rnd = _double_coded_project(pairs)
        with_all = project.live_kappa(rnd.id, level=6)
        without = project.live_kappa(rnd.id, level=6, exclude=tax.IRRELEVANT)
        assert without.n < with_all.n
        assert without.kappa == 1.0  # disagreements all involved irrelevant

    def test_insufficient_overlap_error(self):
        project, rnd = _double_coded_project([(prevention_dims(), None),
                                              (None, awareness_dims())])
        with pytest.raises(ValueError):
            project.live_kappa(rnd.id)

    def test_two_class_level_invariant_within_about_block(self):
        # swapping one coder's prevention for coping stays inside the
        # about_suicide block, so level-2 kappa does not move
        base_pairs = [(prevention_dims(), awareness_dims()),
                      (off_topic_dims(), off_topic_dims()),
                      (coping_dims(), coping_dims())] * 2
        swapped_pairs = [(coping_dims(), awareness_dims()),
                         (off_topic_dims(), off_topic_dims()),
                         (prevention_dims(), prevention_dims())] * 2
        p1, r1 = _double_coded_project(base_pairs)
        p2, r2 = _double_coded_project(swapped_pairs)
        k1 = p1.live_kappa(r1.id, level=2)
        k2 = p2.live_kappa(r2.id, level=2)
        assert k1.kappa == pytest.approx(k2.kappa, abs=1e-12)


class TestExportLabeled:
    def test_single_coder(self):
        project = AnnotationProject(make_pool(10))
        rnd = project.create_round("random", 3, coders=["ann"])
        for tid in rnd.tweet_ids:
            project.submit_label(rnd.id, "ann", tid, prevention_dims())
        labeled = project.export_labeled()
        assert len(labeled) == 3
        assert all(e.label == tax.PREVENTION for e in labeled)
        assert all(e.provenance == "random" for e in labeled)

    def test_two_coders_agreeing(self):
        project, rnd = _double_coded_project(
            [(prevention_dims(), prevention_dims())] * 2)
        labeled = project.export_labeled(resolution="adjudicated")
        assert len(labeled) == 2

    def test_adjudicated_errors_on_open_disagreement(self):
        project, rnd = _double_coded_project([(coping_dims(), suicidal_dims())])
        with pytest.raises(ValueError, match=rnd.tweet_ids[0]):
            project.export_labeled(resolution="adjudicated")

    def test_override_resolves_disagreement(self):
        project, rnd = _double_coded_project([(coping_dims(), suicidal_dims())])
        project.submit_override(rnd.id, "judge", rnd.tweet_ids[0], tax.COPING)
        labeled = project.export_labeled(resolution="adjudicated")
        assert labeled.entries[0].label == tax.COPING


class TestStorePersistence:
    def test_reload_from_file(self, tmp_path):
        path = tmp_path / "labels.jsonl"
        store = LabelStore(path)
        store.append("r1", "t1", "ann", tax.PREVENTION, dims=prevention_dims())
        store.append("r1", "t1", "ann", tax.AWARENESS, dims=awareness_dims())
        reloaded = LabelStore(path)
        assert len(reloaded) == 2
        current = reloaded.current()
        assert current[("r1", "t1", "ann")].category == tax.AWARENESS

    def test_export_csv(self, tmp_path):
        store = LabelStore()
        store.append("r1", "t1", "ann", tax.PREVENTION, dims=prevention_dims())
        out = tmp_path / "export.csv"
        count = store.export_csv(out)
        assert count == 1
        lines = out.read_text().splitlines()
        assert lines[0].startswith("id,coder,category,round,timestamp")
        assert "t1,ann,prevention,r1" in lines[1]

    def test_rounds_persist(self, tmp_path):
        pool = make_pool(10)
        project = AnnotationProject(pool, rounds_path=tmp_path / "rounds.jsonl")
        rnd = project.create_round("random", 4, coders=["ann"], seed=2)
        reloaded = AnnotationProject(pool, rounds_path=tmp_path / "rounds.jsonl")
        assert reloaded.rounds[rnd.id].tweet_ids == rnd.tweet_ids
