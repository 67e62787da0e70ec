"""Review rubric: lower-median aggregation, disagreement, digest binding."""

import itertools
import random
import statistics
from datetime import datetime, timezone

import pytest

from datacardkit.errors import InvalidReview, MixedCardDigest, ParseError
from datacardkit.review import (
    DISAGREEMENT_GAP,
    Dimension,
    Rating,
    ReviewEntry,
    Reviewer,
    ReviewRecord,
    aggregate,
    aggregate_obj,
    blank_review,
    lower_median,
    parse_review,
    serialize_review,
    validate_review,
)
from datacardkit.serialization import card_digest

TS = datetime(2022, 5, 1, tzinfo=timezone.utc)
DIGEST_A = "a" * 64
DIGEST_B = "b" * 64


def _entry(rating="good", evidence="Based on section review.",
           next_steps="Close the gaps."):
    return ReviewEntry(rating=rating, evidence=evidence, next_steps=next_steps)


def _review(ratings, digest=DIGEST_A, card_id="card", reviewer_name="rev"):
    """ratings: a single Rating applied everywhere, or a dict by dimension."""
    entries = {}
    for dim in Dimension:
        rating = ratings[dim] if isinstance(ratings, dict) else ratings
        entries[dim.value] = _entry(rating=rating.value)
    return ReviewRecord(
        card_id=card_id, card_digest=digest,
        reviewer=Reviewer(name=reviewer_name, role="agent"),
        created=TS, entries=entries,
    )


class TestRatingScale:
    def test_ordinals_are_one_to_five(self):
        ordinals = [r.ordinal for r in Rating]
        assert sorted(ordinals) == [1, 2, 3, 4, 5]

    def test_ordinal_round_trip(self):
        for rating in Rating:
            assert Rating.from_ordinal(rating.ordinal) is rating

    def test_scale_endpoints(self):
        assert Rating.POOR.ordinal == 1
        assert Rating.OUTSTANDING.ordinal == 5


class TestLowerMedian:
    def test_matches_statistics_median_low(self, rng):
        for _ in range(200):
            ordinals = [rng.randint(1, 5) for _ in range(rng.randint(1, 9))]
            assert lower_median(ordinals) == statistics.median_low(ordinals)

    def test_even_count_takes_lower_middle(self):
        assert lower_median([2, 4]) == 2
        assert lower_median([1, 2, 3, 4]) == 2


class TestAggregatePairs:
    @pytest.mark.parametrize("pair", list(itertools.combinations_with_replacement(
        sorted(Rating, key=lambda r: r.ordinal), 2)))
    def test_all_unordered_pairs(self, pair):
        low, high = pair
        reviews = [
            _review(low, reviewer_name="first"),
            _review(high, reviewer_name="second"),
        ]
        report = aggregate(reviews)
        for dim in Dimension:
            agg = report.dimensions[dim.value]
            assert agg.median is low
            assert agg.minimum is low and agg.maximum is high
            expected_flag = (high.ordinal - low.ordinal) >= DISAGREEMENT_GAP
            assert agg.disagreement is expected_flag

    def test_exactly_fifteen_unordered_pairs(self):
        pairs = list(itertools.combinations_with_replacement(Rating, 2))
        assert len(pairs) == 15

    def test_order_invariance(self, rng):
        for _ in range(20):
            ratings = [Rating.from_ordinal(rng.randint(1, 5)) for _ in range(5)]
            reviews = [_review(r, reviewer_name=f"r{i}")
                       for i, r in enumerate(ratings)]
            baseline = aggregate(reviews)
            shuffled = reviews[:]
            rng.shuffle(shuffled)
            assert aggregate(shuffled) == baseline

    def test_adjacent_labels_do_not_flag(self):
        report = aggregate([
            _review(Rating.GOOD, reviewer_name="a"),
            _review(Rating.OUTSTANDING, reviewer_name="b"),
        ])
        assert not any(d.disagreement for d in report.dimensions.values())

    def test_per_dimension_independence(self):
        ratings_a = {dim: Rating.POOR for dim in Dimension}
        ratings_b = {dim: Rating.POOR for dim in Dimension}
        ratings_b[Dimension.RISK] = Rating.AVERAGE
        report = aggregate([
            _review(ratings_a, reviewer_name="a"),
            _review(ratings_b, reviewer_name="b"),
        ])
        assert report.dimensions["risk"].disagreement
        assert not report.dimensions["utility"].disagreement


class TestAggregateGuards:
    def test_empty_input_rejected(self):
        with pytest.raises(InvalidReview):
            aggregate([])

    def test_mixed_digests_rejected(self):
        with pytest.raises(MixedCardDigest):
            aggregate([_review(Rating.GOOD, digest=DIGEST_A),
                       _review(Rating.GOOD, digest=DIGEST_B)])

    def test_mixed_card_ids_rejected(self):
        with pytest.raises(MixedCardDigest):
            aggregate([_review(Rating.GOOD, card_id="one"),
                       _review(Rating.GOOD, card_id="two")])

    def test_invalid_review_rejected(self):
        bad = _review(Rating.GOOD)
        bad.entries["risk"] = ReviewEntry(rating="good", evidence="",
                                          next_steps="Close the gaps.")
        with pytest.raises(InvalidReview):
            aggregate([bad])

    def test_digest_binds_to_exact_card_bytes(self, cv_card):
        review = _review(Rating.GOOD, digest=card_digest(cv_card))
        assert aggregate([review]).card_digest == card_digest(cv_card)


class TestValidation:
    def test_complete_review_is_clean(self):
        assert validate_review(_review(Rating.GOOD)) == []

    def test_missing_dimension_rev001(self):
        record = _review(Rating.GOOD)
        del record.entries["impact"]
        findings = validate_review(record)
        assert [d.rule for d in findings] == ["REV-001"]
        assert findings[0].path == "impact"

    def test_empty_evidence_rev002(self):
        record = _review(Rating.GOOD)
        record.entries["quality"] = _entry(evidence="   ")
        assert [d.rule for d in validate_review(record)] == ["REV-002"]

    def test_empty_next_steps_rev003(self):
        record = _review(Rating.GOOD)
        record.entries["quality"] = _entry(next_steps="")
        assert [d.rule for d in validate_review(record)] == ["REV-003"]

    def test_unknown_label_rev004(self):
        record = _review(Rating.GOOD)
        record.entries["quality"] = _entry(rating="stellar")
        assert [d.rule for d in validate_review(record)] == ["REV-004"]

    def test_blank_review_fails_until_filled(self):
        record = blank_review("card", DIGEST_A, Reviewer("rev", "agent"), TS)
        rules = {d.rule for d in validate_review(record)}
        assert rules == {"REV-002", "REV-003", "REV-004"}


class TestSerialization:
    def test_round_trip(self):
        record = _review(Rating.BORDERLINE)
        assert parse_review(serialize_review(record)) == record

    def test_unknown_dimension_rejected(self):
        record = _review(Rating.GOOD)
        data = serialize_review(record).replace(b'"risk"', b'"vibes"')
        with pytest.raises(ParseError, match="vibes"):
            parse_review(data)

    def test_bad_digest_rejected(self):
        record = _review(Rating.GOOD)
        data = serialize_review(record).replace(DIGEST_A.encode(), b"zz")
        with pytest.raises(ParseError, match="card_digest"):
            parse_review(data)

    def test_mislabeled_entry_parses_then_fails_validation(self):
        record = _review(Rating.GOOD)
        data = serialize_review(record).replace(b'"rating": "good"',
                                                b'"rating": "stellar"', 1)
        parsed = parse_review(data)
        assert any(d.rule == "REV-004" for d in validate_review(parsed))

    def test_aggregate_obj_shape(self):
        report = aggregate([_review(Rating.GOOD)])
        obj = aggregate_obj(report)
        assert obj["kind"] == "aggregate"
        assert set(obj["dimensions"]) == {d.value for d in Dimension}
        assert obj["review_count"] == 1
