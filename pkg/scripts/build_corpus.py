#!/usr/bin/env python3
"""Build the example corpus shipped in the package data directory.

Two complete cards modeled on real documentation efforts: a computer-vision
fairness dataset of person bounding boxes (with a derived template adding a
bounding-box section), and a geographically diverse biography dataset for
translation. Cards are written in canonical bytes and must lint clean of
errors; the build fails otherwise.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone

from datacardkit.assets import canonical_template
from datacardkit.derivation import TemplateStore, derive, resolve
from datacardkit.diagnostics import has_errors
from datacardkit.lint import lint_card, lint_template
from datacardkit.model import (
    Answer,
    AnswerSpec,
    Author,
    Block,
    Card,
    CustomTheme,
    Override,
    Row,
    Section,
    materialize_gates,
)
from datacardkit.serialization import serialize
from datacardkit.taxonomy import (
    AnswerKind,
    AnswerStatus,
    Interrogative,
    OftenStage,
    ScopeLevel,
)


def answered(value) -> Answer:
    return Answer(status=AnswerStatus.ANSWERED, value=value)


def unknown(rationale: str) -> Answer:
    return Answer(status=AnswerStatus.UNKNOWN, rationale=rationale)


def withheld(rationale: str) -> Answer:
    return Answer(status=AnswerStatus.WITHHELD, rationale=rationale)


def not_applicable(rationale: str) -> Answer:
    return Answer(status=AnswerStatus.NOT_APPLICABLE, rationale=rationale)


def kv(*pairs: tuple[str, str]) -> list[dict]:
    return [{"key": k, "value": v} for k, v in pairs]


def links(*items: tuple[str, str]) -> list[dict]:
    return [{"url": url, "label": label} for url, label in items]


# ---------------------------------------------------------------------------
# Derived template: canonical + bounding-box section
# ---------------------------------------------------------------------------


def build_cv_template(store: TemplateStore):
    parent = canonical_template()
    store.add(parent)
    bounding_section = Section(
        id="bounding-boxes",
        title="Bounding Boxes",
        rows=(
            Row(id="bounding-box-geometry-row", blocks=(
                Block(
                    id="bounding-box-count",
                    title="Bounding box count",
                    question="How many bounding boxes does the dataset contain?",
                    scope=ScopeLevel.TELESCOPE,
                    theme="bounding-boxes",
                    interrogative=Interrogative.WHAT,
                    answer_spec=AnswerSpec(kind=AnswerKind.NUMBER, units="boxes"),
                ),
                Block(
                    id="bounding-box-size-distribution",
                    title="Box size distribution",
                    question="How are bounding box sizes distributed relative to "
                             "image area?",
                    scope=ScopeLevel.PERISCOPE,
                    theme="bounding-boxes",
                    interrogative=Interrogative.WHAT,
                    answer_spec=AnswerSpec(
                        kind=AnswerKind.TABLE,
                        columns=("Box area as share of image", "Share of boxes")),
                ),
                Block(
                    id="bounding-box-size-rationale",
                    title="Box size rationale",
                    question="Why does the size distribution matter for label "
                             "quality?",
                    scope=ScopeLevel.MICROSCOPE,
                    theme="bounding-boxes",
                    interrogative=Interrogative.WHY,
                    answer_spec=AnswerSpec(kind=AnswerKind.LONG_TEXT),
                ),
            )),
            Row(id="bounding-box-labels-row", blocks=(
                Block(
                    id="age-range-unknowns",
                    title="Unknown age-range share",
                    question="What share of perceived age-range labels is "
                             "'unknown'?",
                    scope=ScopeLevel.PERISCOPE,
                    theme="bounding-boxes",
                    interrogative=Interrogative.WHAT,
                    answer_spec=AnswerSpec(kind=AnswerKind.LONG_TEXT),
                ),
                Block(
                    id="age-range-label-criteria",
                    title="Unknown-label criteria",
                    question="Why do annotators assign the 'unknown' perceived "
                             "age-range label?",
                    scope=ScopeLevel.MICROSCOPE,
                    theme="bounding-boxes",
                    interrogative=Interrogative.WHY,
                    answer_spec=AnswerSpec(kind=AnswerKind.LONG_TEXT),
                ),
            )),
        ),
    )
    child = derive(
        parent,
        "cv-fairness-extended",
        "Data Card for CV fairness datasets (bounding-box extension)",
        sections=(bounding_section,),
        custom_themes=(CustomTheme(
            slug="bounding-boxes",
            description="Bounding box geometry and its effect on label quality.",
            stage=OftenStage.FACTUALS,
        ),),
        overrides=(Override(
            block_id="human-representation",
            guidance="All person attributes in this dataset are perceived by "
                     "annotators from image content, never self-reported.",
        ),),
        store=store,
    )
    store.add(child)
    return child


# ---------------------------------------------------------------------------
# Card 1: CV fairness bounding boxes
# ---------------------------------------------------------------------------


def build_cv_card(resolved) -> Card:
    ts = datetime(2022, 4, 11, 9, 30, tzinfo=timezone.utc)
    answers = {
        # Authorship & funding
        "publishers": answered("Vision Fairness Research Team"),
        "publishers-details": answered(kv(
            ("Vision Fairness Research Team", "vision-fairness@example.org"),
            ("Annotation Operations", "annotation-ops@example.org"))),
        "publishers-rationale": answered(
            "The research team designed the label taxonomy and owns the release; "
            "annotation operations executed labeling under the team's protocol."),
        "funding": answered("industry"),
        "funding-details": withheld(
            "Budget allocations for annotation vendors are proprietary."),
        "funding-rationale": answered(
            "Funding came from a single internal research budget, so no external "
            "sponsor shaped the label taxonomy."),
        # Overview
        "nature": answered(["image", "annotations", "people"]),
        "nature-details": answered(kv(
            ("Modality", "Photographs with per-person bounding boxes"),
            ("Annotations", "Perceived gender presentation and perceived age range"),
            ("Source imagery", "Open Images subset"))),
        "nature-rationale": answered(
            "Person-level boxes with perceived attributes are the minimum needed "
            "for subgroup fairness analysis of detection models."),
        "feature-breakdowns": answered(
            "Image reference, bounding box geometry, and two perceived-attribute "
            "labels per box."),
        "feature-breakdowns-details": answered([
            ["image_id", "string", "Reference into the source image collection"],
            ["box", "float x4", "Normalized corner coordinates of one person"],
            ["perceived_gender", "label", "Annotator-perceived gender presentation"],
            ["perceived_age_range", "label", "Annotator-perceived age range"],
        ]),
        "feature-breakdowns-rationale": answered(
            "Geometry and labels are kept per box rather than per image so "
            "fairness metrics can be computed at the person level; the perceived "
            "labels are the most error-prone fields."),
        "descriptive-statistics": answered(30000),
        "descriptive-statistics-details": answered([
            ["Images", "30,000"],
            ["Bounding boxes", "100,000"],
            ["Boxes per image (mean)", "3.3"],
        ]),
        "descriptive-statistics-rationale": answered(
            "Counts and box density expose how many people each image "
            "contributes; density outliers mark crowd scenes where labels are "
            "least reliable."),
        "missing-attributes": answered(
            "No identity, name, or ground-truth demographic attributes."),
        "missing-attributes-details": answered(
            "The dataset stores no identifying information about the people in "
            "the images, and no self-reported demographics were collected; all "
            "attributes are annotator perceptions."),
        "missing-attributes-rationale": answered(
            "Collecting self-reported attributes for strangers in web images is "
            "impossible, so perceived labels are used with documented caveats "
            "instead of implying ground truth."),
        "human-representation": answered(["gender", "age"]),
        "human-representation-details": answered([
            ["Perceived gender presentation",
             "predominantly feminine and masculine presentations, with an "
             "unknown share for small boxes",
             "manual annotation"],
            ["Perceived age range",
             "nearly 40% of labels are 'unknown'",
             "manual annotation"],
        ]),
        "human-representation-rationale": answered(
            "Perceived gender and age are included because subgroup performance "
            "gaps in person detection concentrate along them; labels describe "
            "annotator perception of an image, not a person's identity, and must "
            "not be used to infer either."),
        # Examples
        "examples": answered(
            "One photograph with a normalized box around each person and two "
            "perceived-attribute labels per box."),
        "examples-details": answered(
            '{"image_id": "0a1b2c3d", "box": [0.12, 0.08, 0.46, 0.91], '
            '"perceived_gender": "feminine", "perceived_age_range": "adult"}'),
        "examples-rationale": answered(
            "The example shows a large, clearly visible person; outlier "
            "datapoints are tiny background figures whose boxes cover well under "
            "one percent of the image."),
        # Terminology
        "glossary": answered(
            "Perceived attribute, bounding box, unknown label."),
        "glossary-details": answered(kv(
            ("Perceived attribute",
             "A property assigned by an annotator from image content alone"),
            ("Unknown label",
             "Assigned when the annotator cannot determine an attribute"),
            ("Box area share", "Box area divided by image area"))),
        "glossary-rationale": answered(
            "'Perceived' is defined narrowly to stop readers from treating "
            "annotations as demographic ground truth."),
        "domain-knowledge": answered(
            "Familiarity with detection metrics and subgroup fairness analysis."),
        "domain-knowledge-details": answered(
            "Users should understand intersection-over-union matching, subgroup "
            "slicing, and why perception-based labels carry irreducible "
            "uncertainty."),
        "domain-knowledge-rationale": answered(
            "Without this background, users tend to read subgroup gaps as exact "
            "measurements rather than estimates over uncertain labels."),
        # Motivations & use
        "motivations": answered(
            "Enable fairness evaluation of person-detection models."),
        "motivations-details": answered(
            "Existing detection benchmarks lacked person-level perceived "
            "attributes, so subgroup performance could not be measured at all."),
        "motivations-rationale": answered(
            "The societal benefit of measuring subgroup gaps was judged to "
            "outweigh the risks of sensitive labels, provided uses are "
            "restricted to fairness analysis."),
        "intended-applications": answered(
            ["fairness-evaluation", "bias-mitigation", "model-auditing"]),
        "intended-applications-details": answered(
            "Slice detection metrics by perceived attributes to find and "
            "mitigate subgroup performance gaps; labels feed evaluation "
            "pipelines, never product features."),
        "intended-applications-rationale": answered(
            "The labels exist to audit models; any use that attaches perceived "
            "attributes to individuals is out of scope by design."),
        "safety-of-use": answered(["no-identity-inference", "no-surveillance"]),
        "safety-of-use-details": answered(
            "Do not use the labels to infer any person's gender or age, to "
            "build attribute classifiers, or in surveillance contexts; the "
            "labels are perceptions of images, not facts about people."),
        "safety-of-use-rationale": answered(
            "Attribute inference inverts the dataset's purpose: a tool for "
            "measuring harm would become a source of it."),
        "joint-use": answered("joinable-with-keys"),
        "joint-use-details": answered(
            "Rows join to the public source image collection by image id; no "
            "other joins are supported."),
        "joint-use-rationale": answered(
            "Joining beyond the source imagery could link perceived attributes "
            "to identity signals, which re-introduces re-identification risk."),
        "past-usage": answered(
            "Internal fairness audits of person-detection models."),
        "past-usage-details": answered(links(
            ("https://example.org/reports/detection-fairness-2022",
             "Detection fairness audit report"))),
        "past-usage-rationale": answered(
            "The first audit surfaced subgroup gaps that were invisible in "
            "aggregate metrics, which is the intended lesson for new users."),
        # Access, retention, wipeout
        "access-restrictions": answered("restricted"),
        "access-restrictions-details": answered(
            "Access requires a research justification reviewed by the data "
            "governance board; requests citing product or surveillance uses are "
            "rejected."),
        "access-restrictions-rationale": answered(
            "Sensitive perceived labels warrant gatekeeping even though the "
            "source imagery is public."),
        "wipeout-retention": answered("event-driven"),
        "wipeout-retention-details": answered(
            "Removal requests against the source collection propagate within 30 "
            "days: affected boxes and labels are deleted in the next release."),
        "wipeout-retention-rationale": answered(
            "The dataset inherits its subjects' deletion rights from the source "
            "imagery; keeping orphaned labels would outlive their consent basis."),
        "compliance-policies": answered(["ai-principles-review", "privacy-review"]),
        "compliance-policies-details": answered(
            "The release passed an AI-principles review focused on acceptable "
            "use and a privacy review of the label taxonomy; both sign-offs are "
            "archived with the release notes."),
        "compliance-policies-rationale": answered(
            "Sensitive-attribute datasets trigger both reviews under internal "
            "policy; exceptions would be recorded in the release notes."),
        # Provenance & collection
        "upstream-sources": answered(["open-images"]),
        "upstream-sources-details": answered(links(
            ("https://storage.googleapis.com/openimages/web/index.html",
             "Open Images"))),
        "upstream-sources-rationale": answered(
            "Open Images offers permissive licensing and person-dense imagery, "
            "which the fairness analysis requires."),
        "collection-process": answered(
            "Sampled person images from an existing public collection, then "
            "manually annotated each box."),
        "collection-process-details": answered(
            "Images containing people were sampled from the source collection; "
            "trained annotators drew one box per visible person and assigned "
            "both perceived attributes per box."),
        "collection-process-rationale": answered(
            "Reusing public imagery avoided new collection from people, at the "
            "cost of inheriting the source's geographic skew."),
        # Transformations
        "data-processing": answered(
            "Box normalization, deduplication, and label aggregation."),
        "data-processing-details": answered(
            "Coordinates were normalized to image size, duplicate boxes were "
            "merged by overlap, and each box's labels were aggregated from "
            "three independent annotations."),
        "data-processing-rationale": answered(
            "Normalization and merging are geometry-only steps that cannot "
            "change any perceived label, so they are safe for fairness use."),
        "labeling-process": answered(
            "Three annotators labeled each box; majority vote decided."),
        "labeling-process-details": answered(
            "Annotators followed a guide with visual examples, labeling "
            "perceived gender presentation and perceived age range per box; "
            "disagreements fell through to adjudication."),
        "labeling-process-rationale": answered(
            "Perception varies across annotators, so redundancy was preferred; "
            "age-range labels on small boxes carry the most uncertainty."),
        "rating-process": not_applicable(
            "Datapoints carry categorical labels only; no ratings were "
            "collected."),
        "rating-process-details": not_applicable(
            "No rating workflow exists for this dataset."),
        "rating-process-rationale": not_applicable(
            "Ratings are not meaningful for bounding-box annotation."),
        "validation-process": answered(
            "Geometry checks plus a stratified manual audit."),
        "validation-process-details": answered(
            "Automated checks rejected degenerate boxes; a 2% stratified sample "
            "was re-annotated by senior annotators, with disagreement under 5% "
            "for gender and higher for age on small boxes."),
        "validation-process-rationale": answered(
            "The audit stratum with small boxes directly measures the riskiest "
            "slice of the data."),
        "adjudication-policies": answered(
            "Senior annotators resolved ties; unresolvable boxes kept 'unknown'."),
        "adjudication-policies-details": answered(
            "Two-of-three agreement accepted a label; otherwise a senior "
            "annotator decided, and if perception was still ambiguous the "
            "attribute stayed 'unknown' rather than being forced."),
        "adjudication-policies-rationale": answered(
            "Forcing a guess would manufacture false certainty; 'unknown' is "
            "the honest floor of perception-based labeling."),
        "infrastructure": answered(
            "Internal annotation platform and object storage."),
        "infrastructure-details": answered(
            "Annotation ran on the internal labeling platform; releases are "
            "immutable versioned archives in access-controlled object storage."),
        "infrastructure-rationale": answered(
            "Immutable releases keep audits reproducible, and access control "
            "matches the restricted access policy."),
        "known-patterns": answered(
            "Label certainty correlates strongly with box size."),
        "known-patterns-details": answered(
            "Small boxes are labeled 'unknown' far more often, and the source "
            "imagery skews toward North American and European scenes."),
        "known-patterns-rationale": answered(
            "Tiny crops carry too little visual signal for perception, so "
            "unknowns concentrate there; users should slice analyses by box "
            "size before interpreting subgroup gaps."),
        "fairness-evaluations": answered("evaluated"),
        "fairness-evaluations-details": answered(
            "Detection recall was sliced by perceived gender and age range, "
            "surfacing a recall gap for boxes labeled with older age ranges."),
        "fairness-evaluations-rationale": answered(
            "Gender and age slices were prioritized because the labels exist "
            "for them; skin-tone evaluation remains unexamined in this release."),
        # Versioning & maintenance
        "updates": answered("never"),
        "updates-details": not_applicable(
            "The release is frozen; only wipeout-driven deletions occur."),
        "updates-rationale": answered(
            "A frozen release keeps fairness audits comparable across time."),
        "maintenance-status": answered("limited-maintenance"),
        "maintenance-status-details": answered(
            "The research team triages reported label errors quarterly but adds "
            "no new data."),
        "maintenance-status-rationale": answered(
            "Label corrections preserve audit quality without destabilizing the "
            "frozen release."),
        "version-differences": answered(
            "First public-facing documentation of the initial release."),
        "version-differences-details": answered(
            "Version 1 is the initial release; the bounding-box section was "
            "added to the documentation after internal review raised questions "
            "about unknown labels."),
        "version-differences-rationale": answered(
            "Documenting the unknown-label investigation where future versions "
            "will diff keeps the issue visible."),
        # Appended bounding-box section
        "bounding-box-count": answered(100000),
        "bounding-box-size-distribution": answered([
            ["under 1% of image area", "30%"],
            ["1% to 10% of image area", "45%"],
            ["over 10% of image area", "25%"],
        ]),
        "bounding-box-size-rationale": answered(
            "Thirty percent of boxes cover less than one percent of the image, "
            "leaving annotators very little visual signal; label uncertainty "
            "concentrates in exactly those boxes."),
        "age-range-unknowns": answered(
            "Nearly 40% of perceived age-range labels are 'unknown', a level "
            "found to be typical for person datasets in this problem space."),
        "age-range-label-criteria": unknown(
            "The written criteria annotators used when choosing the 'unknown' "
            "perceived age-range label were not recorded; the high unknown "
            "share is attributed to the 30% of boxes smaller than 1% of the "
            "image, where age is not visually inferable."),
    }
    card = Card(
        id="cv-people-boxes",
        template_id="cv-fairness-extended",
        template_version=1,
        dataset_title="People Boxes: Perceived-Attribute Annotations for CV Fairness",
        authors=(
            Author(name="Vision Fairness Research Team", role="producer"),
            Author(name="Responsible AI Review Board", role="reviewer"),
        ),
        audience_tags=("vision", "fairness", "internal"),
        created=ts,
        updated=ts,
        answers=answers,
    )
    return materialize_gates(card, resolved)


# ---------------------------------------------------------------------------
# Card 2: geographically diverse translation biographies
# ---------------------------------------------------------------------------


def build_translation_card(resolved) -> Card:
    ts = datetime(2021, 11, 2, 14, 0, tzinfo=timezone.utc)
    answers = {
        "publishers": answered("Geo-Diverse Translation Data Team"),
        "publishers-details": answered(kv(
            ("Translation data engineering", "geo-translation@example.org"),
            ("Human-centered design partner", "hcd-partner@example.org"))),
        "publishers-rationale": answered(
            "Engineers who extracted and curated the data own its accuracy; the "
            "design partner facilitated the documentation process."),
        "funding": answered("industry"),
        "funding-details": withheld(
            "Team budget figures are proprietary and add nothing to assessing "
            "the data."),
        "funding-rationale": answered(
            "The work was routine product-team funding with no external "
            "sponsor influence on content."),
        "nature": answered(["text", "biographies", "multilingual"]),
        "nature-details": answered(kv(
            ("Modality", "Biographical sentences extracted from Wikipedia"),
            ("Languages", "English source with translations into eight languages"),
            ("Unit", "Sentence pairs grouped per biography"))),
        "nature-rationale": answered(
            "Biographies concentrate person names and gendered references, "
            "which is exactly where translation models mishandle gender."),
        "feature-breakdowns": answered(
            "Source sentence, translation, biography subject metadata, and a "
            "perceived-gender label."),
        "feature-breakdowns-details": answered([
            ["source_sentence", "string", "English sentence from a biography"],
            ["translation", "string", "Human translation of the sentence"],
            ["region", "label", "Continental region of the subject"],
            ["perceived_gender", "label",
             "masculine, feminine, or neutral from gender-indicative terms"],
        ]),
        "feature-breakdowns-rationale": answered(
            "Region and perceived gender are the slicing attributes the dataset "
            "exists to support; the gender label is the most contested field."),
        "descriptive-statistics": answered(8000),
        "descriptive-statistics-details": answered([
            ["Biographies", "8,000"],
            ["Sentence pairs", "64,500"],
            ["Continental regions covered", "6"],
        ]),
        "descriptive-statistics-rationale": answered(
            "Counts per region matter more than totals here; the distribution "
            "of countries by continental region is the dataset's headline "
            "property."),
        "missing-attributes": answered(
            "No non-binary gender category and no self-reported gender."),
        "missing-attributes-details": answered(
            "The dataset does not label non-binary individuals: gender is "
            "inferred from gender-indicative terms in the text, and the team "
            "judged that inferring non-binary identity from text would be "
            "unreliable and disrespectful. Collected data lacking reliable "
            "gender-indicative terms was excluded."),
        "missing-attributes-rationale": answered(
            "A label the text cannot support would be a guess about identity; "
            "excluding it was judged safer than mislabeling people."),
        "human-representation": answered(["gender", "geography", "language"]),
        "human-representation-details": answered([
            ["Perceived gender",
             "masculine, feminine, and neutral labels from gender-indicative "
             "terms; neutral covers biographies about groups of people",
             "textual inference"],
            ["Geography",
             "biography subjects distributed across six continental regions",
             "source metadata"],
            ["Language", "names uncommon in English are deliberately "
             "overrepresented", "curation criteria"],
        ]),
        "human-representation-rationale": answered(
            "Earlier training sets taught models to infer gender from names; "
            "documenting how gender and geography are represented here is the "
            "point of the dataset. Labels describe text, not identity."),
        "examples": answered(
            "A sentence from a biography, its translation, and region plus "
            "perceived-gender labels."),
        "examples-details": answered(
            '{"source_sentence": "She studied mathematics in Lagos.", '
            '"translation": "Elle a étudié les mathématiques à Lagos.", '
            '"region": "africa", "perceived_gender": "feminine"}'),
        "examples-rationale": answered(
            "The example carries an explicit pronoun, the easy case; outliers "
            "are sentences whose only gender signal is a name, which is "
            "precisely what the dataset exists to stress."),
        "glossary": answered(
            "Perceived gender, gender-indicative terms, neutral label."),
        "glossary-details": answered(kv(
            ("Gender-indicative terms",
             "Pronouns and gendered nouns present in the text itself"),
            ("Perceived gender",
             "A label derived only from gender-indicative terms, never from "
             "names"),
            ("Neutral",
             "Label for biographies describing collections of individuals"))),
        "glossary-rationale": answered(
            "The team settled these definitions after expert stakeholders "
            "pointed out that gender is hard to ascertain from text; anchoring "
            "the label to in-text terms made the criteria checkable."),
        "domain-knowledge": answered(
            "Grammatical gender across target languages."),
        "domain-knowledge-details": answered(
            "Users need to know how grammatical gender surfaces in each target "
            "language, since a neutral English sentence may force a gendered "
            "choice in translation."),
        "domain-knowledge-rationale": answered(
            "Without this, users misread forced grammatical choices as model "
            "bias, or miss genuine bias behind them."),
        "motivations": answered(
            "Stop translation models from inferring gender from names."),
        "motivations-details": answered(
            "Investigation showed models picking up names to decide a person's "
            "gender, and existing training data underrepresented names uncommon "
            "in English or outside American geography."),
        "motivations-rationale": answered(
            "A geographically diverse benchmark makes the failure measurable, "
            "which is the precondition for fixing it."),
        "intended-applications": answered(
            ["translation-evaluation", "gender-bias-analysis"]),
        "intended-applications-details": answered(
            "Evaluate translation quality on biographies whose names are "
            "uncommon in English, and measure gendered error rates by region."),
        "intended-applications-rationale": answered(
            "The dataset is an evaluation instrument; it is too small and too "
            "curated to train production models."),
        "safety-of-use": answered(["no-identity-inference", "evaluation-only"]),
        "safety-of-use-details": answered(
            "Do not use the perceived-gender labels to build gender classifiers "
            "or to assert any individual's gender; labels describe text "
            "evidence only."),
        "safety-of-use-rationale": answered(
            "The dataset exists because gender inference from names is harmful; "
            "reusing its labels for inference would reproduce the harm."),
        "joint-use": answered("standalone"),
        "joint-use-details": not_applicable(
            "No joins are supported; subject metadata is deliberately coarse."),
        "joint-use-rationale": answered(
            "Coarse region labels instead of joinable identifiers keep "
            "biography subjects from being re-identified."),
        "past-usage": answered(
            "Internal evaluation of gendered translation errors."),
        "past-usage-details": answered(links(
            ("https://example.org/reports/translation-gender-eval",
             "Gendered translation error analysis"))),
        "past-usage-rationale": answered(
            "The first evaluation confirmed name-driven gender errors, "
            "validating the curation criteria."),
        "access-restrictions": answered("public"),
        "access-restrictions-rationale": answered(
            "The data derives from public Wikipedia content, and open access "
            "lets external researchers reproduce the evaluations."),
        "wipeout-retention": answered("event-driven"),
        "wipeout-retention-details": answered(
            "If a source biography is deleted or the subject objects, the "
            "derived sentences are removed in the next refresh."),
        "wipeout-retention-rationale": answered(
            "Public sourcing does not erase the subjects' interest in removal; "
            "mirroring upstream deletions honors it."),
        "compliance-policies": answered(["wikipedia-licensing", "privacy-review"]),
        "compliance-policies-details": answered(
            "Text reuse follows Wikipedia's license terms, and a privacy review "
            "approved the coarse region metadata."),
        "compliance-policies-rationale": answered(
            "Derived public data still triggers privacy review because of the "
            "per-person gender labels."),
        "upstream-sources": answered(["wikipedia"]),
        "upstream-sources-details": answered(links(
            ("https://www.wikipedia.org/", "Wikipedia"))),
        "upstream-sources-rationale": answered(
            "Wikipedia was the only public source with enough curated "
            "biographies across regions to meet the diversity criteria."),
        "collection-process": answered(
            "Curated extraction from public Wikipedia biographies."),
        "collection-process-details": answered(
            "Biographies were selected against explicit region and name "
            "criteria, sentences extracted and cleaned, then translated by "
            "professional translators."),
        "collection-process-rationale": answered(
            "Selection criteria, not random sampling, were needed to "
            "overrepresent the names models get wrong; the skew is deliberate "
            "and documented."),
        "data-processing": answered(
            "Sentence extraction, cleaning, and per-biography grouping."),
        "data-processing-details": answered(
            "Markup was stripped, sentences segmented, near-duplicates removed, "
            "and sentences grouped by source biography before translation."),
        "data-processing-rationale": answered(
            "Processing is purely structural; the contested judgment, gender "
            "labeling, happens in a separate documented step."),
        "labeling-process": answered(
            "Perceived gender assigned from gender-indicative terms in the "
            "text."),
        "labeling-process-details": answered(
            "Labelers marked a biography masculine or feminine only when "
            "pronouns or gendered nouns in the text supported it, and neutral "
            "for biographies describing collections of individuals; names were "
            "never a permitted signal."),
        "labeling-process-rationale": answered(
            "Anchoring labels to in-text evidence was the definition the team "
            "and expert stakeholders converged on after disagreement about "
            "whether gender could be ascertained at all."),
        "rating-process": not_applicable(
            "Translations were professionally produced, not rated."),
        "rating-process-details": not_applicable(
            "No rating workflow exists for this dataset."),
        "rating-process-rationale": not_applicable(
            "Quality control ran through review, not numeric ratings."),
        "validation-process": answered(
            "Bilingual review of a sample plus automated consistency checks."),
        "validation-process-details": answered(
            "A 10% sample of translations got bilingual review; automated "
            "checks verified sentence alignment and label consistency within "
            "each biography."),
        "validation-process-rationale": answered(
            "Within-biography label consistency is the cheapest strong check on "
            "the gender labels."),
        "adjudication-policies": answered(
            "Label disputes escalated to the definition owners."),
        "adjudication-policies-details": answered(
            "When labelers disagreed, the case went to the team members who "
            "owned the perceived-gender definition; unresolved cases were "
            "excluded from the release."),
        "adjudication-policies-rationale": answered(
            "Excluding unresolvable cases keeps the released labels faithful to "
            "the documented definition."),
        "infrastructure": answered(
            "Standard internal data pipelines and versioned storage."),
        "infrastructure-details": answered(
            "Extraction and cleaning run as reviewed pipeline jobs; releases "
            "are versioned archives with checksums."),
        "infrastructure-rationale": answered(
            "Modest scale needs no special infrastructure; versioning matters "
            "because the dataset doubles as an evaluation baseline."),
        "known-patterns": answered(
            "Deliberate overrepresentation of names uncommon in English."),
        "known-patterns-details": answered(
            "Region distribution is engineered rather than natural, and "
            "feminine-labeled biographies skew shorter, reflecting source "
            "coverage imbalances on Wikipedia."),
        "known-patterns-rationale": answered(
            "The engineered skew is the dataset's purpose; the inherited "
            "length imbalance is upstream bias users should control for."),
        "fairness-evaluations": answered("partially-evaluated"),
        "fairness-evaluations-details": answered(
            "Gendered error rates were compared across regions; other fairness "
            "dimensions were not evaluated."),
        "fairness-evaluations-rationale": answered(
            "Gender-by-region is the axis the dataset was built to measure; "
            "broader evaluations need different data."),
        "updates": answered("irregular"),
        "updates-details": answered(
            "Refreshes happen when upstream deletions accumulate or criteria "
            "change; each refresh is announced in the release notes."),
        "updates-rationale": answered(
            "Biography data drifts slowly, so scheduled updates would churn "
            "version numbers without adding value."),
        "maintenance-status": answered("actively-maintained"),
        "maintenance-status-details": answered(
            "The producing team reviews reported label errors monthly and "
            "maintains the extraction pipeline."),
        "maintenance-status-rationale": answered(
            "The dataset anchors ongoing evaluations, so label corrections "
            "have immediate downstream value."),
        "version-differences": answered(
            "Initial release; no earlier version exists."),
        "version-differences-details": answered(
            "Version 1 established the selection criteria, the perceived-gender "
            "definition, and the region distribution later versions will be "
            "diffed against."),
        "version-differences-rationale": answered(
            "Recording the founding definitions makes future definition "
            "changes visible as explicit version differences."),
    }
    card = Card(
        id="translation-bios",
        template_id="data-card-canonical",
        template_version=1,
        dataset_title="Geo-Diverse Biographies for Language Translation",
        authors=(
            Author(name="Geo-Diverse Translation Data Team", role="producer"),
            Author(name="Human-Centered Design Partner", role="designer"),
        ),
        audience_tags=("text", "translation", "fairness"),
        created=ts,
        updated=ts,
        answers=answers,
    )
    return materialize_gates(card, resolved)


# ---------------------------------------------------------------------------


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    default_out = os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        "src", "datacardkit", "data", "cards")
    parser.add_argument("-o", "--output-dir", default=default_out)
    args = parser.parse_args()
    os.makedirs(args.output_dir, exist_ok=True)

    store = TemplateStore()
    cv_template = build_cv_template(store)
    cv_resolved = resolve(cv_template, store)
    canonical = canonical_template()

    failed = False
    for diag in lint_template(cv_resolved):
        print(f"cv template: {diag.format()}", file=sys.stderr)

    outputs = [
        ("cv-fairness-extended.dct.json", serialize(cv_template)),
    ]
    for name, card, template in (
        ("cv-people-boxes.dcc.json", build_cv_card(cv_resolved), cv_resolved),
        ("translation-bios.dcc.json", build_translation_card(canonical), canonical),
    ):
        diagnostics = lint_card(card, template)
        for diag in diagnostics:
            print(f"{name}: {diag.format()}", file=sys.stderr)
        if has_errors(diagnostics):
            failed = True
        outputs.append((name, serialize(card)))

    if failed:
        print("refusing to write corpus cards with lint errors", file=sys.stderr)
        return 1
    for name, data in outputs:
        path = os.path.join(args.output_dir, name)
        with open(path, "wb") as fh:
            fh.write(data)
        print(f"wrote {path} ({len(data)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
