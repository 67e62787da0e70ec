#!/usr/bin/env python3
"""Author the canonical template and write it into the package data dir.

The canonical template covers all 31 themes, one row per theme, three blocks
per row (telescope, periscope, microscope). Run after editing to regenerate
src/datacardkit/data/canonical.dct.json in canonical bytes; the file is the
artifact, this script is its source of truth.
"""

from __future__ import annotations

import argparse
import os
import sys

from datacardkit.lint import lint_template
from datacardkit.model import (
    AnswerSpec,
    Block,
    Choice,
    Gate,
    Row,
    Section,
    Template,
)
from datacardkit.serialization import serialize
from datacardkit.taxonomy import (
    AnswerKind,
    AutomationPolicy,
    Interrogative,
    ScopeLevel,
)

TEL, PERI, MICRO = ScopeLevel.TELESCOPE, ScopeLevel.PERISCOPE, ScopeLevel.MICROSCOPE
WHO, WHAT, WHEN = Interrogative.WHO, Interrogative.WHAT, Interrogative.WHEN
WHERE, WHY, HOW = Interrogative.WHERE, Interrogative.WHY, Interrogative.HOW
K = AnswerKind


def choices(*values: tuple[str, str]) -> tuple[Choice, ...]:
    return tuple(Choice(value=v, display=d) for v, d in values)


def block(block_id: str, title: str, question: str, scope: ScopeLevel,
          kind: AnswerKind, interrogative: Interrogative, *,
          choice_list: tuple[Choice, ...] = (), columns: tuple[str, ...] = (),
          units: str | None = None, gate: Gate | None = None,
          guidance: str | None = None,
          automatable: bool = False) -> Block:
    return Block(
        id=block_id,
        title=title,
        question=question,
        guidance=guidance,
        scope=scope,
        theme=f"theme.{block_id.rsplit('-details', 1)[0].rsplit('-rationale', 1)[0]}",
        interrogative=interrogative,
        answer_spec=AnswerSpec(kind=kind, choices=choice_list, columns=columns, units=units),
        gate=gate,
        automation_policy=(AutomationPolicy.AUTOMATABLE if automatable
                           else AutomationPolicy.MANUAL_ONLY),
    )


def row(base: str, *blocks: Block) -> Row:
    return Row(id=f"{base}-row", blocks=blocks)


SENSITIVE_ATTRIBUTES = choices(
    ("race", "Race"), ("gender", "Gender"), ("ethnicity", "Ethnicity"),
    ("socio-economic-status", "Socio-economic status"), ("geography", "Geography"),
    ("language", "Language"), ("sexual-orientation", "Sexual orientation"),
    ("religion", "Religion"), ("age", "Age"), ("culture", "Culture"),
    ("disability", "Disability"),
    ("experience-or-seniority", "Experience or seniority"), ("others", "Others"),
)


def build() -> Template:
    sections = (
        Section(id="authorship", title="Authorship & Funding", rows=(
            row("publishers",
                block("publishers", "Publishers",
                      "Which organization or team published this dataset?",
                      TEL, K.SHORT_TEXT, WHO),
                block("publishers-details", "Publisher details",
                      "List the teams responsible for the dataset and a point of "
                      "contact for each.",
                      PERI, K.KEY_VALUE, WHO,
                      guidance="Key: team name. Value: contact address or alias."),
                block("publishers-rationale", "Publisher rationale",
                      "Why is this publisher the accountable party, and how are "
                      "responsibilities divided across contributors?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("funding",
                block("funding", "Funding",
                      "What kind of funding supported the creation of this dataset?",
                      TEL, K.SINGLE_CHOICE, WHO,
                      choice_list=choices(
                          ("industry", "Industry"), ("academic", "Academic"),
                          ("public-grant", "Public grant"),
                          ("non-profit", "Non-profit"), ("mixed", "Mixed"))),
                block("funding-details", "Funding details",
                      "List each funding source and the mechanism through which it "
                      "contributed.",
                      PERI, K.KEY_VALUE, WHO),
                block("funding-rationale", "Funding rationale",
                      "Why could the funding sources influence, or fail to "
                      "influence, the contents of this dataset?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
        Section(id="dataset-overview", title="Dataset Overview", rows=(
            row("nature",
                block("nature", "Nature of content",
                      "What kind of data does the dataset contain?",
                      TEL, K.TAG_LIST, WHAT,
                      guidance="Short modality tags, for example image, text, or audio."),
                block("nature-details", "Content composition",
                      "Summarize the dataset's composition: modalities, formats, "
                      "languages, and encodings.",
                      PERI, K.KEY_VALUE, WHAT),
                block("nature-rationale", "Content rationale",
                      "Why does the dataset take this form rather than plausible "
                      "alternatives?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("feature-breakdowns",
                block("feature-breakdowns", "Features",
                      "What are the primary features of a datapoint?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("feature-breakdowns-details", "Feature breakdown",
                      "Break down the dataset's features with their types and "
                      "descriptions.",
                      PERI, K.TABLE, WHAT,
                      columns=("Feature", "Type", "Description"),
                      automatable=True),
                block("feature-breakdowns-rationale", "Feature rationale",
                      "Why are the features structured this way, and which of them "
                      "are most error-prone?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("descriptive-statistics",
                block("descriptive-statistics", "Size",
                      "How many datapoints does the dataset contain?",
                      TEL, K.NUMBER, WHAT, units="datapoints"),
                block("descriptive-statistics-details", "Descriptive statistics",
                      "Report key descriptive statistics computed over the dataset.",
                      PERI, K.TABLE, WHAT, columns=("Statistic", "Value"),
                      automatable=True),
                block("descriptive-statistics-rationale", "Statistics rationale",
                      "Why were these statistics selected, and what do outliers in "
                      "them indicate?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("missing-attributes",
                block("missing-attributes", "Missing attributes",
                      "Which attributes are intentionally absent from the dataset?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("missing-attributes-details", "Missing attribute details",
                      "Describe attributes that were collected but withheld, and "
                      "attributes never collected at all.",
                      PERI, K.LONG_TEXT, WHAT),
                block("missing-attributes-rationale", "Missing attribute rationale",
                      "Why are these attributes missing, and how might their absence "
                      "affect downstream use?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("human-representation",
                block("human-representation", "Human attributes",
                      "Does the dataset represent people through any of these "
                      "sensitive attributes?",
                      TEL, K.MULTI_CHOICE, WHO,
                      choice_list=SENSITIVE_ATTRIBUTES,
                      guidance="Select every attribute that is recorded, inferred, "
                               "or inferable."),
                block("human-representation-details", "Human attribute breakdowns",
                      "For each selected attribute, describe its distribution and "
                      "how the values were determined.",
                      PERI, K.TABLE, WHO,
                      columns=("Attribute", "Breakdown", "Determined by"),
                      gate=Gate(source_block="human-representation",
                                predicate="answered")),
                block("human-representation-rationale", "Human attribute rationale",
                      "Why are these attributes present, and what consent or "
                      "inference caveats apply to them?",
                      MICRO, K.LONG_TEXT, WHY,
                      gate=Gate(source_block="human-representation",
                                predicate="answered"))),
        )),
        Section(id="example-datapoints", title="Example Datapoints", rows=(
            row("examples",
                block("examples", "Typical datapoint",
                      "What does a typical datapoint look like?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("examples-details", "Raw example",
                      "Paste a representative datapoint in its raw serialized form.",
                      PERI, K.CODE, WHAT),
                block("examples-rationale", "Example rationale",
                      "Why is this example representative, and how do outlier "
                      "datapoints differ from it?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
        Section(id="terminology", title="Terminology & Context", rows=(
            row("glossary",
                block("glossary", "Terms of art",
                      "Which terms of art does this documentation rely on?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("glossary-details", "Glossary",
                      "Define each term of art used in the dataset and its "
                      "documentation.",
                      PERI, K.KEY_VALUE, WHAT),
                block("glossary-rationale", "Glossary rationale",
                      "Why were contested or ambiguous terms defined this way?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("domain-knowledge",
                block("domain-knowledge", "Required expertise",
                      "What domain knowledge helps when working with this dataset?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("domain-knowledge-details", "Expertise details",
                      "Describe the domain concepts users must understand to "
                      "interpret the data correctly.",
                      PERI, K.LONG_TEXT, WHAT),
                block("domain-knowledge-rationale", "Expertise rationale",
                      "Why is this expertise necessary, and which mistakes do "
                      "newcomers make without it?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
        Section(id="motivations-and-use", title="Motivations & Use", rows=(
            row("motivations",
                block("motivations", "Motivations",
                      "What motivated the creation of this dataset?",
                      TEL, K.SHORT_TEXT, WHY),
                block("motivations-details", "Motivation details",
                      "Describe the gaps or problems that existing datasets left "
                      "unaddressed.",
                      PERI, K.LONG_TEXT, WHAT),
                block("motivations-rationale", "Motivation rationale",
                      "Why do the creators believe these motivations justify "
                      "collecting this data?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("intended-applications",
                block("intended-applications", "Intended applications",
                      "Which applications is this dataset intended for?",
                      TEL, K.TAG_LIST, WHAT),
                block("intended-applications-details", "Application details",
                      "Describe how the dataset should be integrated into the "
                      "intended applications.",
                      PERI, K.LONG_TEXT, HOW),
                block("intended-applications-rationale", "Application rationale",
                      "Why are the intended applications scoped this way, and what "
                      "falls outside them?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("safety-of-use",
                block("safety-of-use", "Safety caveats",
                      "Which safety caveats apply when using this dataset?",
                      TEL, K.TAG_LIST, WHAT),
                block("safety-of-use-details", "Unsafe uses",
                      "Describe unsafe or discouraged applications and the harms "
                      "they could cause.",
                      PERI, K.LONG_TEXT, WHAT),
                block("safety-of-use-rationale", "Safety rationale",
                      "Why do these safety boundaries exist, and what evidence "
                      "informed them?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("joint-use",
                block("joint-use", "Joint use",
                      "Can this dataset be combined with other datasets?",
                      TEL, K.SINGLE_CHOICE, WHAT,
                      choice_list=choices(
                          ("standalone", "Standalone"),
                          ("joinable-with-keys", "Joinable with keys"),
                          ("designed-for-joins", "Designed for joins"))),
                block("joint-use-details", "Joint use details",
                      "Describe supported joins with other datasets and the keys "
                      "involved.",
                      PERI, K.LONG_TEXT, HOW),
                block("joint-use-rationale", "Joint use rationale",
                      "Why are joins safe or unsafe, particularly regarding "
                      "re-identification risk?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("past-usage",
                block("past-usage", "Past usage",
                      "Where has this dataset been used before?",
                      TEL, K.SHORT_TEXT, WHERE),
                block("past-usage-details", "Known applications",
                      "Link known publications, models, or products built on this "
                      "dataset.",
                      PERI, K.LINK_LIST, WHERE),
                block("past-usage-rationale", "Past usage rationale",
                      "Why did past applications succeed or fail, and what do they "
                      "teach new users?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
        Section(id="access-retention-wipeout", title="Access, Retention & Wipeout", rows=(
            row("access-restrictions",
                block("access-restrictions", "Access",
                      "Who can access this dataset?",
                      TEL, K.SINGLE_CHOICE, WHO,
                      choice_list=choices(
                          ("public", "Public"), ("restricted", "Restricted"),
                          ("internal", "Internal"))),
                block("access-restrictions-details", "Access process",
                      "Describe the process for requesting access, including the "
                      "criteria applied to requests.",
                      PERI, K.LONG_TEXT, HOW,
                      gate=Gate(source_block="access-restrictions",
                                predicate="equals", value="restricted")),
                block("access-restrictions-rationale", "Access rationale",
                      "Why are the current access restrictions in place?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("wipeout-retention",
                block("wipeout-retention", "Retention",
                      "For how long is the dataset retained?",
                      TEL, K.SINGLE_CHOICE, WHEN,
                      choice_list=choices(
                          ("indefinite", "Indefinite"),
                          ("fixed-term", "Fixed term"),
                          ("event-driven", "Event-driven"))),
                block("wipeout-retention-details", "Wipeout process",
                      "Describe how deletion or wipeout requests propagate to the "
                      "dataset and its copies.",
                      PERI, K.LONG_TEXT, HOW),
                block("wipeout-retention-rationale", "Retention rationale",
                      "Why was this retention policy chosen, and what risks remain "
                      "after deletion?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("compliance-policies",
                block("compliance-policies", "Compliance",
                      "Which policies and standards does the dataset comply with?",
                      TEL, K.TAG_LIST, WHAT),
                block("compliance-policies-details", "Compliance details",
                      "Describe how compliance with each policy is verified and "
                      "documented.",
                      PERI, K.LONG_TEXT, HOW),
                block("compliance-policies-rationale", "Compliance rationale",
                      "Why do these policies apply to this dataset, and where are "
                      "exceptions recorded?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
        Section(id="provenance-and-collection", title="Provenance & Collection", rows=(
            row("upstream-sources",
                block("upstream-sources", "Upstream sources",
                      "Which upstream sources feed this dataset?",
                      TEL, K.TAG_LIST, WHERE),
                block("upstream-sources-details", "Upstream links",
                      "Link the upstream datasets, services, or corpora this "
                      "dataset draws from.",
                      PERI, K.LINK_LIST, WHERE),
                block("upstream-sources-rationale", "Upstream rationale",
                      "Why were these upstream sources selected over alternatives?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("collection-process",
                block("collection-process", "Collection",
                      "How was the data collected?",
                      TEL, K.SHORT_TEXT, HOW),
                block("collection-process-details", "Collection details",
                      "Describe the collection instruments and procedures, "
                      "including sampling decisions.",
                      PERI, K.LONG_TEXT, HOW),
                block("collection-process-rationale", "Collection rationale",
                      "Why were these collection methods chosen, and which biases "
                      "might they introduce?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
        Section(id="transformations", title="Transformations & Validation", rows=(
            row("data-processing",
                block("data-processing", "Processing",
                      "Which processing steps transform the raw data?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("data-processing-details", "Processing details",
                      "Describe each processing step applied between collection "
                      "and release, in order.",
                      PERI, K.LONG_TEXT, HOW),
                block("data-processing-rationale", "Processing rationale",
                      "Why are these processing steps safe for the intended "
                      "applications?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("labeling-process",
                block("labeling-process", "Labeling",
                      "How were labels produced for the dataset?",
                      TEL, K.SHORT_TEXT, HOW),
                block("labeling-process-details", "Labeling details",
                      "Describe the labeling instructions, tooling, and label "
                      "verification steps.",
                      PERI, K.LONG_TEXT, HOW),
                block("labeling-process-rationale", "Labeling rationale",
                      "Why were labels produced this way, and which labels carry "
                      "the most uncertainty?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("rating-process",
                block("rating-process", "Rating",
                      "How were ratings obtained for datapoints?",
                      TEL, K.SHORT_TEXT, HOW),
                block("rating-process-details", "Rating details",
                      "Describe the rating workflow, the scales used, and the "
                      "rater population.",
                      PERI, K.LONG_TEXT, HOW),
                block("rating-process-rationale", "Rating rationale",
                      "Why is the rating process reliable, and where does it break "
                      "down?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("validation-process",
                block("validation-process", "Validation",
                      "How was the dataset validated before release?",
                      TEL, K.SHORT_TEXT, HOW),
                block("validation-process-details", "Validation details",
                      "Describe the validation checks, their coverage, and "
                      "observed failure rates.",
                      PERI, K.LONG_TEXT, HOW),
                block("validation-process-rationale", "Validation rationale",
                      "Why do the validation checks adequately cover the risks in "
                      "this data?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("adjudication-policies",
                block("adjudication-policies", "Adjudication",
                      "How are disagreements between raters adjudicated?",
                      TEL, K.SHORT_TEXT, HOW),
                block("adjudication-policies-details", "Adjudication details",
                      "Describe the adjudication policy, including tie-breaking "
                      "and escalation paths.",
                      PERI, K.LONG_TEXT, HOW),
                block("adjudication-policies-rationale", "Adjudication rationale",
                      "Why does this adjudication policy produce trustworthy final "
                      "labels?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("infrastructure",
                block("infrastructure", "Infrastructure",
                      "Where is the dataset stored and processed?",
                      TEL, K.SHORT_TEXT, WHERE),
                block("infrastructure-details", "Infrastructure details",
                      "Describe the pipelines and infrastructure the dataset "
                      "depends on.",
                      PERI, K.LONG_TEXT, HOW),
                block("infrastructure-rationale", "Infrastructure rationale",
                      "Why is this infrastructure appropriate for the dataset's "
                      "scale and sensitivity?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("known-patterns",
                block("known-patterns", "Known patterns",
                      "Which correlations or patterns in the data should users "
                      "know about?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("known-patterns-details", "Pattern details",
                      "Describe known correlations, biases, and artifacts "
                      "discovered in the data.",
                      PERI, K.LONG_TEXT, WHAT),
                block("known-patterns-rationale", "Pattern rationale",
                      "Why do these patterns arise, and how should users account "
                      "for them?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("fairness-evaluations",
                block("fairness-evaluations", "Fairness",
                      "Has the dataset been evaluated for fairness concerns?",
                      TEL, K.SINGLE_CHOICE, WHAT,
                      choice_list=choices(
                          ("evaluated", "Evaluated"),
                          ("partially-evaluated", "Partially evaluated"),
                          ("not-evaluated", "Not evaluated"))),
                block("fairness-evaluations-details", "Fairness details",
                      "Describe the fairness evaluations performed and their "
                      "headline findings.",
                      PERI, K.LONG_TEXT, HOW),
                block("fairness-evaluations-rationale", "Fairness rationale",
                      "Why were these fairness dimensions prioritized, and which "
                      "remain unexamined?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
        Section(id="versioning-and-maintenance", title="Versioning & Maintenance", rows=(
            row("updates",
                block("updates", "Update cadence",
                      "How often is the dataset updated?",
                      TEL, K.SINGLE_CHOICE, WHEN,
                      choice_list=choices(
                          ("never", "Never"), ("irregular", "Irregular"),
                          ("monthly", "Monthly"), ("quarterly", "Quarterly"),
                          ("yearly", "Yearly"))),
                block("updates-details", "Update details",
                      "Describe what changes in a typical update and how updates "
                      "are announced.",
                      PERI, K.LONG_TEXT, HOW),
                block("updates-rationale", "Update rationale",
                      "Why does the dataset follow this update cadence?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("maintenance-status",
                block("maintenance-status", "Maintenance",
                      "What is the maintenance status of this dataset?",
                      TEL, K.SINGLE_CHOICE, WHO,
                      choice_list=choices(
                          ("actively-maintained", "Actively maintained"),
                          ("limited-maintenance", "Limited maintenance"),
                          ("unmaintained", "Unmaintained"))),
                block("maintenance-status-details", "Maintenance details",
                      "Describe who performs maintenance and how reported issues "
                      "are triaged.",
                      PERI, K.LONG_TEXT, WHO),
                block("maintenance-status-rationale", "Maintenance rationale",
                      "Why is this maintenance level appropriate for the dataset's "
                      "expected use?",
                      MICRO, K.LONG_TEXT, WHY)),
            row("version-differences",
                block("version-differences", "Version differences",
                      "What distinguishes this version from the previous one?",
                      TEL, K.SHORT_TEXT, WHAT),
                block("version-differences-details", "Version difference details",
                      "Describe notable differences across versions, including "
                      "additions and removals.",
                      PERI, K.LONG_TEXT, WHAT),
                block("version-differences-rationale", "Version rationale",
                      "Why were the version changes made, and who is affected by "
                      "them?",
                      MICRO, K.LONG_TEXT, WHY)),
        )),
    )
    return Template(
        id="data-card-canonical",
        version=1,
        title="Data Card (canonical template)",
        sections=sections,
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    default_out = os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        "src", "datacardkit", "data", "canonical.dct.json")
    parser.add_argument("-o", "--output", default=default_out)
    args = parser.parse_args()

    template = build()
    diagnostics = lint_template(template)
    blocking = [d for d in diagnostics if d.rule.startswith(("STRUCT", "SCOPE", "OFTEN"))]
    for diag in diagnostics:
        print(diag.format(), file=sys.stderr)
    if blocking:
        print("refusing to write a template that fails its own lint", file=sys.stderr)
        return 1
    data = serialize(template)
    os.makedirs(os.path.dirname(args.output), exist_ok=True)
    with open(args.output, "wb") as fh:
        fh.write(data)
    blocks = list(template.blocks())
    themes = {b.theme for b in blocks}
    print(f"wrote {args.output}: {len(template.sections)} sections, "
          f"{len(blocks)} blocks, {len(themes)} themes, {len(data)} bytes")
    return 0


if __name__ == "__main__":
    sys.exit(main())
