// Client-side mirror of the service's category rule engine, used only for
// the live preview while a coder fills the form. The service remains the
// source of truth; a contract test pins this module to the service output.

import type { Dimensions } from "./types.js";

export interface ValidationIssue {
  field: string;
  message: string;
}

const PERSONAL_TYPES = new Set(["personal_experience", "bereaved_experience"]);

const GRID: Record<string, [string, string]> = {
  personal_experience: ["suicidal_ideation_attempts", "coping"],
  news_experience: ["news_suicidal", "news_coping"],
  bereaved_experience: ["bereaved_negative", "bereaved_coping"],
  case_report: ["suicide_cases", "lives_saved"],
  call_for_action: ["awareness", "prevention"],
};

export function validate(dims: Dimensions): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  const irrelevant = dims.message_type === "irrelevant";
  if (dims.perspective === "neither" && !irrelevant) {
    issues.push({
      field: "perspective",
      message: "'neither' is only possible for irrelevant postings",
    });
  }
  if (!dims.serious && !irrelevant) {
    issues.push({
      field: "serious",
      message: "only irrelevant postings can be marked not serious",
    });
  }
  if (PERSONAL_TYPES.has(dims.message_type)) {
    if (dims.person === "not_applicable") {
      issues.push({
        field: "person",
        message: "personal stories need a first/third person judgment",
      });
    }
  } else if (dims.person !== "not_applicable") {
    issues.push({
      field: "person",
      message: `person does not apply to ${dims.message_type} postings`,
    });
  }
  if (dims.focus_on_bereaved && !dims.mentions_case) {
    issues.push({
      field: "focus_on_bereaved",
      message: "a bereaved story necessarily refers to a suicide case",
    });
  }
  if (dims.message_type === "bereaved_experience" && !dims.focus_on_bereaved) {
    issues.push({
      field: "focus_on_bereaved",
      message: "bereaved-experience postings focus on the bereaved",
    });
  }
  if (irrelevant && dims.focus_on_bereaved) {
    issues.push({
      field: "focus_on_bereaved",
      message: "a posting focused on a bereaved person is not irrelevant",
    });
  }
  return issues;
}

export function deriveCategory(dims: Dimensions): string {
  const issues = validate(dims);
  if (issues.length > 0) {
    throw new Error(`invalid annotation: ${issues[0]!.field}`);
  }
  if (dims.message_type === "irrelevant") {
    if (!dims.serious) return "off_topic";
    if (dims.perspective !== "neither" || dims.mentions_case) return "suicide_other";
    return "off_topic";
  }
  const solution = dims.perspective === "solution_coping";
  if (dims.focus_on_bereaved) {
    return solution ? "bereaved_coping" : "bereaved_negative";
  }
  if (dims.mentions_case) {
    return "suicide_cases";
  }
  const cell = GRID[dims.message_type]!;
  return solution ? cell[1] : cell[0];
}

export function previewCategory(dims: Dimensions): string | null {
  return validate(dims).length === 0 ? deriveCategory(dims) : null;
}
