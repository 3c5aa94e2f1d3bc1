// Shared shapes for the /api/v1 annotation service.

export type MessageType =
  | "personal_experience"
  | "news_experience"
  | "bereaved_experience"
  | "case_report"
  | "call_for_action"
  | "irrelevant";

export type Perspective = "problem_suffering" | "solution_coping" | "neither";

export type Person = "first" | "third" | "not_applicable";

export interface Dimensions {
  message_type: MessageType;
  perspective: Perspective;
  person: Person;
  serious: boolean;
  focus_on_bereaved: boolean;
  mentions_case: boolean;
}

export type TaxonomyLevel = 12 | 6 | 2;

export interface CategoryGuide {
  title: string;
  definition: string;
  examples: string[];
}

export interface TaxonomyPayload {
  fine_categories: string[];
  levels: { "12": string[]; "6": string[]; "2": string[] };
  task1_mapping: Record<string, string>;
  task2_mapping: Record<string, string>;
  guide: Record<string, CategoryGuide>;
  dimensions: {
    message_type: MessageType[];
    perspective: Perspective[];
    person: Person[];
    flags: string[];
  };
}

export interface Progress {
  done: number;
  total: number;
}

export interface RoundSummary {
  id: string;
  strategy: string;
  targets: Record<string, number> | number;
  size: number;
  coders: string[];
  seed: number;
  status: string;
  progress: Record<string, Progress>;
}

export interface TaskResponse {
  done: boolean;
  tweet: { id: string; text: string } | null;
  progress: Progress;
}

export interface LabelRecordResponse {
  seq: number;
  round: string;
  tweet_id: string;
  coder: string;
  category: string;
  dimensions: Dimensions | null;
  is_override: boolean;
  timestamp: string;
  hints: string[];
  client_key: string | null;
}

export interface DisagreementItem {
  tweet_id: string;
  text: string;
  labels: Record<string, string>;
}

export interface KappaResponse {
  level: number;
  exclude: string | null;
  kappa: number;
  po: number;
  pe: number;
  ci: [number, number];
  n: number;
  method: string;
}
