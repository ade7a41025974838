// Wire types, mirroring the annotation service API exactly. Item payloads
// carry no gold labels and no quality-control markers by design; these
// types are the full shape of what the client ever sees or sends.

export type ChoiceLabel = "A" | "The" | "Zero";

/** Fixed on-screen order: 1 = a/an, 2 = the, 3 = Zero (Ø). */
export const CHOICE_LABELS: readonly ChoiceLabel[] = ["A", "The", "Zero"];

export interface SessionSummary {
  session_id: string;
  total_items: number;
}

export interface SurveyItem {
  session_id: string;
  item_token: string;
  position: number; // 1-based
  total: number;
  sentences: [string, string, string];
  choices: string[]; // display strings, fixed order
}

export type NextItemResponse =
  | { status: "item"; item: SurveyItem }
  | { status: "completed" };

export type SubmitOutcome = "continue" | "completed" | "terminated_qc";

export interface SubmitResponseBody {
  item_token: string;
  choice: ChoiceLabel;
  elapsed_ms?: number;
}

export interface Meta {
  instructions: string;
  choices: string[];
  choice_labels: ChoiceLabel[];
  items_per_session: number;
}
