// Survey flow state machine. Mirrors the server session states: one screen
// per item, one outstanding request at a time, explicit instruction
// acknowledgment before the first item, and a hard stop on QC termination.
//
// Submission uses the server's per-item idempotency token: a network retry
// re-sends the same token, and a 409 on retry (the first attempt actually
// landed) resolves by asking the server for the next item.

import { ApiError, NetworkError } from "./api.js";
import {
  CHOICE_LABELS,
  type Meta,
  type NextItemResponse,
  type SessionSummary,
  type SubmitOutcome,
  type SubmitResponseBody,
  type SurveyItem,
} from "./types.js";

/** What the controller needs from the wire; ApiClient satisfies it. */
export interface SurveyApi {
  meta(): Promise<Meta>;
  createSession(participantId: string): Promise<SessionSummary>;
  nextItem(sessionId: string): Promise<NextItemResponse>;
  submitResponse(sessionId: string, body: SubmitResponseBody): Promise<{ outcome: SubmitOutcome }>;
}

export type Phase =
  | "boot"
  | "instructions"
  | "item"
  | "completed"
  | "terminated_qc"
  | "fatal";

export interface ControllerState {
  phase: Phase;
  instructions: string;
  item: SurveyItem | null;
  selected: number | null;
  busy: boolean;
  validationMessage: string | null;
  networkMessage: string | null;
  fatalMessage: string | null;
  showingInstructions: boolean; // instructions overlay on top of an item
  progress: { current: number; total: number } | null;
}

type Listener = (state: ControllerState) => void;

export class SurveyController {
  private state: ControllerState = {
    phase: "boot",
    instructions: "",
    item: null,
    selected: null,
    busy: false,
    validationMessage: null,
    networkMessage: null,
    fatalMessage: null,
    showingInstructions: false,
    progress: null,
  };
  private sessionId = "";
  private itemShownAt = 0;
  private readonly listeners: Listener[] = [];

  constructor(
    private readonly api: SurveyApi,
    private readonly now: () => number = Date.now,
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.snapshot());
  }

  snapshot(): ControllerState {
    return { ...this.state, progress: this.state.progress ? { ...this.state.progress } : null };
  }

  private update(patch: Partial<ControllerState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.snapshot());
  }

  async start(participantId: string): Promise<void> {
    this.update({ busy: true });
    try {
      const meta = await this.api.meta();
      const session = await this.api.createSession(participantId);
      this.sessionId = session.session_id;
      this.update({
        phase: "instructions",
        instructions: meta.instructions,
        busy: false,
        progress: { current: 0, total: session.total_items },
      });
    } catch (err) {
      this.fail(err);
    }
  }

  /** Explicit acknowledgment gates the first item. */
  async acknowledgeInstructions(): Promise<void> {
    if (this.state.phase !== "instructions" || this.state.busy) return;
    await this.fetchNext();
  }

  /** Instructions stay viewable mid-survey; toggling never touches the session. */
  toggleInstructions(show: boolean): void {
    this.update({ showingInstructions: show });
  }

  selectChoice(index: number): void {
    if (this.state.phase !== "item" || this.state.busy) return;
    if (index < 0 || index >= CHOICE_LABELS.length) return;
    this.update({ selected: index, validationMessage: null });
  }

  handleKey(key: string): void {
    if (key === "1" || key === "2" || key === "3") {
      this.selectChoice(Number(key) - 1);
    } else if (key === "Enter") {
      void this.submit();
    }
  }

  async submit(): Promise<void> {
    const { phase, busy, item, selected } = this.state;
    if (phase !== "item" || busy || item === null) return;
    if (selected === null) {
      // inline validation; no request leaves the client
      this.update({ validationMessage: "Pick one of the three options first." });
      return;
    }
    const choice = CHOICE_LABELS[selected];
    if (choice === undefined) return;
    this.update({ busy: true, networkMessage: null });
    try {
      const { outcome } = await this.api.submitResponse(this.sessionId, {
        item_token: item.item_token, // idempotency token: stable across retries
        choice,
        elapsed_ms: Math.max(0, this.now() - this.itemShownAt),
      });
      if (outcome === "continue") {
        await this.fetchNext();
      } else if (outcome === "completed") {
        this.update({ phase: "completed", item: null, busy: false });
      } else {
        this.update({ phase: "terminated_qc", busy: false, item: null, selected: null });
      }
    } catch (err) {
      if (err instanceof NetworkError) {
        // same item, same token; the user just presses submit again
        this.update({
          busy: false,
          networkMessage: "Connection problem; your answer was not lost. Try again.",
        });
      } else if (err instanceof ApiError && err.status === 409) {
        // the earlier attempt landed after all; the server knows best
        await this.fetchNext();
      } else {
        this.fail(err);
      }
    }
  }

  private async fetchNext(): Promise<void> {
    this.update({ busy: true });
    try {
      const next = await this.api.nextItem(this.sessionId);
      if (next.status === "completed") {
        this.update({ phase: "completed", item: null, busy: false });
        return;
      }
      this.itemShownAt = this.now();
      this.update({
        phase: "item",
        item: next.item,
        selected: null,
        busy: false,
        validationMessage: null,
        networkMessage: null,
        progress: { current: next.item.position, total: next.item.total },
      });
    } catch (err) {
      if (err instanceof ApiError && err.status === 409 && /qc_failed/.test(err.detail)) {
        this.update({ phase: "terminated_qc", busy: false, item: null, selected: null });
      } else {
        this.fail(err);
      }
    }
  }

  private fail(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.update({ phase: "fatal", fatalMessage: message, busy: false });
  }
}
